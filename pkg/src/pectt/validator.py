"""Independent solution certifier.

Recomputes every constraint from raw instance data: no conflict matrix, no
propagated windows, no incremental bookkeeping.  By policy this module shares
nothing with the search-side evaluation beyond the Instance type, so it can
catch bugs there.  It consumes completed timetables (every scheduled event in
a concrete room), which is also what solution files carry.

Violation costs follow the search's pricing so reports cross-check against
cost breakdowns: students of the event for unscheduled entries, the smaller
enrolment count for conflict/precedence pairs, and 1 for the room/availability
violations a search state can never produce.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .instance_io import InstanceFormat, load_instance, parse_solution
from .model import DUMMY_PAIR, Formulation, Instance

HARD_TAGS = ("H1", "H2", "H3", "H4", "H5", "H6")


class ValidationError(ValueError):
    """Malformed assignment, as opposed to a well-formed one with violations."""


@dataclass(frozen=True)
class Violation:
    tag: str
    ids: tuple[int, ...]
    cost: int


@dataclass
class ViolationReport:
    formulation: Formulation
    violations: list[Violation]
    totals: dict[str, int]
    counts: dict[str, int]
    distance_to_feasibility: int
    soft_late: int
    soft_consecutive: int
    soft_isolated: int
    unscheduled_count: int
    truncated: bool = field(default=False)

    @property
    def objective(self) -> int:
        return self.soft_late + self.soft_consecutive + self.soft_isolated

    @property
    def valid(self) -> bool:
        """All hard constraints hold among scheduled events."""
        return all(self.counts[t] == 0 for t in ("H1", "H2", "H3", "H4", "H5"))

    @property
    def feasible(self) -> bool:
        """Valid and nothing left unscheduled."""
        return self.valid and self.unscheduled_count == 0

    def score(self) -> tuple[int, int]:
        if self.formulation is Formulation.HARD_ONLY:
            return self.unscheduled_count, 0
        return self.distance_to_feasibility, self.objective

    def summary(self) -> dict[str, object]:
        out: dict[str, object] = {}
        for tag in HARD_TAGS:
            out[f"{tag.lower()}_count"] = self.counts[tag]
            out[f"{tag.lower()}_cost"] = self.totals[tag]
        out.update(
            distance=self.distance_to_feasibility,
            unscheduled_events=self.unscheduled_count,
            soft_late=self.soft_late,
            soft_consecutive=self.soft_consecutive,
            soft_isolated=self.soft_isolated,
            objective=self.objective,
            valid=self.valid,
            feasible=self.feasible,
        )
        return out


def validate(
    inst: Instance,
    assignment: list[tuple[int, int]],
    formulation: Formulation | None = None,
    max_violations: int = 10_000,
) -> ViolationReport:
    """Certify a completed timetable against every constraint of ``formulation``.

    ``assignment`` holds one 1-based (timeslot, room) pair per event, with the
    dummy pair for unscheduled events.  The violation list is capped at
    ``max_violations`` entries; counts and cost totals stay exact.
    """
    if formulation is None:
        formulation = inst.formulation
    E, R, T = inst.num_events, inst.num_rooms, inst.num_timeslots
    if len(assignment) != E:
        raise ValidationError(f"expected {E} assignment pairs, got {len(assignment)}")
    for e, (t, r) in enumerate(assignment, start=1):
        if (t, r) == DUMMY_PAIR:
            continue
        if not (1 <= t <= T) or not (1 <= r <= R):
            raise ValidationError(
                f"event {e}: pair ({t}, {r}) is neither in range nor the dummy pair"
            )

    violations: list[Violation] = []
    totals = {tag: 0 for tag in HARD_TAGS}
    counts = {tag: 0 for tag in HARD_TAGS}
    truncated = False

    def add(tag: str, ids: tuple[int, ...], cost: int) -> None:
        nonlocal truncated
        totals[tag] += cost
        counts[tag] += 1
        if len(violations) < max_violations:
            violations.append(Violation(tag, ids, cost))
        else:
            truncated = True

    size = [len(inst.enrolment[e]) for e in range(E)]
    scheduled = [
        (e, t, r) for e, (t, r) in enumerate(assignment, start=1) if (t, r) != DUMMY_PAIR
    ]

    # H1 conflicts: shared students, same timeslot
    by_slot: dict[int, list[int]] = {}
    for e, t, _r in scheduled:
        by_slot.setdefault(t, []).append(e)
    for t, events in sorted(by_slot.items()):
        for i, e1 in enumerate(events):
            s1 = inst.enrolment[e1 - 1]
            for e2 in events[i + 1 :]:
                if s1 & inst.enrolment[e2 - 1]:
                    add("H1", (e1, e2, t), min(size[e1 - 1], size[e2 - 1]))

    # H2 compatibility: room must have the features and the seats
    for e, t, r in scheduled:
        if (
            not inst.event_features[e - 1] <= inst.room_features[r - 1]
            or inst.room_capacity[r - 1] < size[e - 1]
        ):
            add("H2", (e, r), 1)

    # H3 occupancy: one event per room per timeslot
    seen: dict[tuple[int, int], int] = {}
    for e, t, r in scheduled:
        if (t, r) in seen:
            add("H3", (seen[(t, r)], e, t, r), 1)
        else:
            seen[(t, r)] = e

    # H4 availability (raw relation, only meaningful in the full formulation)
    for e, t, _r in scheduled:
        if not inst.availability[e - 1, t - 1]:
            add("H4", (e, t), 1)

    # H5 precedences
    pos = {e: t for e, t, _r in scheduled}
    for e1, e2 in sorted(inst.precedences):
        if e1 in pos and e2 in pos and pos[e1] >= pos[e2]:
            add("H5", (e1, e2), min(size[e1 - 1], size[e2 - 1]))

    # H6 unscheduled events
    for e, pair in enumerate(assignment, start=1):
        if pair == DUMMY_PAIR:
            add("H6", (e,), size[e - 1])

    s1 = s2 = s3 = 0
    if formulation.has_soft_costs:
        spd = inst.slots_per_day
        last = set(inst.last_slots())
        for e, t, _r in scheduled:
            if t in last:
                s1 += size[e - 1]
        slots_of: dict[int, set[int]] = {}
        events_per_day: dict[tuple[int, int], int] = {}
        for e, t, _r in scheduled:
            d = (t - 1) // spd
            for s in inst.enrolment[e - 1]:
                slots_of.setdefault(s, set()).add(t)
                events_per_day[(s, d)] = events_per_day.get((s, d), 0) + 1
        for slots in slots_of.values():
            for d in range(inst.num_days):
                run = 0
                for i in range(1, spd + 1):
                    if d * spd + i in slots:
                        run += 1
                    else:
                        if run > 2:
                            s2 += run - 2
                        run = 0
                if run > 2:
                    s2 += run - 2
        s3 = sum(1 for n in events_per_day.values() if n == 1)

    return ViolationReport(
        formulation=formulation,
        violations=violations,
        totals=totals,
        counts=counts,
        distance_to_feasibility=totals["H6"],
        soft_late=s1,
        soft_consecutive=s2,
        soft_isolated=s3,
        unscheduled_count=counts["H6"],
        truncated=truncated,
    )


def validate_file(
    instance_path: str | Path,
    solution_path: str | Path,
    fmt: InstanceFormat,
    formulation: Formulation,
) -> ViolationReport:
    """Parse instance and solution files, then certify."""
    inst = load_instance(instance_path, fmt, formulation)
    assignment = parse_solution(
        Path(solution_path).read_text(),
        inst.num_events,
        inst.num_timeslots,
        inst.num_rooms,
    )
    return validate(inst, assignment, formulation)
