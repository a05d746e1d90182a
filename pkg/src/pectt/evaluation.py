"""Cost components, scalar search cost and exact move deltas.

The relaxed hard constraints (conflicts, precedences, unscheduled events)
are priced in students: an unscheduled event costs its enrolment count, a
violated conflicting or precedence pair costs the smaller of the two
enrolment counts.  In the endgame (the closing fraction of the iteration
budget) conflict and precedence costs are doubled so that any residual hard
violation concentrates in the unscheduled component.

Functions here recompute from the assignment in plain Python; they are the
reference the incremental kernel deltas are tested against move by move.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING

from . import _kernel as _k
from .model import DUMMY_TIMESLOT, Formulation

if TYPE_CHECKING:
    from .search import Move, SearchState


class EvalPhase(Enum):
    NORMAL = 1
    ENDGAME = 2

    @property
    def multiplier(self) -> int:
        return 2 if self is EvalPhase.ENDGAME else 1


@dataclass(frozen=True)
class CostBreakdown:
    """Undoubled cost components of one state.

    ``scalar_f`` folds them into the scalar the annealer minimizes; the
    hierarchical reported score compares (distance, objective) pairs and is
    never derived from the scalar.
    """

    distance_to_feasibility: int
    hard_conflicts: int
    hard_precedences: int
    soft_late: int
    soft_consecutive: int
    soft_isolated: int

    @property
    def objective(self) -> int:
        return self.soft_late + self.soft_consecutive + self.soft_isolated

    @property
    def hard_total(self) -> int:
        return self.distance_to_feasibility + self.hard_conflicts + self.hard_precedences

    def scalar_f(self, w: int = 1, phase: EvalPhase = EvalPhase.NORMAL) -> int:
        m = phase.multiplier
        return (
            w
            * (
                self.distance_to_feasibility
                + m * (self.hard_conflicts + self.hard_precedences)
            )
            + self.objective
        )

    def as_dict(self) -> dict[str, int]:
        return {
            "distance": self.distance_to_feasibility,
            "conflicts": self.hard_conflicts,
            "precedences": self.hard_precedences,
            "soft_late": self.soft_late,
            "soft_consecutive": self.soft_consecutive,
            "soft_isolated": self.soft_isolated,
            "objective": self.objective,
        }


def _scheduled_slots(state: "SearchState") -> list[tuple[int, int]]:
    # (event, timeslot) 1-based for scheduled events only
    return [
        (e, t)
        for e, (t, _r) in enumerate(state.assignment(), start=1)
        if t != DUMMY_TIMESLOT
    ]


def soft_late(state: "SearchState") -> int:
    """Students attending events in the last timeslot of any day."""
    inst = state.instance
    if not inst.formulation.has_soft_costs:
        return 0
    last = set(inst.last_slots())
    return sum(
        len(inst.enrolment[e - 1]) for e, t in _scheduled_slots(state) if t in last
    )


def _attendance(state: "SearchState") -> dict[int, set[int]]:
    # student -> set of attended timeslots (1-based); overlaps collapse
    att: dict[int, set[int]] = {}
    inst = state.instance
    for e, t in _scheduled_slots(state):
        for s in inst.enrolment[e - 1]:
            att.setdefault(s, set()).add(t)
    return att


def soft_consecutive(state: "SearchState") -> int:
    """Per student and day, (L - 2) for every maximal run of L > 2 attended
    consecutive timeslots; runs never cross day boundaries."""
    inst = state.instance
    if not inst.formulation.has_soft_costs:
        return 0
    spd = inst.slots_per_day
    total = 0
    for slots in _attendance(state).values():
        for d in range(inst.num_days):
            run = 0
            for i in range(1, spd + 1):
                if d * spd + i in slots:
                    run += 1
                else:
                    if run > 2:
                        total += run - 2
                    run = 0
            if run > 2:
                total += run - 2
    return total


def soft_isolated(state: "SearchState") -> int:
    """Per day, the number of students attending exactly one event that day."""
    inst = state.instance
    if not inst.formulation.has_soft_costs:
        return 0
    spd = inst.slots_per_day
    per_day: dict[tuple[int, int], int] = {}
    for e, t in _scheduled_slots(state):
        d = (t - 1) // spd
        for s in inst.enrolment[e - 1]:
            per_day[(s, d)] = per_day.get((s, d), 0) + 1
    return sum(1 for n in per_day.values() if n == 1)


def hard_costs(
    state: "SearchState", phase: EvalPhase = EvalPhase.NORMAL
) -> tuple[int, int, int]:
    """(distance, conflicts, precedences); the latter two doubled in the
    endgame.  Unscheduled events contribute only to the distance term."""
    inst = state.instance
    pre = state.pre
    slots = {e: t for e, t in _scheduled_slots(state)}
    distance = sum(
        len(inst.enrolment[e - 1])
        for e in range(1, inst.num_events + 1)
        if e not in slots
    )
    conflicts = 0
    scheduled = sorted(slots)
    for i, e1 in enumerate(scheduled):
        for e2 in scheduled[i + 1 :]:
            if slots[e1] == slots[e2] and pre.theta_e[e1 - 1, e2 - 1]:
                conflicts += int(pre.pair_violation_cost[e1 - 1, e2 - 1])
    precedences = 0
    for e1, e2 in inst.precedences:
        if e1 in slots and e2 in slots and slots[e1] >= slots[e2]:
            precedences += int(pre.pair_violation_cost[e1 - 1, e2 - 1])
    m = phase.multiplier
    return distance, m * conflicts, m * precedences


def full_breakdown(state: "SearchState") -> CostBreakdown:
    """Recompute every component from the assignment (no incremental data)."""
    distance, conflicts, precedences = hard_costs(state, EvalPhase.NORMAL)
    return CostBreakdown(
        distance_to_feasibility=distance,
        hard_conflicts=conflicts,
        hard_precedences=precedences,
        soft_late=soft_late(state),
        soft_consecutive=soft_consecutive(state),
        soft_isolated=soft_isolated(state),
    )


def scalar_cost(
    breakdown: CostBreakdown, w: int = 1, phase: EvalPhase = EvalPhase.NORMAL
) -> int:
    return breakdown.scalar_f(w, phase)


def delta_cost(
    state: "SearchState",
    move: "Move",
    phase: EvalPhase = EvalPhase.NORMAL,
    w: int = 1,
) -> int:
    """Exact scalar change of ``move``, computed incrementally and leaving the
    state untouched.  Raises ValueError for stale or inadmissible moves."""
    from .search import _check_fresh

    _check_fresh(state, move)
    ki, ks = state.ki, state.ks
    m = phase.multiplier
    if move.kind == "me":
        t0 = move.timeslot - 1 if move.timeslot != DUMMY_TIMESLOT else -1
        return int(_k.peek_me(ki, ks, move.event - 1, t0, move.room - 1, w, m))
    return int(
        _k.peek_se(
            ki,
            ks,
            move.event1 - 1,
            move.event2 - 1,
            move.room1 - 1,
            move.room2 - 1,
            w,
            m,
        )
    )


def reported_score(
    state: "SearchState", formulation: Formulation | None = None
) -> tuple[int, int]:
    """Hierarchical (primary, secondary) score.

    Full/Original report (students left unscheduled, objective).  Hard-only
    reports (unscheduled event count, 0) while the search itself still
    minimizes the students-based distance.
    """
    if formulation is None:
        formulation = state.instance.formulation
    b = state.breakdown()
    if formulation is Formulation.HARD_ONLY:
        return state.unscheduled_count(), 0
    return b.distance_to_feasibility, b.objective
