"""Shared fixtures: synthetic instance generators and brute-force oracles."""

from __future__ import annotations

import numpy as np

from pectt import Formulation, Instance, enrolment_count, preprocess
from pectt.search import SearchState, SplitMix, init_i0, random_move


def random_instance(
    rng: np.random.Generator,
    max_events: int = 12,
    max_rooms: int = 3,
    num_timeslots: int = 15,
    num_days: int = 3,
    max_students: int = 20,
    max_features: int = 3,
    formulation: Formulation = Formulation.FULL,
    avail_density: float = 0.85,
    prec_pairs: int = 3,
) -> Instance:
    E = int(rng.integers(1, max_events + 1))
    R = int(rng.integers(1, max_rooms + 1))
    S = int(rng.integers(1, max_students + 1))
    F = int(rng.integers(0, max_features + 1))
    enrol = []
    for _ in range(E):
        k = int(rng.integers(0, max(2, S // 2) + 1))
        chosen = rng.choice(S, size=min(k, S), replace=False)
        enrol.append(frozenset(int(s) + 1 for s in chosen))
    room_feat = [
        frozenset(int(f) + 1 for f in np.flatnonzero(rng.random(F) < 0.6))
        for _ in range(R)
    ]
    event_feat = [
        frozenset(int(f) + 1 for f in np.flatnonzero(rng.random(F) < 0.25))
        for _ in range(E)
    ]
    capacity = rng.integers(0, max(2, max_students) + 1, size=R)
    if formulation is Formulation.FULL:
        avail = rng.random((E, num_timeslots)) < avail_density
        prec: set[tuple[int, int]] = set()
        for _ in range(prec_pairs):
            if E < 2:
                break
            a, b = rng.choice(E, size=2, replace=False)
            lo, hi = int(min(a, b)) + 1, int(max(a, b)) + 1
            prec.add((lo, hi))  # ascending ids keep the relation acyclic
    else:
        avail = np.ones((E, num_timeslots), dtype=bool)
        prec = set()
    return Instance(
        num_events=E,
        num_rooms=R,
        num_students=S,
        num_features=F,
        num_timeslots=num_timeslots,
        num_days=num_days,
        room_capacity=capacity,
        enrolment=enrol,
        room_features=room_feat,
        event_features=event_feat,
        availability=avail,
        precedences=frozenset(prec),
        formulation=formulation,
    )


def instances_equal(a: Instance, b: Instance) -> bool:
    return (
        (a.num_events, a.num_rooms, a.num_students, a.num_features)
        == (b.num_events, b.num_rooms, b.num_students, b.num_features)
        and a.num_timeslots == b.num_timeslots
        and a.num_days == b.num_days
        and (a.room_capacity == b.room_capacity).all()
        and a.enrolment == b.enrolment
        and a.room_features == b.room_features
        and a.event_features == b.event_features
        and (a.availability == b.availability).all()
        and a.precedences == b.precedences
        and a.formulation is b.formulation
    )


def random_state(inst: Instance, seed: int, warmup_moves: int = 0) -> SearchState:
    """A reachable search state: greedy init plus a few random applied moves."""
    from pectt.search import apply_move

    pre = preprocess(inst)
    rng = SplitMix(seed)
    state = init_i0(pre, rng)
    for _ in range(warmup_moves):
        try:
            move = random_move(state, rng, sr=0.4)
        except Exception:
            break
        apply_move(state, move)
    return state


def score_assignment(inst: Instance, assignment: list[tuple[int, int]]) -> tuple[int, int]:
    """(distance, objective) of a timetable, straight from the definitions."""
    spd = inst.slots_per_day
    distance = 0
    s1 = s2 = s3 = 0
    slots_of: dict[int, set[int]] = {}
    events_day: dict[tuple[int, int], int] = {}
    for e, (t, _r) in enumerate(assignment, start=1):
        if t == 0:
            distance += len(inst.enrolment[e - 1])
            continue
        if t % spd == 0:
            s1 += len(inst.enrolment[e - 1])
        d = (t - 1) // spd
        for s in inst.enrolment[e - 1]:
            slots_of.setdefault(s, set()).add(t)
            events_day[(s, d)] = events_day.get((s, d), 0) + 1
    if inst.formulation.has_soft_costs:
        for slots in slots_of.values():
            for d in range(inst.num_days):
                runlen = 0
                for i in range(1, spd + 1):
                    if d * spd + i in slots:
                        runlen += 1
                    else:
                        if runlen > 2:
                            s2 += runlen - 2
                        runlen = 0
                if runlen > 2:
                    s2 += runlen - 2
        s3 = sum(1 for v in events_day.values() if v == 1)
    else:
        s1 = s2 = s3 = 0
    return distance, s1 + s2 + s3


def enumerate_best_score(inst: Instance) -> tuple[int, int]:
    """Exhaustive optimum of the hierarchical (distance, objective) score over
    all valid timetables.  Viable only for a handful of events.

    Options per event respect compatibility/availability; occupancy, conflicts
    and precedences are enforced during the recursion, so every complete leaf
    is a valid timetable.
    """
    pre = preprocess(inst)
    E, R, T = inst.num_events, inst.num_rooms, inst.num_timeslots
    options: list[list[tuple[int, int]]] = []
    for e in range(1, E + 1):
        opts = [(0, 0)]
        for t in range(1, T + 1):
            if not inst.availability[e - 1, t - 1]:
                continue
            lo, hi = pre.slot_window[e - 1]
            if not (lo <= t <= hi):
                continue
            for r in range(1, R + 1):
                if pre.theta_r[e - 1, r - 1]:
                    opts.append((t, r))
        options.append(opts)

    best: tuple[int, int] | None = None
    assignment: list[tuple[int, int]] = [(0, 0)] * E

    def conflicts_ok(e: int, t: int) -> bool:
        for e2 in range(1, e):
            t2, _ = assignment[e2 - 1]
            if t2 == t and inst.enrolment[e - 1] & inst.enrolment[e2 - 1]:
                return False
        return True

    def precedence_ok(e: int, t: int) -> bool:
        for a, b in inst.precedences:
            if a == e and b < e:
                tb = assignment[b - 1][0]
                if tb != 0 and t >= tb:
                    return False
            if b == e and a < e:
                ta = assignment[a - 1][0]
                if ta != 0 and ta >= t:
                    return False
        return True

    def recurse(e: int, used: set[tuple[int, int]]):
        nonlocal best
        if e > E:
            score = score_assignment(inst, assignment)
            if best is None or score < best:
                best = score
            return
        for t, r in options[e - 1]:
            if t != 0:
                if (t, r) in used:
                    continue
                if not conflicts_ok(e, t):
                    continue
                if not precedence_ok(e, t):
                    continue
                used.add((t, r))
                assignment[e - 1] = (t, r)
                recurse(e + 1, used)
                used.remove((t, r))
            else:
                assignment[e - 1] = (0, 0)
                recurse(e + 1, used)
        assignment[e - 1] = (0, 0)

    recurse(1, set())
    assert best is not None
    return best


def total_enrolment(inst: Instance) -> int:
    return sum(enrolment_count(inst, e) for e in range(1, inst.num_events + 1))
