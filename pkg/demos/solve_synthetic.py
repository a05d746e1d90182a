"""Solve a small synthetic timetabling problem end to end.

Builds an instance in code (no files), runs a short annealing schedule,
certifies the result with the independent validator, and prints the cost
breakdown.  Takes a few seconds; the first run also pays the JIT compile.
"""

import numpy as np

from pectt import (
    Formulation,
    Instance,
    SAParams,
    SolverVariant,
    preprocess,
    run,
    validate,
    write_solution,
)


def build_instance(seed=1, num_events=40, num_rooms=4, num_students=60):
    rng = np.random.default_rng(seed)
    enrol = []
    for _ in range(num_events):
        take = rng.integers(2, 10)
        enrol.append(frozenset(int(s) + 1 for s in rng.choice(num_students, take, replace=False)))
    features = 3
    room_feat = [
        frozenset(int(f) + 1 for f in np.flatnonzero(rng.random(features) < 0.7))
        for _ in range(num_rooms)
    ]
    event_feat = [
        frozenset(int(f) + 1 for f in np.flatnonzero(rng.random(features) < 0.15))
        for _ in range(num_events)
    ]
    availability = rng.random((num_events, 45)) < 0.9
    precedences = set()
    for _ in range(6):
        a, b = rng.choice(num_events, 2, replace=False)
        precedences.add((int(min(a, b)) + 1, int(max(a, b)) + 1))
    return Instance(
        num_events=num_events,
        num_rooms=num_rooms,
        num_students=num_students,
        num_features=features,
        num_timeslots=45,
        num_days=5,
        room_capacity=rng.integers(8, 30, num_rooms),
        enrolment=enrol,
        room_features=room_feat,
        event_features=event_feat,
        availability=availability,
        precedences=frozenset(precedences),
        formulation=Formulation.FULL,
    )


def main():
    inst = build_instance()
    print(f"instance: {inst.num_events} events, {inst.num_rooms} rooms, "
          f"{inst.num_students} students, {len(inst.precedences)} precedences")

    pre = preprocess(inst)
    print(f"all-room events: {len(pre.all_room_events)}, "
          f"one-room events: {len(pre.one_room_events)}, "
          f"room order: {pre.room_order}")

    params = SAParams(t0=10.0, rho=100.0, iterations=2_000_000, seed=7)
    result = run(pre, SolverVariant.I0_MEMINUS_SE, params)
    print(f"\nannealed {result.iterations} proposals "
          f"({result.accepted} accepted, {result.stalls} stalls)")

    report = validate(inst, result.best_assignment)
    print(f"valid: {report.valid}, feasible: {report.feasible}")
    print(f"score (distance, objective): {report.score()}")
    for key, value in report.summary().items():
        print(f"  {key:20s}{value}")

    print("\nfirst 10 solution lines (timeslot room, 0-based):")
    for line in write_solution(result.best_assignment).splitlines()[:10]:
        print(" ", line)


if __name__ == "__main__":
    main()
