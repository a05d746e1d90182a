"""Certify solution files with the independent validator.

Builds an instance, writes a correct solution and a deliberately broken one
(a conflicting pair forced into one timeslot, one event unscheduled), and
shows what the validator reports for each: per-violation entries, exact
totals, validity and feasibility flags, and the hierarchical score.
"""

import tempfile
from pathlib import Path

from pectt import (
    DUMMY_PAIR,
    SAParams,
    SolverVariant,
    preprocess,
    run,
    validate,
    write_solution,
)

import sys

sys.path.insert(0, str(Path(__file__).parent))
from solve_synthetic import build_instance  # noqa: E402


def show(report, title):
    print(f"--- {title} ---")
    print(f"valid: {report.valid}   feasible: {report.feasible}   "
          f"score: {report.score()}")
    for v in report.violations[:8]:
        print(f"  {v.tag} ids={v.ids} cost={v.cost}")
    if len(report.violations) > 8:
        print(f"  ... {len(report.violations) - 8} more")
    print()


def main():
    inst = build_instance(seed=5, num_events=25, num_rooms=4)
    pre = preprocess(inst)
    result = run(pre, SolverVariant.I0_MEMINUS_SE,
                 SAParams(t0=10, rho=100, iterations=500_000, seed=0))
    good = result.best_assignment
    show(validate(inst, good), "solver output")

    # sabotage: drop one event and pile two conflicting events into one slot
    bad = list(good)
    bad[0] = DUMMY_PAIR
    for e1 in range(1, inst.num_events + 1):
        for e2 in range(e1 + 1, inst.num_events + 1):
            if inst.enrolment[e1 - 1] & inst.enrolment[e2 - 1]:
                t1, _ = bad[e1 - 1]
                if t1 == 0:
                    continue
                _, r2 = bad[e2 - 1]
                bad[e2 - 1] = (t1, r2)
                break
        else:
            continue
        break
    show(validate(inst, bad), "sabotaged copy")

    scratch = Path(tempfile.mkdtemp(prefix="pectt-validate-"))
    path = scratch / "good.sln"
    path.write_text(write_solution(good))
    print(f"solution file written to {path} (0-based 'timeslot room' lines, "
          "-1 -1 for unscheduled)")


if __name__ == "__main__":
    main()
