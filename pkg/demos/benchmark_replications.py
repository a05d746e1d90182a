"""Run a miniature seeded benchmark and aggregate it like the result tables.

Writes two synthetic instance files and a manifest into a scratch directory,
dispatches 5 replications each (seeds base+0..base+4), re-certifies every
solution with the validator, and prints the avg / best / %feasible table
plus the per-run CSV.
"""

import tempfile
from pathlib import Path

import numpy as np

from pectt import preprocess, write_instance
from pectt.bench_cli import read_manifest, run_benchmark, write_csv

import sys

sys.path.insert(0, str(Path(__file__).parent))
from solve_synthetic import build_instance  # noqa: E402


def main():
    scratch = Path(tempfile.mkdtemp(prefix="pectt-bench-"))
    for seed, name in ((11, "alpha"), (22, "beta")):
        inst = build_instance(seed=seed, num_events=30, num_rooms=4)
        (scratch / f"{name}.tim").write_text(write_instance(inst))
        stuck = [
            e for e in range(1, inst.num_events + 1)
            if not preprocess(inst).theta_r[e - 1].any()
        ]
        if stuck:
            print(f"note: {name} has {len(stuck)} events no room can host; "
                  "their students bound the distance from below")
    manifest = scratch / "set.manifest"
    manifest.write_text("alpha.tim itc2007\nbeta.tim itc2007\n")

    entries = read_manifest(manifest)
    records, rows = run_benchmark(
        entries,
        runs=5,
        jobs=2,
        seed_base=100,
        iterations=500_000,
        outdir=scratch / "solutions",
    )
    csv_path = scratch / "bench.csv"
    write_csv(records, csv_path)

    print(f"{'instance':12s} {'runs':>4s} {'avg obj':>9s} {'best':>6s} "
          f"{'%feas':>6s} {'avg dist':>9s}")
    for row in rows:
        best = row.best_objective if row.best_objective is not None else "-"
        print(f"{row.instance:12s} {row.runs:4d} {row.avg_objective:9.2f} "
              f"{best!s:>6s} {row.pct_feasible:6.1f} {row.avg_distance:9.2f}")

    print(f"\nper-run CSV ({csv_path}):")
    print(csv_path.read_text())
    print(f"solution files: {sorted(p.name for p in (scratch / 'solutions').iterdir())}")


if __name__ == "__main__":
    main()
