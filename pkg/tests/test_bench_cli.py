import numpy as np
import pytest

from pectt import Formulation, write_instance
from pectt.bench_cli import CSV_HEADER, aggregate, main, read_manifest

from helpers import random_instance


@pytest.fixture(scope="module")
def instance_file(tmp_path_factory):
    rng = np.random.default_rng(202)
    inst = random_instance(
        rng,
        max_events=8,
        max_rooms=2,
        num_timeslots=45,
        num_days=5,
        formulation=Formulation.FULL,
    )
    path = tmp_path_factory.mktemp("data") / "tiny.tim"
    path.write_text(write_instance(inst))
    return path


@pytest.fixture(scope="module")
def plain_file(tmp_path_factory):
    rng = np.random.default_rng(404)
    inst = random_instance(
        rng,
        max_events=6,
        max_rooms=2,
        num_timeslots=45,
        num_days=5,
        formulation=Formulation.ORIGINAL,
    )
    path = tmp_path_factory.mktemp("data") / "plain.tim"
    path.write_text(write_instance(inst))
    return path


SOLVE_BASE = ["--t0", "5", "--rho", "20", "--iterations", "30000", "--seed", "3"]


def test_solve_writes_solution_and_validates(instance_file, tmp_path, capsys):
    out = tmp_path / "s.sln"
    trace = tmp_path / "t.csv"
    code = main(
        [
            "solve",
            "--instance", str(instance_file),
            "--format", "with-availability",
            "--formulation", "full",
            "--variant", "i0-me-se",
            *SOLVE_BASE,
            "--out", str(out),
            "--trace", str(trace),
        ]
    )
    solve_out = capsys.readouterr().out
    assert code in (0, 1)
    assert out.exists()
    lines = trace.read_text().splitlines()
    assert lines[0] == "level,temperature,current_f,best_distance,best_objective"
    assert len(lines) > 1

    vcode = main(
        [
            "validate",
            "--instance", str(instance_file),
            "--solution", str(out),
            "--format", "with-availability",
            "--formulation", "full",
        ]
    )
    validate_out = capsys.readouterr().out
    assert vcode == code  # feasibility agrees end to end

    def grab(text, key):
        for line in text.splitlines():
            if line.startswith(key + " "):
                return line.split()[-1]
        raise KeyError(key)

    assert grab(solve_out, "objective") == grab(validate_out, "objective")
    assert grab(solve_out, "distance") == grab(validate_out, "distance")


def test_solve_preset_resolution(plain_file, capsys):
    code = main(
        [
            "solve",
            "--instance", str(plain_file),
            "--preset", "itc2002",
            "--iterations", "20000",
            "--seed", "1",
        ]
    )
    out = capsys.readouterr().out
    assert code in (0, 1)
    assert "i1-meminus-se" in out  # itc2002 preset variant


def test_solve_rejects_bad_temperature(instance_file):
    code = main(
        [
            "solve",
            "--instance", str(instance_file),
            "--preset", "itc2007",
            "--t0", "0",
        ]
    )
    assert code == 2


def test_solve_requires_parameters(instance_file):
    code = main(
        ["solve", "--instance", str(instance_file), "--format", "with-availability",
         "--formulation", "full"]
    )
    assert code == 2


def test_unknown_flag_exits_2(instance_file):
    with pytest.raises(SystemExit) as exc:
        main(["solve", "--instance", str(instance_file), "--frobnicate"])
    assert exc.value.code == 2


def test_missing_instance_exits_3():
    code = main(
        [
            "solve",
            "--instance", "/nonexistent/foo.tim",
            "--preset", "itc2007",
            "--iterations", "1000",
        ]
    )
    assert code == 3


def test_parse_error_exits_3(tmp_path):
    bad = tmp_path / "bad.tim"
    bad.write_text("1 1 0 0\n-3\n")
    code = main(
        ["solve", "--instance", str(bad), "--preset", "itc2002", "--iterations", "1000"]
    )
    assert code == 3


def test_preprocess_dump(plain_file, capsys):
    code = main(
        [
            "preprocess-dump",
            "--instance", str(plain_file),
            "--format", "plain",
            "--formulation", "original",
        ]
    )
    out = capsys.readouterr().out
    assert code == 0
    assert "room order" in out
    assert "timeslot windows" in out


def test_read_manifest(tmp_path, instance_file, plain_file):
    manifest = tmp_path / "set.txt"
    manifest.write_text(
        "# comment\n"
        f"{instance_file} itc2007\n"
        f"{plain_file} itc2002 original\n"
    )
    entries = read_manifest(manifest)
    assert len(entries) == 2
    assert entries[0].family == "itc2007"
    assert entries[0].formulation is Formulation.FULL
    assert entries[1].formulation is Formulation.ORIGINAL

    manifest.write_text("foo.tim unknown-family\n")
    with pytest.raises(Exception):
        read_manifest(manifest)


def test_bench_manifest_csv_and_aggregates(tmp_path, instance_file, capsys):
    manifest = tmp_path / "set.txt"
    manifest.write_text(f"{instance_file} itc2007\n")
    csv_path = tmp_path / "bench.csv"
    outdir = tmp_path / "solutions"
    code = main(
        [
            "bench",
            "--manifest", str(manifest),
            "--runs", "3",
            "--seed", "10",
            "--iterations", "20000",
            "--csv", str(csv_path),
            "--outdir", str(outdir),
        ]
    )
    assert code == 0
    lines = csv_path.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 4
    seeds = [int(line.split(",")[3]) for line in lines[1:]]
    assert seeds == [10, 11, 12]
    assert len(list(outdir.glob("*.sln"))) == 3

    # aggregate avg equals the mean of the per-run objective column
    objectives = [int(line.split(",")[6]) for line in lines[1:]]
    table = capsys.readouterr().out
    row = [ln for ln in table.splitlines() if ln.startswith("tiny")][0]
    avg = float(row.split()[2])
    assert avg == pytest.approx(sum(objectives) / len(objectives))


def test_bench_reproducible_modulo_wall_time(tmp_path, instance_file):
    manifest = tmp_path / "set.txt"
    manifest.write_text(f"{instance_file} itc2007\n")
    csvs = []
    for name in ("a.csv", "b.csv"):
        path = tmp_path / name
        code = main(
            [
                "bench",
                "--manifest", str(manifest),
                "--runs", "2",
                "--iterations", "20000",
                "--csv", str(path),
            ]
        )
        assert code == 0
        csvs.append(path.read_text())

    def strip_wall(text):
        return [line.rsplit(",", 1)[0] for line in text.splitlines()]

    assert strip_wall(csvs[0]) == strip_wall(csvs[1])


def test_bench_parallel_matches_serial(tmp_path, instance_file):
    manifest = tmp_path / "set.txt"
    manifest.write_text(f"{instance_file} itc2007\n")
    texts = []
    for jobs, name in (("1", "serial.csv"), ("4", "parallel.csv")):
        path = tmp_path / name
        main(
            [
                "bench",
                "--manifest", str(manifest),
                "--runs", "4",
                "--jobs", jobs,
                "--iterations", "20000",
                "--csv", str(path),
            ]
        )
        texts.append([line.rsplit(",", 1)[0] for line in path.read_text().splitlines()])
    assert texts[0] == texts[1]


def test_bench_directory_requires_family(tmp_path, instance_file):
    code = main(["bench", "--dir", str(instance_file.parent), "--csv", str(tmp_path / "x.csv")])
    assert code == 2


def test_bench_skips_unparseable_instances(tmp_path):
    bad = tmp_path / "bad.tim"
    bad.write_text("not numbers\n")
    csv_path = tmp_path / "out.csv"
    code = main(
        [
            "bench",
            "--dir", str(tmp_path),
            "--family", "itc2002",
            "--runs", "1",
            "--iterations", "1000",
            "--csv", str(csv_path),
        ]
    )
    assert code == 0
    lines = csv_path.read_text().splitlines()
    assert len(lines) == 2  # header + error row
    assert ",0,-1,-1,0," in lines[1]


def test_aggregate_includes_infeasible_in_averages():
    from pectt.bench_cli import RunRecord

    records = [
        RunRecord("x", "f", "v", 0, 10, 0, 10, True, 1),
        RunRecord("x", "f", "v", 1, 10, 5, 30, False, 1),
    ]
    rows = aggregate(records)
    assert rows[0].avg_objective == 20.0
    assert rows[0].best_objective == 10
    assert rows[0].pct_feasible == 50.0
    assert rows[0].avg_distance == 2.5


def test_aggregate_no_feasible_runs():
    from pectt.bench_cli import RunRecord

    records = [RunRecord("x", "f", "v", 0, 10, 3, 7, False, 1)]
    rows = aggregate(records)
    assert rows[0].best_objective is None
    assert rows[0].pct_feasible == 0.0
