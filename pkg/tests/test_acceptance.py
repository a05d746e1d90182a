"""Acceptance suite: one test per exit criterion, exact tolerances pinned.

Criteria 5-7 replay published benchmark results at desk scale and need the
public instance files; point PECTT_DATA_DIR at a directory containing
``itc2007/comp-*.tim`` and ``lewis/*small*.tim`` to enable them (they skip
with instructions otherwise).  Criterion 6 is the long full-budget check and
is additionally gated behind ``-m slow``.
"""

import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from pectt import (
    PRESETS,
    EvalPhase,
    Formulation,
    Instance,
    SAParams,
    SolverVariant,
    preprocess,
    run,
    samples_per_level,
    temperature_levels,
    validate,
    write_instance,
)
from pectt.evaluation import delta_cost, full_breakdown, hard_costs
from pectt.preprocess import propagate_precedences
from pectt.search import (
    SearchStall,
    SearchState,
    SplitMix,
    apply_move,
    init_i0,
    postprocess_all_rooms,
    random_move,
)

from helpers import enumerate_best_score, random_instance

DATA_DIR = Path(os.environ.get("PECTT_DATA_DIR", Path(__file__).resolve().parent.parent / "data"))

MOVES_PER_INSTANCE = 10_000
TRAJECTORY_INSTANCES = 20


def _passed(criterion, detail):
    print(f"ACCEPTANCE criterion {criterion}: PASS - {detail}")


def _light_audit(state):
    # search-space invariants only: compatibility, availability, occupancy
    inst = state.instance
    ki, ks = state.ki, state.ks
    R = inst.num_rooms
    slot_occ = [0] * inst.num_timeslots
    seen_rooms = set()
    for e0 in range(inst.num_events):
        t0 = int(ks.ev_slot[e0])
        r0 = int(ks.ev_room[e0])
        if t0 < 0:
            assert r0 < 0
            continue
        assert ki.avail[e0, t0], "availability violated"
        slot_occ[t0] += 1
        if ki.is_all_room[e0]:
            assert r0 < 0, "all-room event holds a concrete room"
        else:
            assert r0 >= 0 and state.pre.theta_r[e0, r0], "compatibility violated"
            assert (t0, r0) not in seen_rooms, "occupancy violated"
            seen_rooms.add((t0, r0))
    for t0, n in enumerate(slot_occ):
        assert n == int(ks.slot_occ[t0]) <= R, "slot occupancy drift"


@pytest.fixture(scope="module")
def trajectory_results():
    """Shared move-by-move checks behind criteria 1 and 2."""
    rng = np.random.default_rng(20250810)
    checked_moves = 0
    instances = 0
    while instances < TRAJECTORY_INSTANCES:
        formulation = [Formulation.FULL, Formulation.ORIGINAL, Formulation.HARD_ONLY][
            instances % 3
        ]
        inst = random_instance(
            rng,
            max_events=12,
            max_rooms=3,
            num_timeslots=15,
            num_days=3,
            max_students=20,
            formulation=formulation,
        )
        if inst.num_events < 2:
            continue
        instances += 1
        pre = preprocess(inst)
        srng = SplitMix(instances)
        state = init_i0(pre, srng)
        moves = 0
        while moves < MOVES_PER_INSTANCE:
            try:
                move = random_move(state, srng, sr=0.4)
            except SearchStall:
                break
            phase = EvalPhase.ENDGAME if moves % 3 == 2 else EvalPhase.NORMAL
            w = 3 if moves % 7 == 0 else 1
            before = full_breakdown(state)
            predicted = delta_cost(state, move, phase=phase, w=w)
            incurred = apply_move(state, move, w=w, endgame=phase is EvalPhase.ENDGAME)
            after = full_breakdown(state)
            # criterion 1: exact incremental deltas and running costs
            assert predicted == incurred == after.scalar_f(w, phase) - before.scalar_f(w, phase)
            assert state.breakdown() == after
            # criterion 2: invariants and room post-processing after every move
            _light_audit(state)
            completed = postprocess_all_rooms(state)
            report = validate(inst, completed)
            assert report.counts["H2"] == 0
            assert report.counts["H3"] == 0
            assert report.counts["H4"] == 0
            assert report.distance_to_feasibility == after.distance_to_feasibility
            assert report.totals["H1"] == after.hard_conflicts
            assert report.totals["H5"] == after.hard_precedences
            assert report.soft_late == after.soft_late
            assert report.soft_consecutive == after.soft_consecutive
            assert report.soft_isolated == after.soft_isolated
            moves += 1
        assert moves >= MOVES_PER_INSTANCE, "trajectory stalled too early"
        checked_moves += moves
    return {"instances": instances, "moves": checked_moves}


def test_criterion_1_oracle_equivalence(trajectory_results):
    assert trajectory_results["instances"] >= 20
    assert trajectory_results["moves"] >= 20 * MOVES_PER_INSTANCE
    _passed(
        1,
        f"{trajectory_results['moves']} moves across "
        f"{trajectory_results['instances']} instances: delta == full recompute, "
        "running breakdown == validator, exact",
    )


def test_criterion_2_search_space_invariants(trajectory_results):
    # the per-move audits and H2/H3 checks ran inside the shared trajectories
    assert trajectory_results["moves"] >= 20 * MOVES_PER_INSTANCE
    _passed(
        2,
        "compatibility/availability/occupancy audits and room post-processing "
        f"held after all {trajectory_results['moves']} applied moves",
    )


def test_criterion_3_worked_examples():
    # consecutive-events example: 3 students x 4 consecutive events cost 6
    inst = Instance(
        num_events=4, num_rooms=4, num_students=3, num_features=0,
        num_timeslots=45, num_days=5, room_capacity=[3] * 4,
        enrolment=[frozenset({1, 2, 3})] * 4,
        room_features=[frozenset()] * 4, event_features=[frozenset()] * 4,
        availability=np.ones((4, 45), bool), precedences=frozenset(),
    )
    state = SearchState.from_assignment(
        preprocess(inst), [(1, 0), (2, 0), (3, 0), (4, 0)]
    )
    assert full_breakdown(state).soft_consecutive == 6

    # precedence propagation on a single pair with T = 45
    pair = Instance(
        num_events=2, num_rooms=1, num_students=2, num_features=0,
        num_timeslots=45, num_days=5, room_capacity=[2],
        enrolment=[frozenset({1}), frozenset({2})],
        room_features=[frozenset()], event_features=[frozenset()] * 2,
        availability=np.ones((2, 45), bool),
        precedences=frozenset({(1, 2)}),
    )
    windows, _, _ = propagate_precedences(pair)
    assert windows == [(1, 44), (2, 45)]

    # min-students conflict pricing and endgame doubling on a 2-event clash
    clash = Instance(
        num_events=2, num_rooms=2, num_students=8, num_features=0,
        num_timeslots=45, num_days=5, room_capacity=[8, 8],
        enrolment=[frozenset({1, 2, 3, 4, 5}), frozenset({1, 6, 7})],
        room_features=[frozenset()] * 2, event_features=[frozenset()] * 2,
        availability=np.ones((2, 45), bool), precedences=frozenset(),
    )
    cstate = SearchState.from_assignment(preprocess(clash), [(1, 0), (1, 0)])
    assert hard_costs(cstate, EvalPhase.NORMAL) == (0, 3, 0)
    assert hard_costs(cstate, EvalPhase.ENDGAME) == (0, 6, 0)

    prec = Instance(
        num_events=2, num_rooms=2, num_students=8, num_features=0,
        num_timeslots=45, num_days=5, room_capacity=[8, 8],
        enrolment=[frozenset({1, 2, 3, 4, 5}), frozenset({1, 6, 7})],
        room_features=[frozenset()] * 2, event_features=[frozenset()] * 2,
        availability=np.ones((2, 45), bool), precedences=frozenset({(1, 2)}),
    )
    pstate = SearchState.from_assignment(preprocess(prec), [(7, 0), (2, 0)])
    assert hard_costs(pstate, EvalPhase.NORMAL) == (0, 0, 3)
    assert hard_costs(pstate, EvalPhase.ENDGAME) == (0, 0, 6)
    _passed(3, "S2 worked example = 6, windows [1,44]/[2,45], min-students pricing doubles in endgame")


def _tiny_instances():
    # one constructed forced-unscheduling case plus seeded random tinies
    forced = Instance(
        num_events=2, num_rooms=1, num_students=5, num_features=0,
        num_timeslots=4, num_days=1, room_capacity=[5],
        enrolment=[frozenset({1, 2, 3}), frozenset({3, 4, 5})],
        room_features=[frozenset()], event_features=[frozenset()] * 2,
        availability=np.array([[True, False, False, False]] * 2),
        precedences=frozenset(),
    )
    out = [forced]
    rng = np.random.default_rng(424242)
    while len(out) < 5:
        inst = random_instance(
            rng,
            max_events=4,
            max_rooms=2,
            num_timeslots=6,
            num_days=2,
            max_students=8,
            formulation=Formulation.FULL,
            avail_density=0.8,
            prec_pairs=1,
        )
        if inst.num_events < 3:
            continue
        out.append(inst)
    return out


def test_criterion_4_exhaustive_tiny_optimality():
    results = []
    for idx, inst in enumerate(_tiny_instances()):
        optimum = enumerate_best_score(inst)
        pre = preprocess(inst)
        hits = 0
        for seed in range(5):
            params = SAParams(t0=5.0, rho=50.0, iterations=1_000_000, seed=seed)
            result = run(pre, SolverVariant.I0_ME_SE, params)
            achieved = result.best_score()
            report = validate(inst, result.best_assignment)
            assert report.valid
            assert report.score() == achieved
            if achieved == optimum:
                hits += 1
            else:
                assert achieved >= optimum  # never better than exhaustive truth
        results.append((idx, optimum, hits))
        assert hits >= 4, f"instance {idx}: optimum {optimum} reached in {hits}/5 seeds"
    _passed(4, f"enumerated optima reached: {[(f'#{i}', o, f'{h}/5') for i, o, h in results]}")


def _find_instance(subdir, patterns):
    for pattern in patterns:
        hits = sorted(DATA_DIR.glob(f"{subdir}/{pattern}"))
        if hits:
            return hits[0]
    return None


def _itc2007_instance(number):
    return _find_instance(
        "itc2007",
        [f"comp-{number}.tim", f"comp{number:02d}.tim", f"comp_{number}.tim", f"{number}.tim"],
    )


def test_criterion_5_itc2007_desk_scale_feasibility():
    paths = {i: _itc2007_instance(i) for i in (5, 6, 7, 8)}
    if not all(paths.values()):
        pytest.skip(
            f"ITC 2007 instances 5-8 not found under {DATA_DIR}/itc2007; "
            "set PECTT_DATA_DIR to a directory holding comp-5.tim .. comp-8.tim"
        )
    from pectt.instance_io import InstanceFormat, load_instance

    preset = PRESETS["itc2007"]
    objectives = {}
    for number, path in paths.items():
        inst = load_instance(path, InstanceFormat.WITH_AVAILABILITY, Formulation.FULL)
        pre = preprocess(inst)
        feasible = 0
        objs = []
        for seed in range(10):
            params = preset.params(iterations=10_000_000, seed=seed)
            result = run(pre, preset.variant, params)
            report = validate(inst, result.best_assignment)
            if report.feasible:
                feasible += 1
            objs.append(report.objective)
        objectives[number] = (feasible, objs)
        assert feasible >= 8, f"instance {number}: only {feasible}/10 feasible runs"
    _passed(5, f"feasible runs and objectives (informational): {objectives}")


@pytest.mark.slow
def test_criterion_6_itc2007_full_budget_spot_check():
    path = _itc2007_instance(8)
    if path is None:
        pytest.skip(
            f"ITC 2007 instance 8 not found under {DATA_DIR}/itc2007; "
            "set PECTT_DATA_DIR to enable the full-budget spot check"
        )
    from pectt.instance_io import InstanceFormat, load_instance

    preset = PRESETS["itc2007"]
    inst = load_instance(path, InstanceFormat.WITH_AVAILABILITY, Formulation.FULL)
    pre = preprocess(inst)
    best = None
    feasible = 0
    for seed in range(10):
        params = preset.params(seed=seed)  # full 1.14e8 budget
        result = run(pre, preset.variant, params)
        report = validate(inst, result.best_assignment)
        if report.feasible:
            feasible += 1
            best = report.objective if best is None else min(best, report.objective)
    assert feasible == 10
    assert best is not None and best <= 5
    _passed(6, f"10/10 feasible at full budget, best objective {best}")


def test_criterion_7_lewis_small_instances():
    files = sorted(DATA_DIR.glob("lewis/*small*.tim")) or sorted(
        DATA_DIR.glob("lewis/small*/*.tim")
    )
    if len(files) < 20:
        pytest.skip(
            f"Lewis & Paechter small instances not found under {DATA_DIR}/lewis; "
            "set PECTT_DATA_DIR to a directory holding the 20 small .tim files"
        )
    from pectt.instance_io import InstanceFormat, load_instance

    # the tuned table has no small row; the medium settings govern that family
    preset = PRESETS["lewis-med"]
    for path in files[:20]:
        inst = load_instance(path, InstanceFormat.PLAIN, Formulation.HARD_ONLY)
        pre = preprocess(inst)
        for seed in range(5):
            params = preset.params(iterations=10_000_000, seed=seed)
            result = run(pre, preset.variant, params)
            report = validate(inst, result.best_assignment)
            assert report.unscheduled_count == 0, (
                f"{path.name} seed {seed}: {report.unscheduled_count} events unscheduled"
            )
    _passed(7, "all 20 small instances fully scheduled in 5/5 runs each")


def test_criterion_8_iteration_budget_invariance():
    rng = np.random.default_rng(88)
    tested = []
    for _ in range(10):
        t0 = float(rng.uniform(1, 100))
        rho = float(rng.uniform(10, 1000))
        params = SAParams(t0=t0, rho=rho, beta=0.9999, iterations=114_000_000)
        k = temperature_levels(params)
        n = samples_per_level(params)
        assert abs(k * n - params.iterations) <= k
        tested.append((round(t0, 2), round(rho, 2), k, n))
    _passed(8, f"|K*N - I| <= K for all 10 sampled (T0, rho) pairs: {tested[:3]}...")


def test_criterion_9_cross_process_determinism(tmp_path):
    rng = np.random.default_rng(909)
    inst = random_instance(
        rng, max_events=10, max_rooms=2, num_timeslots=45, num_days=5,
        formulation=Formulation.FULL,
    )
    ipath = tmp_path / "det.tim"
    ipath.write_text(write_instance(inst))

    def solve(tag):
        out = tmp_path / f"{tag}.sln"
        trace = tmp_path / f"{tag}-trace.csv"
        proc = subprocess.run(
            [
                sys.executable, "-m", "pectt.bench_cli", "solve",
                "--instance", str(ipath),
                "--format", "with-availability",
                "--formulation", "full",
                "--variant", "i0-meminus-se",
                "--t0", "8", "--rho", "40",
                "--iterations", "50000", "--seed", "42",
                "--out", str(out), "--trace", str(trace),
            ],
            capture_output=True,
            text=True,
        )
        assert proc.returncode in (0, 1), proc.stderr
        return out.read_bytes(), trace.read_bytes()

    sol_a, trace_a = solve("a")
    sol_b, trace_b = solve("b")
    assert sol_a == sol_b
    assert trace_a == trace_b

    def bench(tag):
        manifest = tmp_path / f"{tag}.manifest"
        manifest.write_text(f"{ipath} itc2007\n")
        csv = tmp_path / f"{tag}.csv"
        proc = subprocess.run(
            [
                sys.executable, "-m", "pectt.bench_cli", "bench",
                "--manifest", str(manifest),
                "--runs", "2", "--iterations", "30000",
                "--csv", str(csv),
            ],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        return [line.rsplit(",", 1)[0] for line in csv.read_text().splitlines()]

    assert bench("x") == bench("y")
    _passed(9, "two processes produced byte-identical solutions, traces and CSV rows")
