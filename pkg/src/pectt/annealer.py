"""Simulated annealing driver: geometric cooling under a fixed proposal budget.

The total number of proposals I is shared by every parameter setting: with K
temperature levels from T0 down to T0/rho at cooling rate beta, each level
samples N = I / K neighbours, so run time is a function of I alone.  Three
solver variants differ only in the initial solution builder and whether the
move neighbourhood may unschedule events.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from . import _kernel as _k
from .preprocess import PreprocessedInstance
from .search import (
    SearchState,
    SplitMix,
    init_i0,
    init_i1,
    postprocess_all_rooms,
)

DEFAULT_ITERATIONS = 114_000_000


class SolverVariant(Enum):
    I0_ME_SE = "i0-me-se"
    I0_MEMINUS_SE = "i0-meminus-se"
    I1_MEMINUS_SE = "i1-meminus-se"

    @property
    def me_minus(self) -> bool:
        return self is not SolverVariant.I0_ME_SE

    @property
    def retry_init(self) -> bool:
        return self is SolverVariant.I1_MEMINUS_SE


@dataclass(frozen=True)
class SAParams:
    t0: float
    rho: float
    beta: float = 0.9999
    iterations: int = DEFAULT_ITERATIONS
    sr: float = 0.4
    w: int = 1
    endgame_fraction: float = 0.05
    seed: int = 0
    retry_budget: int = 100
    draw_cap: int = 1000

    def __post_init__(self) -> None:
        if self.t0 <= 0:
            raise ValueError(f"t0 must be positive, got {self.t0}")
        if self.rho <= 1:
            raise ValueError(f"rho must exceed 1, got {self.rho}")
        if not 0 < self.beta < 1:
            raise ValueError(f"beta must lie in (0, 1), got {self.beta}")
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if not 0 <= self.sr <= 1:
            raise ValueError(f"sr must lie in [0, 1], got {self.sr}")
        if self.w < 1:
            raise ValueError("w must be a positive integer")
        if not 0 <= self.endgame_fraction <= 1:
            raise ValueError("endgame_fraction must lie in [0, 1]")

    def with_seed(self, seed: int) -> "SAParams":
        return replace(self, seed=seed)


@dataclass(frozen=True)
class FamilyPreset:
    """Tuned configuration for one public instance family."""

    variant: SolverVariant
    t0: float
    rho: float

    def params(self, **overrides) -> SAParams:
        return SAParams(t0=self.t0, rho=self.rho, **overrides)


PRESETS: dict[str, FamilyPreset] = {
    "itc2007": FamilyPreset(SolverVariant.I0_MEMINUS_SE, 20.41, 33.88),
    "lewis-med": FamilyPreset(SolverVariant.I0_ME_SE, 31.62, 257.63),
    "lewis-big": FamilyPreset(SolverVariant.I0_ME_SE, 36.30, 295.12),
    "itc2002": FamilyPreset(SolverVariant.I1_MEMINUS_SE, 3.89, 31.62),
    "metaheuristics-network": FamilyPreset(SolverVariant.I0_ME_SE, 3.89, 31.62),
}


def temperature_levels(params: SAParams) -> int:
    """Number of cooling steps K from T0 down to T0/rho.

    The defining ratio I / log_beta(rho) is read in magnitude: with beta < 1
    the signed logarithm is negative and meaningless as a count.
    """
    k = math.log(params.rho) / math.log(1.0 / params.beta)
    return max(1, round(k))


def samples_per_level(params: SAParams) -> int:
    """Neighbours sampled per temperature level, preserving the total budget."""
    return max(1, round(params.iterations / temperature_levels(params)))


def accept(delta_f: int, temperature: float, rng: SplitMix) -> bool:
    """Metropolis test: improving or equal moves always pass, worsening moves
    pass with probability exp(-delta_f / temperature)."""
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    if delta_f <= 0:
        return True
    return rng.u01() < math.exp(-delta_f / temperature)


@dataclass
class RunResult:
    best: SearchState
    final: SearchState
    best_assignment: list[tuple[int, int]]
    trace: np.ndarray  # per level: temperature, current F, best dist, best obj
    iterations: int
    stalls: int
    accepted: int

    def best_score(self) -> tuple[int, int]:
        from .evaluation import reported_score

        return reported_score(self.best)


def run(
    pre: PreprocessedInstance,
    variant: SolverVariant,
    params: SAParams,
) -> RunResult:
    """Anneal one seeded trajectory and return the best state seen.

    The incumbent is tracked on undoubled components under a valid-first
    hierarchy (hard conflict/precedence cost, then distance, then objective),
    so the returned timetable is the best valid one encountered whenever any
    valid state was reached.  Identical instance, variant, params and seed
    give identical output, bit for bit.
    """
    inst = pre.instance
    rng = SplitMix(params.seed)
    if inst.num_events == 0:
        empty = SearchState(pre)
        return RunResult(empty, empty.copy(), [], np.zeros((0, 4)), 0, 0, 0)
    if variant.retry_init:
        state = init_i1(pre, rng, params.retry_budget)
    else:
        state = init_i0(pre, rng)
    levels = temperature_levels(params)
    samples = samples_per_level(params)
    total = levels * samples
    endgame_start = math.floor(total * (1.0 - params.endgame_fraction))
    best_slot = np.full(inst.num_events, -1, dtype=np.int64)
    best_room = np.full(inst.num_events, -1, dtype=np.int64)
    best_comps = np.zeros(7, dtype=np.int64)
    trace = np.zeros((levels, 4), dtype=np.float64)
    stats = np.zeros(3, dtype=np.int64)
    _k.sa_run(
        state.ki,
        state.ks,
        rng.state,
        float(params.t0),
        float(params.beta),
        levels,
        samples,
        params.w,
        float(params.sr),
        variant.me_minus,
        endgame_start,
        params.draw_cap,
        best_slot,
        best_room,
        best_comps,
        trace,
        stats,
    )
    best = SearchState(pre)
    for e0 in range(inst.num_events):
        if best_slot[e0] >= 0:
            _k.insert_event(best.ki, best.ks, e0, int(best_slot[e0]), int(best_room[e0]))
    assert (best.ks.comps == best_comps).all(), "best-state reconstruction drift"
    return RunResult(
        best=best,
        final=state,
        best_assignment=postprocess_all_rooms(best),
        trace=trace,
        iterations=int(stats[0]),
        stalls=int(stats[1]),
        accepted=int(stats[2]),
    )
