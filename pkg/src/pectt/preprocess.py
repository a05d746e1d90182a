"""Preprocessing and constraint reformulation.

Five derivation steps run once per instance before any search:

1. auxiliary matrices — event-room compatibility and event-event conflicts;
2. precedence propagation — per-event [min, max] assignable-timeslot windows
   from longest chains in the precedence DAG, availability restricted to them;
3. 1-room events — pairs sharing their unique compatible room become conflicts;
4. all-room events — events compatible with every room never hold a concrete
   room during search (post-processing assigns one);
5. room attractiveness — rooms sorted ascending by how many non-all-room
   events they can host, so scarce rooms are consumed last.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .model import Instance, enrolment_count

log = logging.getLogger(__name__)


@dataclass
class PreprocessedInstance:
    instance: Instance
    theta_r: np.ndarray  # (E, R) bool, event-room compatibility
    theta_e: np.ndarray  # (E, E) bool, symmetric conflicts (students + 1-room)
    slot_window: list[tuple[int, int]]  # 1-based inclusive; lo > hi when empty
    availability: np.ndarray  # (E, T) bool, restricted by the windows
    all_room_events: frozenset[int]
    one_room_events: dict[int, int]
    room_order: list[int]  # ascending attractiveness, ties by room id
    pair_violation_cost: np.ndarray  # (E, E) min of the two enrolment counts
    cyclic_events: frozenset[int] = frozenset()
    _kernel: object = field(default=None, repr=False)

    def compatible_rooms(self, event: int) -> list[int]:
        """Rooms compatible with ``event`` in ascending attractiveness order."""
        row = self.theta_r[event - 1]
        rank = {r: i for i, r in enumerate(self.room_order)}
        return sorted((r for r in self.room_order if row[r - 1]), key=rank.__getitem__)


def build_matrices(inst: Instance) -> tuple[np.ndarray, np.ndarray]:
    """Step 1: compatibility (capacity + features) and student-conflict matrices.

    After this, the search never consults raw feature or capacity data again.
    """
    E, R = inst.num_events, inst.num_rooms
    theta_r = np.zeros((E, R), dtype=bool)
    for e in range(1, E + 1):
        need = inst.event_features[e - 1]
        size = enrolment_count(inst, e)
        for r in range(1, R + 1):
            theta_r[e - 1, r - 1] = (
                inst.room_capacity[r - 1] >= size
                and need <= inst.room_features[r - 1]
            )
    theta_e = np.zeros((E, E), dtype=bool)
    for e1 in range(1, E + 1):
        s1 = inst.enrolment[e1 - 1]
        if not s1:
            continue
        for e2 in range(e1 + 1, E + 1):
            if s1 & inst.enrolment[e2 - 1]:
                theta_e[e1 - 1, e2 - 1] = theta_e[e2 - 1, e1 - 1] = True
    return theta_r, theta_e


def propagate_precedences(inst: Instance) -> tuple[list[tuple[int, int]], np.ndarray, frozenset[int]]:
    """Step 2: [min, max] timeslot windows from longest precedence chains.

    min(e) = 1 + longest chain ending at e, max(e) = T - longest chain starting
    at e (chain length in edges).  Availability outside the window is removed.
    Events on or downstream/upstream of a precedence cycle get an empty window
    (they can only stay unscheduled) and are reported back.
    """
    E, T = inst.num_events, inst.num_timeslots
    succ: list[list[int]] = [[] for _ in range(E + 1)]
    pred: list[list[int]] = [[] for _ in range(E + 1)]
    for a, b in inst.precedences:
        succ[a].append(b)
        pred[b].append(a)

    def longest_in(adj_fwd, adj_bwd):
        # Kahn over adj_fwd; dist[e] = longest chain reaching e along adj_bwd.
        indeg = [len(adj_bwd[e]) for e in range(E + 1)]
        dist = [0] * (E + 1)
        done = [False] * (E + 1)
        queue = [e for e in range(1, E + 1) if indeg[e] == 0]
        while queue:
            e = queue.pop()
            done[e] = True
            for nxt in adj_fwd[e]:
                if dist[e] + 1 > dist[nxt]:
                    dist[nxt] = dist[e] + 1
                indeg[nxt] -= 1
                if indeg[nxt] == 0:
                    queue.append(nxt)
        stuck = {e for e in range(1, E + 1) if not done[e]}
        return dist, stuck

    chain_in, stuck_fwd = longest_in(succ, pred)
    chain_out, stuck_bwd = longest_in(pred, succ)
    cyclic = frozenset(stuck_fwd | stuck_bwd)
    if cyclic:
        log.warning(
            "precedence cycle: events %s have no admissible timeslot",
            sorted(cyclic),
        )
    windows: list[tuple[int, int]] = []
    restricted = np.array(inst.availability, dtype=bool)
    for e in range(1, E + 1):
        if e in cyclic:
            lo, hi = T + 1, 0
        else:
            lo, hi = 1 + chain_in[e], T - chain_out[e]
        windows.append((lo, hi))
        for t in range(1, T + 1):
            if t < lo or t > hi:
                restricted[e - 1, t - 1] = False
    return windows, restricted, cyclic


def identify_one_room_events(
    theta_r: np.ndarray, theta_e: np.ndarray
) -> tuple[np.ndarray, dict[int, int]]:
    """Step 3: events with a unique compatible room; sharing it is a conflict.

    Events compatible with every room are skipped (with R = 1 the all-room
    classification wins).  Returns the strengthened conflict matrix and the
    event -> room map.
    """
    E, R = theta_r.shape
    theta_e = np.array(theta_e, dtype=bool)
    one_room: dict[int, int] = {}
    for e in range(1, E + 1):
        row = theta_r[e - 1]
        if row.sum() == 1 and R > 1:
            one_room[e] = int(np.flatnonzero(row)[0]) + 1
    by_room: dict[int, list[int]] = {}
    for e, r in one_room.items():
        by_room.setdefault(r, []).append(e)
    for events in by_room.values():
        for i, e1 in enumerate(events):
            for e2 in events[i + 1 :]:
                theta_e[e1 - 1, e2 - 1] = theta_e[e2 - 1, e1 - 1] = True
    return theta_e, one_room


def identify_all_room_events(theta_r: np.ndarray) -> frozenset[int]:
    """Step 4: events compatible with every room."""
    E, R = theta_r.shape
    if R == 0:
        return frozenset()
    return frozenset(int(e) + 1 for e in np.flatnonzero(theta_r.all(axis=1)))


def rank_rooms(theta_r: np.ndarray, all_room_events: frozenset[int]) -> list[int]:
    """Step 5: rooms ascending by compatible non-all-room event count.

    Ties break on ascending room id so the ordering (and with it every run)
    is deterministic.
    """
    E, R = theta_r.shape
    counted = [e for e in range(1, E + 1) if e not in all_room_events]
    attractiveness = [
        sum(1 for e in counted if theta_r[e - 1, r - 1]) for r in range(1, R + 1)
    ]
    return sorted(range(1, R + 1), key=lambda r: (attractiveness[r - 1], r))


def preprocess(inst: Instance) -> PreprocessedInstance:
    """Run all five steps and assemble the derived structures."""
    theta_r, theta_e = build_matrices(inst)
    windows, restricted, cyclic = propagate_precedences(inst)
    theta_e, one_room = identify_one_room_events(theta_r, theta_e)
    all_room = identify_all_room_events(theta_r)
    order = rank_rooms(theta_r, all_room)
    sizes = np.array(
        [enrolment_count(inst, e) for e in range(1, inst.num_events + 1)],
        dtype=np.int64,
    )
    pair_cost = np.minimum.outer(sizes, sizes)
    return PreprocessedInstance(
        instance=inst,
        theta_r=theta_r,
        theta_e=theta_e,
        slot_window=windows,
        availability=restricted,
        all_room_events=all_room,
        one_room_events=one_room,
        room_order=order,
        pair_violation_cost=pair_cost,
        cyclic_events=cyclic,
    )
