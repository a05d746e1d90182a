"""Search state, composite move/swap neighbourhood and initial solutions.

The search space never violates room compatibility, availability or
occupancy: every scheduled event sits in an available timeslot of its
precedence window, non-all-room events hold a compatible room that nobody
else holds in that timeslot, and no timeslot carries more events than there
are rooms.  Conflicts, precedences and unscheduled events remain free to be
violated; they live in the cost function.

All-room events keep the dummy room while scheduled; ``postprocess_all_rooms``
turns a state into a completed timetable by handing them concrete rooms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar

import numpy as np

from . import _kernel as _k
from .model import DUMMY_ROOM, DUMMY_TIMESLOT, Instance
from .preprocess import PreprocessedInstance


class SearchStall(RuntimeError):
    """No admissible move found within the draw cap."""


class SplitMix:
    """Splitmix64 stream.  Replication ``i`` of a seeded experiment uses
    ``seed + i``; streams with different seeds are independent for our use."""

    def __init__(self, seed: int):
        self.state = np.array([seed & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)

    def u01(self) -> float:
        return float(_k.rng_u01(self.state))

    def below(self, n: int) -> int:
        return int(_k.rng_below(self.state, n))


@dataclass(frozen=True)
class MoveEvent:
    """Reschedule one event to ``timeslot`` (DUMMY_TIMESLOT unschedules it).

    ``room`` is the admissibility-resolved room, DUMMY_ROOM for all-room
    events and for unscheduling.
    """

    event: int
    timeslot: int
    room: int
    kind: ClassVar[str] = "me"


@dataclass(frozen=True)
class SwapEvents:
    """Exchange the timeslots of two events, rooms re-resolved on both sides."""

    event1: int
    event2: int
    room1: int
    room2: int
    kind: ClassVar[str] = "se"


Move = MoveEvent | SwapEvents


def _pack(pre: PreprocessedInstance) -> _k.KInst:
    """Pack preprocessing products into the kernel's array form (cached)."""
    if pre._kernel is not None:
        return pre._kernel
    inst = pre.instance
    E, R, T = inst.num_events, inst.num_rooms, inst.num_timeslots
    sizes = np.array([len(inst.enrolment[e]) for e in range(E)], dtype=np.int64)

    def csr(lists):
        indptr = np.zeros(E + 1, dtype=np.int64)
        for e in range(E):
            indptr[e + 1] = indptr[e] + len(lists[e])
        ids = np.zeros(indptr[-1], dtype=np.int64)
        for e in range(E):
            ids[indptr[e] : indptr[e + 1]] = lists[e]
        return indptr, ids

    stu = [sorted(s - 1 for s in inst.enrolment[e]) for e in range(E)]
    conf = [sorted(int(x) for x in np.flatnonzero(pre.theta_e[e])) for e in range(E)]
    succ: list[list[int]] = [[] for _ in range(E)]
    pred: list[list[int]] = [[] for _ in range(E)]
    for a, b in sorted(inst.precedences):
        succ[a - 1].append(b - 1)
        pred[b - 1].append(a - 1)
    avail = np.ascontiguousarray(pre.availability, dtype=bool)
    avail_lists = [sorted(int(t) for t in np.flatnonzero(avail[e])) for e in range(E)]
    rank = {r: i for i, r in enumerate(pre.room_order)}
    rooms = []
    for e in range(E):
        if e + 1 in pre.all_room_events:
            rooms.append([])
        else:
            compat = [r - 1 for r in pre.room_order if pre.theta_r[e, r - 1]]
            rooms.append(sorted(compat, key=lambda r0: rank[r0 + 1]))
    is_all_room = np.zeros(E, dtype=bool)
    for e in pre.all_room_events:
        is_all_room[e - 1] = True
    stu_indptr, stu_ids = csr(stu)
    conf_indptr, conf_ids = csr(conf)
    succ_indptr, succ_ids = csr(succ)
    pred_indptr, pred_ids = csr(pred)
    avail_indptr, avail_slots = csr(avail_lists)
    room_indptr, room_ids = csr(rooms)
    ki = _k.KInst(
        num_events=E,
        num_rooms=R,
        num_slots=T,
        slots_per_day=inst.slots_per_day,
        soft_on=inst.formulation.has_soft_costs,
        sizes=sizes,
        stu_indptr=stu_indptr,
        stu_ids=stu_ids,
        conf_indptr=conf_indptr,
        conf_ids=conf_ids,
        succ_indptr=succ_indptr,
        succ_ids=succ_ids,
        pred_indptr=pred_indptr,
        pred_ids=pred_ids,
        avail=avail,
        avail_indptr=avail_indptr,
        avail_slots=avail_slots,
        room_indptr=room_indptr,
        room_ids=room_ids,
        is_all_room=is_all_room,
    )
    pre._kernel = ki
    return ki


class SearchState:
    """Mutable assignment plus the incremental bookkeeping the kernel updates.

    Single-owner: one annealing run (or one test trajectory) per state.
    Independent states over a shared PreprocessedInstance are safe in parallel.
    """

    def __init__(self, pre: PreprocessedInstance):
        self.pre = pre
        self.ki = _pack(pre)
        inst = pre.instance
        E, R, T = inst.num_events, inst.num_rooms, inst.num_timeslots
        S, D = inst.num_students, inst.num_days
        self.ks = _k.KState(
            ev_slot=np.full(E, -1, dtype=np.int64),
            ev_room=np.full(E, -1, dtype=np.int64),
            room_occ=np.full((T, R), -1, dtype=np.int64),
            slot_occ=np.zeros(T, dtype=np.int64),
            att=np.zeros((S, T), dtype=np.int16),
            events_day=np.zeros((S, D), dtype=np.int16),
            comps=np.zeros(7, dtype=np.int64),
        )
        self.ks.comps[_k.DIST] = int(self.ki.sizes.sum())

    @property
    def instance(self) -> Instance:
        return self.pre.instance

    def slot_of(self, event: int) -> int:
        return int(self.ks.ev_slot[event - 1]) + 1

    def room_of(self, event: int) -> int:
        return int(self.ks.ev_room[event - 1]) + 1

    def assignment(self) -> list[tuple[int, int]]:
        """Per-event 1-based (timeslot, room), dummy pair for unscheduled."""
        return [
            (int(t) + 1, int(r) + 1)
            for t, r in zip(self.ks.ev_slot, self.ks.ev_room)
        ]

    def unscheduled_count(self) -> int:
        return int((self.ks.ev_slot < 0).sum())

    def components(self) -> tuple[int, int, int, int, int, int]:
        """(distance, conflicts, precedences, s1, s2, s3), undoubled."""
        return tuple(int(c) for c in self.ks.comps[:6])

    def violation_count(self) -> int:
        """Violated conflict/precedence pairs among scheduled events."""
        return int(self.ks.comps[6])

    def breakdown(self):
        from .evaluation import CostBreakdown

        d, c, p, s1, s2, s3 = self.components()
        return CostBreakdown(d, c, p, s1, s2, s3)

    def scalar(self, w: int = 1, endgame: bool = False) -> int:
        return int(_k.scalar_from(self.ks.comps, w, 2 if endgame else 1))

    def copy(self) -> "SearchState":
        dup = SearchState.__new__(SearchState)
        dup.pre = self.pre
        dup.ki = self.ki
        dup.ks = _k.KState(*(np.array(a) for a in self.ks))
        return dup

    @classmethod
    def from_assignment(
        cls, pre: PreprocessedInstance, pairs: list[tuple[int, int]]
    ) -> "SearchState":
        """Rebuild a state from 1-based pairs (e.g. a parsed solution file).

        All-room events are moved back onto the dummy room.  Raises
        ValueError when the pairs violate the search-space invariants.
        """
        state = cls(pre)
        ki = state.ki
        inst = pre.instance
        if len(pairs) != inst.num_events:
            raise ValueError(f"expected {inst.num_events} pairs, got {len(pairs)}")
        for e, (t, r) in enumerate(pairs, start=1):
            if t == DUMMY_TIMESLOT:
                continue
            t0 = t - 1
            if not ki.avail[e - 1, t0]:
                raise ValueError(f"event {e} placed at unavailable timeslot {t}")
            if state.ks.slot_occ[t0] >= inst.num_rooms:
                raise ValueError(f"timeslot {t} holds more events than rooms")
            if ki.is_all_room[e - 1]:
                r0 = -1
            else:
                if r == DUMMY_ROOM:
                    raise ValueError(f"event {e} scheduled without a room")
                r0 = r - 1
                if not pre.theta_r[e - 1, r0]:
                    raise ValueError(f"event {e} incompatible with room {r}")
                if state.ks.room_occ[t0, r0] >= 0:
                    raise ValueError(f"room {r} at timeslot {t} is taken twice")
            _k.insert_event(ki, state.ks, e - 1, t0, r0)
        return state

    def audit(self) -> None:
        """Rebuild every incremental structure from the assignment and compare.

        Raises AssertionError on the first divergence; used by tests and the
        property checks, never on the hot path.
        """
        inst = self.instance
        ki, ks = self.ki, self.ks
        E, R, T = inst.num_events, inst.num_rooms, inst.num_timeslots
        slot_occ = np.zeros(T, dtype=np.int64)
        room_occ = np.full((T, R), -1, dtype=np.int64)
        att = np.zeros_like(ks.att)
        events_day = np.zeros_like(ks.events_day)
        spd = inst.slots_per_day
        for e0 in range(E):
            t0 = int(ks.ev_slot[e0])
            r0 = int(ks.ev_room[e0])
            if t0 < 0:
                assert r0 < 0, f"event {e0 + 1} has a room but no timeslot"
                continue
            assert ki.avail[e0, t0], f"event {e0 + 1} at unavailable slot {t0 + 1}"
            if ki.is_all_room[e0]:
                assert r0 < 0, f"all-room event {e0 + 1} holds a concrete room"
            else:
                assert r0 >= 0, f"event {e0 + 1} scheduled without a room"
                assert self.pre.theta_r[e0, r0], (
                    f"event {e0 + 1} in incompatible room {r0 + 1}"
                )
                assert room_occ[t0, r0] < 0, f"room clash at ({t0 + 1}, {r0 + 1})"
                room_occ[t0, r0] = e0
            slot_occ[t0] += 1
            if inst.formulation.has_soft_costs:
                for s in inst.enrolment[e0]:
                    att[s - 1, t0] += 1
                    events_day[s - 1, t0 // spd] += 1
        assert (slot_occ <= R).all(), "timeslot occupancy exceeds room count"
        assert (slot_occ == ks.slot_occ).all(), "slot occupancy drift"
        assert (room_occ == ks.room_occ).all(), "room occupancy drift"
        assert (att == ks.att).all(), "attendance drift"
        assert (events_day == ks.events_day).all(), "per-day event count drift"
        from .evaluation import full_breakdown

        fresh = full_breakdown(self)
        assert self.breakdown() == fresh, (
            f"running costs {self.components()} != recomputed {fresh}"
        )
        pairs = 0
        slots = {e0: int(t0) for e0, t0 in enumerate(ks.ev_slot) if t0 >= 0}
        for e0, t0 in slots.items():
            for e2 in slots:
                if e2 > e0 and slots[e2] == t0 and self.pre.theta_e[e0, e2]:
                    pairs += 1
        for a, b in inst.precedences:
            if a - 1 in slots and b - 1 in slots and slots[a - 1] >= slots[b - 1]:
                pairs += 1
        assert pairs == self.violation_count(), "violated-pair count drift"


def _greedy_fill(state: SearchState, rng: SplitMix, retry_budget: int) -> None:
    # events in id order; each draws uniformly among available, non-full slots
    ki, ks = state.ki, state.ks
    R = ki.num_rooms
    for e0 in range(ki.num_events):
        lo, hi = int(ki.avail_indptr[e0]), int(ki.avail_indptr[e0 + 1])
        eligible = [int(ki.avail_slots[k]) for k in range(lo, hi) if ks.slot_occ[ki.avail_slots[k]] < R]
        if not eligible:
            continue
        for _ in range(1 + retry_budget):
            t0 = eligible[rng.below(len(eligible))]
            if ki.is_all_room[e0]:
                _k.insert_event(ki, ks, e0, t0, -1)
                break
            r0 = int(_k.find_room(ki, ks, e0, t0, -1, -1))
            if r0 >= 0:
                _k.insert_event(ki, ks, e0, t0, r0)
                break


def init_i0(pre: PreprocessedInstance, rng: SplitMix) -> SearchState:
    """Greedy start: one random eligible timeslot per event, rooms scanned in
    ascending attractiveness; events that find no free room stay unscheduled."""
    state = SearchState(pre)
    _greedy_fill(state, rng, retry_budget=0)
    return state


def init_i1(pre: PreprocessedInstance, rng: SplitMix, retry_budget: int = 100) -> SearchState:
    """Like the greedy start but redraws the timeslot up to ``retry_budget``
    times when no room is free, leaving as few events unscheduled as it can."""
    state = SearchState(pre)
    _greedy_fill(state, rng, retry_budget=retry_budget)
    return state


def admissible_me(
    state: SearchState, event: int, timeslot: int, me_minus: bool = False
) -> MoveEvent | None:
    """Resolve a MoveEvent, or None when inadmissible.

    Admissible when the target differs from the current slot, is available
    (inside the precedence window), leaves slot occupancy within the room
    count, and a compatible room is free; under the restricted neighbourhood
    the dummy timeslot is never admissible.
    """
    t0 = timeslot - 1 if timeslot != DUMMY_TIMESLOT else -1
    room = int(_k.admissible_me(state.ki, state.ks, event - 1, t0, me_minus))
    if room == -2:
        return None
    return MoveEvent(event, timeslot, room + 1)


def admissible_se(state: SearchState, event1: int, event2: int) -> SwapEvents | None:
    """Resolve a SwapEvents, or None when inadmissible.

    The slots must differ and each must be available for the incoming event
    (the dummy slot is available to everyone); each side's room is re-resolved
    with the partner's vacated room counting as free.
    """
    if event1 == event2:
        return None
    ok, r1, r2 = _k.admissible_se(state.ki, state.ks, event1 - 1, event2 - 1)
    if not ok:
        return None
    return SwapEvents(event1, event2, int(r1) + 1, int(r2) + 1)


def _check_fresh(state: SearchState, move: Move) -> None:
    # moves resolve rooms against a concrete state; re-resolve and compare
    if move.kind == "me":
        fresh = admissible_me(state, move.event, move.timeslot, me_minus=False)
    else:
        fresh = admissible_se(state, move.event1, move.event2)
    if fresh != move:
        raise ValueError(f"stale or inadmissible move {move}")


def apply_move(
    state: SearchState, move: Move, w: int = 1, endgame: bool = False
) -> int:
    """Apply ``move`` in place and return the cost change actually incurred
    (conflict/precedence deltas doubled during the endgame)."""
    _check_fresh(state, move)
    mult = 2 if endgame else 1
    ki, ks = state.ki, state.ks
    before = _k.scalar_from(ks.comps, w, mult)
    if move.kind == "me":
        t0 = move.timeslot - 1 if move.timeslot != DUMMY_TIMESLOT else -1
        _k.apply_me(ki, ks, move.event - 1, t0, move.room - 1)
    else:
        _k.apply_se(
            ki, ks, move.event1 - 1, move.event2 - 1, move.room1 - 1, move.room2 - 1
        )
    return int(_k.scalar_from(ks.comps, w, mult) - before)


def random_move(
    state: SearchState,
    rng: SplitMix,
    sr: float = 0.4,
    me_minus: bool = False,
    draw_cap: int = 1000,
    stats: dict | None = None,
) -> Move:
    """Draw one admissible move: SwapEvents with probability ``sr``, MoveEvent
    otherwise, redrawing on inadmissibility up to ``draw_cap`` times.

    Mirrors the annealing loop's draw logic draw for draw.  ``stats`` (when
    given) counts attempted draws per kind, pre-admissibility.
    """
    ki, ks = state.ki, state.ks
    E = ki.num_events
    if E == 0:
        raise SearchStall("no events to move")
    for _ in range(draw_cap):
        if _k.rng_u01(rng.state) < sr and E >= 2:
            if stats is not None:
                stats["se"] = stats.get("se", 0) + 1
            e1 = _k.rng_below(rng.state, E)
            o = _k.rng_below(rng.state, E - 1)
            e2 = o + 1 if o >= e1 else o
            ok, r1, r2 = _k.admissible_se(ki, ks, e1, e2)
            if ok:
                return SwapEvents(e1 + 1, e2 + 1, int(r1) + 1, int(r2) + 1)
        else:
            if stats is not None:
                stats["me"] = stats.get("me", 0) + 1
            e = _k.rng_below(rng.state, E)
            lo = int(ki.avail_indptr[e])
            na = int(ki.avail_indptr[e + 1]) - lo
            hi = na if me_minus else na + 1
            if hi <= 0:
                continue
            idx = _k.rng_below(rng.state, hi)
            t0 = int(ki.avail_slots[lo + idx]) if idx < na else -1
            room = int(_k.admissible_me(ki, ks, e, t0, me_minus))
            if room != -2:
                return MoveEvent(e + 1, t0 + 1, room + 1)
    raise SearchStall(f"no admissible move in {draw_cap} draws")


def postprocess_all_rooms(state: SearchState) -> list[tuple[int, int]]:
    """Complete the timetable: give every scheduled all-room event a distinct
    free room in its timeslot (ascending ids on both sides, deterministic).

    Never fails on states satisfying the search-space invariants: occupancy
    caps the events per slot at the room count and all-room events fit any
    leftover room.
    """
    inst = state.instance
    ks = state.ks
    pairs = state.assignment()
    by_slot: dict[int, list[int]] = {}
    for e0, t0 in enumerate(ks.ev_slot):
        if t0 >= 0 and ks.ev_room[e0] < 0:
            by_slot.setdefault(int(t0), []).append(e0)
    for t0, pending in by_slot.items():
        free = [r0 for r0 in range(inst.num_rooms) if ks.room_occ[t0, r0] < 0]
        assert len(pending) <= len(free), (
            f"timeslot {t0 + 1}: {len(pending)} roomless events, {len(free)} free rooms"
        )
        for e0, r0 in zip(sorted(pending), free):
            pairs[e0] = (t0 + 1, r0 + 1)
    return pairs
