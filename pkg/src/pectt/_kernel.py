"""JIT-compiled move engine.

Everything here works on packed numpy arrays with 0-based ids and ``-1`` as
the dummy timeslot/room; the public modules translate to the 1-based model.
The same insert/remove/admissibility routines back both the per-move API in
``search``/``evaluation`` and the annealing loop, so what the oracles certify
per move is exactly what runs inside the hot loop.

Layout note: the public dispatchers take the KInst/KState tuples, but the
inlined worker flavours (``_i_*``) take plain arrays.  Extracting an array
member from a tuple inside a branch defeats numba's refcount pruning and
costs an atomic incref/decref pair per access, which at ~10^8 proposals
dominates everything else; entry points therefore unpack the tuples exactly
once, in straight-line code, and the hot path only ever touches locals.

The RNG is a splitmix64 stream held in a one-element uint64 array: explicit
state keeps replications independent under thread pools and makes runs
bit-reproducible across processes, which a global generator would not.
"""

from __future__ import annotations

from collections import namedtuple

import numpy as np
from numba import njit

# component indices in the running cost vector; VIOL counts violated
# conflict/precedence pairs (validity bookkeeping, not part of the cost)
DIST, CONF, PREC, S1, S2, S3, VIOL = 0, 1, 2, 3, 4, 5, 6

KInst = namedtuple(
    "KInst",
    [
        "num_events",
        "num_rooms",
        "num_slots",
        "slots_per_day",
        "soft_on",
        "sizes",
        "stu_indptr",
        "stu_ids",
        "conf_indptr",
        "conf_ids",
        "succ_indptr",
        "succ_ids",
        "pred_indptr",
        "pred_ids",
        "avail",
        "avail_indptr",
        "avail_slots",
        "room_indptr",
        "room_ids",
        "is_all_room",
    ],
)

KState = namedtuple(
    "KState",
    ["ev_slot", "ev_room", "room_occ", "slot_occ", "att", "events_day", "comps"],
)

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_U53 = 1.0 / 9007199254740992.0  # 2**-53


def _rng_next(state):
    state[0] = state[0] + _GOLDEN
    z = state[0]
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


_i_rng_next = njit(inline="always")(_rng_next)


def _rng_u01(state):
    return float(_i_rng_next(state) >> np.uint64(11)) * _U53


_i_rng_u01 = njit(inline="always")(_rng_u01)


def _rng_below(state, n):
    v = int(_i_rng_u01(state) * n)
    if v >= n:
        v = n - 1
    return v


_i_rng_below = njit(inline="always")(_rng_below)


@njit(inline="always")
def _i_run_merge_delta(att, s, t, day_start, spd):
    # consecutive-run penalty change of slot t becoming attended, given its
    # neighbours: the runs left and right of t merge into one
    left = 0
    i = t - 1
    while i >= day_start and att[s, i] > 0:
        left += 1
        i -= 1
    right = 0
    i = t + 1
    end = day_start + spd
    while i < end and att[s, i] > 0:
        right += 1
        i += 1
    merged = left + 1 + right
    d = merged - 2 if merged > 2 else 0
    if left > 2:
        d -= left - 2
    if right > 2:
        d -= right - 2
    return d


@njit(inline="always")
def _i_insert(
    sizes,
    stu_indptr,
    stu_ids,
    conf_indptr,
    conf_ids,
    succ_indptr,
    succ_ids,
    pred_indptr,
    pred_ids,
    soft_on,
    spd,
    ev_slot,
    ev_room,
    room_occ,
    slot_occ,
    att,
    events_day,
    comps,
    e,
    t,
    r,
):
    # t is a real slot; r is a real room or -1 for all-room events
    sz = sizes[e]
    comps[DIST] -= sz
    for k in range(conf_indptr[e], conf_indptr[e + 1]):
        e2 = conf_ids[k]
        if ev_slot[e2] == t:
            c2 = sizes[e2]
            comps[CONF] += sz if sz < c2 else c2
            comps[VIOL] += 1
    for k in range(succ_indptr[e], succ_indptr[e + 1]):
        e2 = succ_ids[k]
        t2 = ev_slot[e2]
        if t2 >= 0 and t >= t2:
            c2 = sizes[e2]
            comps[PREC] += sz if sz < c2 else c2
            comps[VIOL] += 1
    for k in range(pred_indptr[e], pred_indptr[e + 1]):
        e2 = pred_ids[k]
        t2 = ev_slot[e2]
        if t2 >= 0 and t2 >= t:
            c2 = sizes[e2]
            comps[PREC] += sz if sz < c2 else c2
            comps[VIOL] += 1
    if soft_on:
        if (t + 1) % spd == 0:
            comps[S1] += sz
        day = t // spd
        ds = day * spd
        for k in range(stu_indptr[e], stu_indptr[e + 1]):
            s = stu_ids[k]
            ed = events_day[s, day]
            if ed == 0:
                comps[S3] += 1
            elif ed == 1:
                comps[S3] -= 1
            events_day[s, day] = ed + 1
            a = att[s, t]
            att[s, t] = a + 1
            if a == 0:
                comps[S2] += _i_run_merge_delta(att, s, t, ds, spd)
    slot_occ[t] += 1
    if r >= 0:
        room_occ[t, r] = e
    ev_slot[e] = t
    ev_room[e] = r


@njit(inline="always")
def _i_remove(
    sizes,
    stu_indptr,
    stu_ids,
    conf_indptr,
    conf_ids,
    succ_indptr,
    succ_ids,
    pred_indptr,
    pred_ids,
    soft_on,
    spd,
    ev_slot,
    ev_room,
    room_occ,
    slot_occ,
    att,
    events_day,
    comps,
    e,
):
    t = ev_slot[e]
    r = ev_room[e]
    sz = sizes[e]
    comps[DIST] += sz
    for k in range(conf_indptr[e], conf_indptr[e + 1]):
        e2 = conf_ids[k]
        if ev_slot[e2] == t:
            c2 = sizes[e2]
            comps[CONF] -= sz if sz < c2 else c2
            comps[VIOL] -= 1
    for k in range(succ_indptr[e], succ_indptr[e + 1]):
        e2 = succ_ids[k]
        t2 = ev_slot[e2]
        if t2 >= 0 and t >= t2:
            c2 = sizes[e2]
            comps[PREC] -= sz if sz < c2 else c2
            comps[VIOL] -= 1
    for k in range(pred_indptr[e], pred_indptr[e + 1]):
        e2 = pred_ids[k]
        t2 = ev_slot[e2]
        if t2 >= 0 and t2 >= t:
            c2 = sizes[e2]
            comps[PREC] -= sz if sz < c2 else c2
            comps[VIOL] -= 1
    if soft_on:
        if (t + 1) % spd == 0:
            comps[S1] -= sz
        day = t // spd
        ds = day * spd
        for k in range(stu_indptr[e], stu_indptr[e + 1]):
            s = stu_ids[k]
            ed = events_day[s, day]
            if ed == 1:
                comps[S3] -= 1
            elif ed == 2:
                comps[S3] += 1
            events_day[s, day] = ed - 1
            a = att[s, t]
            att[s, t] = a - 1
            if a == 1:
                comps[S2] -= _i_run_merge_delta(att, s, t, ds, spd)
    slot_occ[t] -= 1
    if r >= 0:
        room_occ[t, r] = -1
    ev_slot[e] = -1
    ev_room[e] = -1


@njit(inline="always")
def _i_find_room(room_indptr, room_ids, room_occ, e, t, ignore1, ignore2):
    # first free compatible room at t in ascending attractiveness;
    # rooms held by ignore1/ignore2 count as free (swap partners)
    for k in range(room_indptr[e], room_indptr[e + 1]):
        r = room_ids[k]
        occ = room_occ[t, r]
        if occ < 0 or occ == ignore1 or occ == ignore2:
            return r
    return -1


@njit(inline="always")
def _i_adm_me(
    avail,
    num_rooms,
    is_all_room,
    room_indptr,
    room_ids,
    ev_slot,
    slot_occ,
    room_occ,
    e,
    t,
    me_minus,
):
    # resolved room (>= 0), -1 for the dummy room, -2 when inadmissible
    if t == ev_slot[e]:
        return -2
    if t < 0:
        return -2 if me_minus else -1
    if not avail[e, t]:
        return -2
    if slot_occ[t] >= num_rooms:
        return -2
    if is_all_room[e]:
        return -1
    r = _i_find_room(room_indptr, room_ids, room_occ, e, t, -1, -1)
    return r if r >= 0 else -2


@njit(inline="always")
def _i_adm_se(avail, is_all_room, room_indptr, room_ids, ev_slot, room_occ, e1, e2):
    t1 = ev_slot[e1]
    t2 = ev_slot[e2]
    if t1 == t2:
        return False, -1, -1
    if t2 >= 0 and not avail[e1, t2]:
        return False, -1, -1
    if t1 >= 0 and not avail[e2, t1]:
        return False, -1, -1
    r1 = -1
    if t2 >= 0 and not is_all_room[e1]:
        r1 = _i_find_room(room_indptr, room_ids, room_occ, e1, t2, e2, -1)
        if r1 < 0:
            return False, -1, -1
    r2 = -1
    if t1 >= 0 and not is_all_room[e2]:
        r2 = _i_find_room(room_indptr, room_ids, room_occ, e2, t1, e1, -1)
        if r2 < 0:
            return False, -1, -1
    return True, r1, r2


@njit(inline="always")
def _i_scalar(comps, w, mult):
    return (
        w * (comps[DIST] + mult * (comps[CONF] + comps[PREC]))
        + comps[S1]
        + comps[S2]
        + comps[S3]
    )


@njit(inline="always")
def _i_better(comps, best):
    # valid-first hierarchy: (violated pair count, distance, objective);
    # the count rather than the cost, so zero-enrolment events cannot hide
    # conflict or precedence violations behind a zero price
    if comps[VIOL] != best[VIOL]:
        return comps[VIOL] < best[VIOL]
    if comps[DIST] != best[DIST]:
        return comps[DIST] < best[DIST]
    return (comps[S1] + comps[S2] + comps[S3]) < (best[S1] + best[S2] + best[S3])


def _sa_run(
    ins,
    st,
    rng,
    t0,
    beta,
    levels,
    samples,
    w,
    sr,
    me_minus,
    endgame_start,
    draw_cap,
    best_slot,
    best_room,
    best_comps,
    trace,
    stats,
):
    """Anneal in place: ``levels`` temperature levels x ``samples`` proposals.

    Every iteration is one proposal (stalled draws included).  ``trace`` gets
    one row per level; ``best_*`` receive the incumbent under the valid-first
    hierarchy, compared on undoubled components so the endgame re-weighting
    cannot displace a genuinely better earlier solution.

    A proposal is decomposed into up to four signed placement steps
    (sign -1 removes, +1 inserts at the stored slot/room); rejection replays
    them backwards with flipped signs.  The step executor is written out once
    and touches only function-entry locals, keeping numba's refcounting out
    of the loop.
    """
    E = ins.num_events
    num_rooms = ins.num_rooms
    spd = ins.slots_per_day
    soft_on = ins.soft_on
    sizes = ins.sizes
    stu_indptr = ins.stu_indptr
    stu_ids = ins.stu_ids
    conf_indptr = ins.conf_indptr
    conf_ids = ins.conf_ids
    succ_indptr = ins.succ_indptr
    succ_ids = ins.succ_ids
    pred_indptr = ins.pred_indptr
    pred_ids = ins.pred_ids
    avail = ins.avail
    avail_indptr = ins.avail_indptr
    avail_slots = ins.avail_slots
    room_indptr = ins.room_indptr
    room_ids = ins.room_ids
    is_all_room = ins.is_all_room
    ev_slot = st.ev_slot
    ev_room = st.ev_room
    room_occ = st.room_occ
    slot_occ = st.slot_occ
    att = st.att
    events_day = st.events_day
    comps = st.comps
    plan_sign = np.empty(4, np.int64)
    plan_e = np.empty(4, np.int64)
    plan_t = np.empty(4, np.int64)
    plan_r = np.empty(4, np.int64)
    temp = t0
    it = 0
    for i in range(E):
        best_slot[i] = ev_slot[i]
        best_room[i] = ev_room[i]
    for i in range(7):
        best_comps[i] = comps[i]
    for level in range(levels):
        for _ in range(samples):
            mult = 2 if it >= endgame_start else 1
            # --- draw an admissible move, bounded redraws ---
            nsteps = 0
            for _attempt in range(draw_cap):
                if _i_rng_u01(rng) < sr and E >= 2:
                    e1 = _i_rng_below(rng, E)
                    o = _i_rng_below(rng, E - 1)
                    e2 = o + 1 if o >= e1 else o
                    t1 = ev_slot[e1]
                    t2 = ev_slot[e2]
                    if t1 == t2:
                        continue
                    if t2 >= 0 and not avail[e1, t2]:
                        continue
                    if t1 >= 0 and not avail[e2, t1]:
                        continue
                    r1 = -1
                    if t2 >= 0 and not is_all_room[e1]:
                        r1 = -1
                        for k2 in range(room_indptr[e1], room_indptr[e1 + 1]):
                            rr = room_ids[k2]
                            occ = room_occ[t2, rr]
                            if occ < 0 or occ == e2:
                                r1 = rr
                                break
                        if r1 < 0:
                            continue
                    r2 = -1
                    if t1 >= 0 and not is_all_room[e2]:
                        r2 = -1
                        for k2 in range(room_indptr[e2], room_indptr[e2 + 1]):
                            rr = room_ids[k2]
                            occ = room_occ[t1, rr]
                            if occ < 0 or occ == e1:
                                r2 = rr
                                break
                        if r2 < 0:
                            continue
                    if t1 >= 0:
                        plan_sign[nsteps] = -1
                        plan_e[nsteps] = e1
                        plan_t[nsteps] = t1
                        plan_r[nsteps] = ev_room[e1]
                        nsteps += 1
                    if t2 >= 0:
                        plan_sign[nsteps] = -1
                        plan_e[nsteps] = e2
                        plan_t[nsteps] = t2
                        plan_r[nsteps] = ev_room[e2]
                        nsteps += 1
                        plan_sign[nsteps] = 1
                        plan_e[nsteps] = e1
                        plan_t[nsteps] = t2
                        plan_r[nsteps] = r1
                        nsteps += 1
                    if t1 >= 0:
                        plan_sign[nsteps] = 1
                        plan_e[nsteps] = e2
                        plan_t[nsteps] = t1
                        plan_r[nsteps] = r2
                        nsteps += 1
                    break
                else:
                    e = _i_rng_below(rng, E)
                    lo = avail_indptr[e]
                    na = avail_indptr[e + 1] - lo
                    hi = na if me_minus else na + 1
                    if hi <= 0:
                        continue
                    idx = _i_rng_below(rng, hi)
                    t = avail_slots[lo + idx] if idx < na else -1
                    old_t = ev_slot[e]
                    if t == old_t:
                        continue
                    room = -1
                    if t >= 0:
                        if not avail[e, t]:
                            continue
                        if slot_occ[t] >= num_rooms:
                            continue
                        if not is_all_room[e]:
                            room = -1
                            for k2 in range(room_indptr[e], room_indptr[e + 1]):
                                rr = room_ids[k2]
                                if room_occ[t, rr] < 0:
                                    room = rr
                                    break
                            if room < 0:
                                continue
                    if old_t >= 0:
                        plan_sign[nsteps] = -1
                        plan_e[nsteps] = e
                        plan_t[nsteps] = old_t
                        plan_r[nsteps] = ev_room[e]
                        nsteps += 1
                    if t >= 0:
                        plan_sign[nsteps] = 1
                        plan_e[nsteps] = e
                        plan_t[nsteps] = t
                        plan_r[nsteps] = room
                        nsteps += 1
                    break
            if nsteps == 0:
                stats[1] += 1
                it += 1
                continue
            d0 = comps[DIST]
            c0 = comps[CONF]
            p0 = comps[PREC]
            s0 = comps[S1] + comps[S2] + comps[S3]
            # --- execute plan; on rejection, replay it backwards flipped ---
            keep = True
            for phase in range(2):
                if phase == 1 and keep:
                    break
                if phase == 0:
                    k_start = 0
                    k_stop = nsteps
                    k_step = 1
                    flip = 1
                else:
                    k_start = nsteps - 1
                    k_stop = -1
                    k_step = -1
                    flip = -1
                for k in range(k_start, k_stop, k_step):
                    sgn = plan_sign[k] * flip
                    e_ = plan_e[k]
                    t_ = plan_t[k]
                    r_ = plan_r[k]
                    sz = sizes[e_]
                    comps[DIST] -= sgn * sz
                    if sgn < 0:
                        # unhook before scanning so pair terms see the event gone
                        slot_occ[t_] -= 1
                        if r_ >= 0:
                            room_occ[t_, r_] = -1
                        ev_slot[e_] = -1
                        ev_room[e_] = -1
                    for k2 in range(conf_indptr[e_], conf_indptr[e_ + 1]):
                        e2_ = conf_ids[k2]
                        if ev_slot[e2_] == t_:
                            c2 = sizes[e2_]
                            comps[CONF] += sgn * (sz if sz < c2 else c2)
                            comps[VIOL] += sgn
                    for k2 in range(succ_indptr[e_], succ_indptr[e_ + 1]):
                        e2_ = succ_ids[k2]
                        t2_ = ev_slot[e2_]
                        if t2_ >= 0 and t_ >= t2_:
                            c2 = sizes[e2_]
                            comps[PREC] += sgn * (sz if sz < c2 else c2)
                            comps[VIOL] += sgn
                    for k2 in range(pred_indptr[e_], pred_indptr[e_ + 1]):
                        e2_ = pred_ids[k2]
                        t2_ = ev_slot[e2_]
                        if t2_ >= 0 and t2_ >= t_:
                            c2 = sizes[e2_]
                            comps[PREC] += sgn * (sz if sz < c2 else c2)
                            comps[VIOL] += sgn
                    if soft_on:
                        if (t_ + 1) % spd == 0:
                            comps[S1] += sgn * sz
                        day = t_ // spd
                        ds = day * spd
                        for k2 in range(stu_indptr[e_], stu_indptr[e_ + 1]):
                            s_ = stu_ids[k2]
                            ed = events_day[s_, day]
                            edn = ed + sgn
                            if edn == 1:
                                comps[S3] += 1
                            elif ed == 1:
                                comps[S3] -= 1
                            events_day[s_, day] = edn
                            a = att[s_, t_]
                            att[s_, t_] = a + sgn
                            if (sgn > 0 and a == 0) or (sgn < 0 and a == 1):
                                # 0 <-> 1 transition: run structure changed
                                left = 0
                                i2 = t_ - 1
                                while i2 >= ds and att[s_, i2] > 0:
                                    left += 1
                                    i2 -= 1
                                right = 0
                                i2 = t_ + 1
                                end2 = ds + spd
                                while i2 < end2 and att[s_, i2] > 0:
                                    right += 1
                                    i2 += 1
                                merged = left + 1 + right
                                dlt = merged - 2 if merged > 2 else 0
                                if left > 2:
                                    dlt -= left - 2
                                if right > 2:
                                    dlt -= right - 2
                                comps[S2] += sgn * dlt
                    if sgn > 0:
                        slot_occ[t_] += 1
                        if r_ >= 0:
                            room_occ[t_, r_] = e_
                        ev_slot[e_] = t_
                        ev_room[e_] = r_
                if phase == 0:
                    df = w * (
                        (comps[DIST] - d0)
                        + mult * ((comps[CONF] - c0) + (comps[PREC] - p0))
                    ) + (comps[S1] + comps[S2] + comps[S3] - s0)
                    if df > 0:
                        if _i_rng_u01(rng) >= np.exp(-df / temp):
                            keep = False
                    if keep:
                        stats[2] += 1
                        if _i_better(comps, best_comps):
                            for i in range(E):
                                best_slot[i] = ev_slot[i]
                                best_room[i] = ev_room[i]
                            for i in range(7):
                                best_comps[i] = comps[i]
            it += 1
        stats[0] += samples
        trace[level, 0] = temp
        trace[level, 1] = _i_scalar(comps, w, 2 if it >= endgame_start else 1)
        trace[level, 2] = best_comps[DIST]
        trace[level, 3] = best_comps[S1] + best_comps[S2] + best_comps[S3]
        temp *= beta


sa_run = njit(cache=True, nogil=True)(_sa_run)


# ---------------------------------------------------------------------------
# cached dispatchers over the tuple types, for Python callers


def _unpack_ins(ins):
    return (
        ins.sizes,
        ins.stu_indptr,
        ins.stu_ids,
        ins.conf_indptr,
        ins.conf_ids,
        ins.succ_indptr,
        ins.succ_ids,
        ins.pred_indptr,
        ins.pred_ids,
        ins.soft_on,
        ins.slots_per_day,
    )


_i_unpack_ins = njit(inline="always")(_unpack_ins)


def _unpack_st(st):
    return (
        st.ev_slot,
        st.ev_room,
        st.room_occ,
        st.slot_occ,
        st.att,
        st.events_day,
        st.comps,
    )


_i_unpack_st = njit(inline="always")(_unpack_st)


def _insert_event(ins, st, e, t, r):
    a = _i_unpack_ins(ins)
    b = _i_unpack_st(st)
    _i_insert(
        a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7], a[8], a[9], a[10],
        b[0], b[1], b[2], b[3], b[4], b[5], b[6],
        e, t, r,
    )


def _remove_event(ins, st, e):
    a = _i_unpack_ins(ins)
    b = _i_unpack_st(st)
    _i_remove(
        a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7], a[8], a[9], a[10],
        b[0], b[1], b[2], b[3], b[4], b[5], b[6],
        e,
    )


_i_insert_event = njit(inline="always")(_insert_event)
_i_remove_event = njit(inline="always")(_remove_event)


def _find_room(ins, st, e, t, ignore1, ignore2):
    return _i_find_room(ins.room_indptr, ins.room_ids, st.room_occ, e, t, ignore1, ignore2)


def _admissible_me(ins, st, e, t, me_minus):
    return _i_adm_me(
        ins.avail,
        ins.num_rooms,
        ins.is_all_room,
        ins.room_indptr,
        ins.room_ids,
        st.ev_slot,
        st.slot_occ,
        st.room_occ,
        e,
        t,
        me_minus,
    )


def _admissible_se(ins, st, e1, e2):
    return _i_adm_se(
        ins.avail,
        ins.is_all_room,
        ins.room_indptr,
        ins.room_ids,
        st.ev_slot,
        st.room_occ,
        e1,
        e2,
    )


def _apply_me(ins, st, e, t, r):
    if st.ev_slot[e] >= 0:
        _i_remove_event(ins, st, e)
    if t >= 0:
        _i_insert_event(ins, st, e, t, r)


_i_apply_me = njit(inline="always")(_apply_me)


def _apply_se(ins, st, e1, e2, r1, r2):
    ev_slot = st.ev_slot
    t1 = ev_slot[e1]
    t2 = ev_slot[e2]
    if t1 >= 0:
        _i_remove_event(ins, st, e1)
    if t2 >= 0:
        _i_remove_event(ins, st, e2)
    if t2 >= 0:
        _i_insert_event(ins, st, e1, t2, r1)
    if t1 >= 0:
        _i_insert_event(ins, st, e2, t1, r2)


_i_apply_se = njit(inline="always")(_apply_se)


def _scalar_from(comps, w, mult):
    return _i_scalar(comps, w, mult)


def _peek_me(ins, st, e, t, r, w, mult):
    # delta of an ME move without keeping it; the state is restored exactly
    comps = st.comps
    ev_slot = st.ev_slot
    ev_room = st.ev_room
    d0 = _i_scalar(comps, w, mult)
    old_t = ev_slot[e]
    old_r = ev_room[e]
    _i_apply_me(ins, st, e, t, r)
    df = _i_scalar(comps, w, mult) - d0
    _i_apply_me(ins, st, e, old_t, old_r)
    return df


def _peek_se(ins, st, e1, e2, r1, r2, w, mult):
    comps = st.comps
    ev_slot = st.ev_slot
    ev_room = st.ev_room
    d0 = _i_scalar(comps, w, mult)
    t1 = ev_slot[e1]
    t2 = ev_slot[e2]
    or1 = ev_room[e1]
    or2 = ev_room[e2]
    _i_apply_se(ins, st, e1, e2, r1, r2)
    df = _i_scalar(comps, w, mult) - d0
    if t2 >= 0:
        _i_remove_event(ins, st, e1)
    if t1 >= 0:
        _i_remove_event(ins, st, e2)
    if t1 >= 0:
        _i_insert_event(ins, st, e1, t1, or1)
    if t2 >= 0:
        _i_insert_event(ins, st, e2, t2, or2)
    return df


rng_next = njit(cache=True)(_rng_next)
rng_u01 = njit(cache=True)(_rng_u01)
rng_below = njit(cache=True)(_rng_below)
insert_event = njit(cache=True)(_insert_event)
remove_event = njit(cache=True)(_remove_event)
find_room = njit(cache=True)(_find_room)
admissible_me = njit(cache=True)(_admissible_me)
admissible_se = njit(cache=True)(_admissible_se)
apply_me = njit(cache=True)(_apply_me)
apply_se = njit(cache=True)(_apply_se)
scalar_from = njit(cache=True)(_scalar_from)
peek_me = njit(cache=True)(_peek_me)
peek_se = njit(cache=True)(_peek_se)
