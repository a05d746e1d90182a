"""Immutable problem data for post-enrolment course timetabling.

An instance is a set of events that must each receive one (timeslot, room)
pair, or the dummy pair when left unscheduled.  All ids (events, rooms,
students, features, timeslots, days) are 1-based at this module's boundary;
array fields are indexed by ``id - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

# Sentinels for "unscheduled": 0 lies outside every 1-based id range.
DUMMY_TIMESLOT = 0
DUMMY_ROOM = 0
DUMMY_PAIR = (DUMMY_TIMESLOT, DUMMY_ROOM)


class Formulation(Enum):
    """Problem variant tag.

    FULL enables all hard constraints (conflicts, room compatibility,
    occupancy, availability, precedences, unscheduled events) plus the three
    soft costs.  ORIGINAL drops availability, precedences and the unscheduled
    relaxation (reported solutions are expected to schedule everything).
    HARD_ONLY keeps conflicts/compatibility/occupancy/unscheduled and has no
    soft costs at all.
    """

    FULL = "full"
    ORIGINAL = "original"
    HARD_ONLY = "hard-only"

    @property
    def has_soft_costs(self) -> bool:
        return self is not Formulation.HARD_ONLY

    @property
    def has_extra_constraints(self) -> bool:
        """Whether availability/precedence data may be present."""
        return self is Formulation.FULL


def is_unscheduled(pair: tuple[int, int]) -> bool:
    return pair == DUMMY_PAIR


@dataclass(frozen=True, eq=False)
class Instance:
    """One timetabling problem, immutable after construction.

    Attributes
    ----------
    enrolment:
        Per-event frozensets of 1-based student ids (index ``e - 1``).
    student_events:
        Inverse view, per-student frozensets of event ids (index ``s - 1``).
        Derived automatically; kept because both directions are hot paths.
    availability:
        Boolean (E, T) array, ``availability[e-1, t-1]``.  Full for formats
        without availability data.
    precedences:
        Frozenset of (before, after) event-id pairs.
    """

    num_events: int
    num_rooms: int
    num_students: int
    num_features: int
    num_timeslots: int
    num_days: int
    room_capacity: np.ndarray
    enrolment: tuple[frozenset[int], ...]
    room_features: tuple[frozenset[int], ...]
    event_features: tuple[frozenset[int], ...]
    availability: np.ndarray
    precedences: frozenset[tuple[int, int]]
    formulation: Formulation = Formulation.FULL
    name: str = ""
    student_events: tuple[frozenset[int], ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        E, T, D = self.num_events, self.num_timeslots, self.num_days
        if D <= 0 or T % D != 0:
            raise ValueError(f"timeslot count {T} is not a multiple of {D} days")
        cap = np.asarray(self.room_capacity, dtype=np.int64)
        if cap.shape != (self.num_rooms,):
            raise ValueError("room_capacity length does not match num_rooms")
        if cap.size and cap.min() < 0:
            raise ValueError("negative room capacity")
        avail = np.asarray(self.availability, dtype=bool)
        if avail.shape != (E, T):
            raise ValueError(f"availability must be shape ({E}, {T})")
        if len(self.enrolment) != E:
            raise ValueError("enrolment length does not match num_events")
        for pair in self.precedences:
            a, b = pair
            if a == b:
                raise ValueError(f"self-precedence on event {a}")
            if not (1 <= a <= E and 1 <= b <= E):
                raise ValueError(f"precedence pair {pair} out of range")
        if not self.formulation.has_extra_constraints:
            if self.precedences:
                raise ValueError(
                    f"{self.formulation.value} formulation admits no precedences"
                )
            if not avail.all():
                raise ValueError(
                    f"{self.formulation.value} formulation requires total availability"
                )
        # normalize to read-only arrays / immutable containers
        cap.setflags(write=False)
        avail.setflags(write=False)
        object.__setattr__(self, "room_capacity", cap)
        object.__setattr__(self, "availability", avail)
        object.__setattr__(
            self, "enrolment", tuple(frozenset(s) for s in self.enrolment)
        )
        for e, students in enumerate(self.enrolment, start=1):
            for s in students:
                if not (1 <= s <= self.num_students):
                    raise ValueError(f"student {s} of event {e} out of range")
        by_student: list[set[int]] = [set() for _ in range(self.num_students)]
        for e, students in enumerate(self.enrolment, start=1):
            for s in students:
                by_student[s - 1].add(e)
        object.__setattr__(
            self, "student_events", tuple(frozenset(s) for s in by_student)
        )
        object.__setattr__(
            self, "room_features", tuple(frozenset(f) for f in self.room_features)
        )
        object.__setattr__(
            self, "event_features", tuple(frozenset(f) for f in self.event_features)
        )

    @property
    def slots_per_day(self) -> int:
        return self.num_timeslots // self.num_days

    def last_slots(self) -> tuple[int, ...]:
        """The final timeslot of each day (1-based)."""
        spd = self.slots_per_day
        return tuple(d * spd for d in range(1, self.num_days + 1))


def enrolment_count(inst: Instance, event: int) -> int:
    """Number of students attending ``event`` (the unit of unscheduled cost)."""
    if not (1 <= event <= inst.num_events):
        raise ValueError(f"event id {event} out of range 1..{inst.num_events}")
    return len(inst.enrolment[event - 1])


def day_of(inst: Instance, timeslot: int) -> int:
    """Day (1-based) that ``timeslot`` belongs to."""
    if timeslot == DUMMY_TIMESLOT:
        raise ValueError("the dummy timeslot belongs to no day")
    if not (1 <= timeslot <= inst.num_timeslots):
        raise ValueError(
            f"timeslot {timeslot} out of range 1..{inst.num_timeslots}"
        )
    return (timeslot - 1) // inst.slots_per_day + 1
