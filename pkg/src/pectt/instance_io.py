"""Readers and writers for the public instance and solution text formats.

Instance files are whitespace-separated integers: a header ``E R F S``, then
R room capacities, then four 0/1 matrices (event-student, room-feature,
event-feature and, for the availability-carrying format, event-timeslot
availability followed by the event-event precedence matrix).  Solution files
carry one ``timeslot room`` pair per event, 0-based, with ``-1 -1`` marking
an unscheduled event.  The in-memory model stays 1-based; conversion happens
here and nowhere else.
"""

from __future__ import annotations

from enum import Enum
from pathlib import Path

import numpy as np

from .model import DUMMY_PAIR, Formulation, Instance

PUBLIC_TIMESLOTS = 45
PUBLIC_DAYS = 5


class InstanceFormat(Enum):
    # ITC 2007 track-2 files carry availability + precedence blocks;
    # ITC 2002 / Metaheuristics Network / Lewis & Paechter files do not.
    WITH_AVAILABILITY = "with-availability"
    PLAIN = "plain"


class ParseError(ValueError):
    """Malformed instance or solution text; carries block and line context."""


class _TokenReader:
    """Streams whitespace-separated integers, tracking line numbers."""

    def __init__(self, text: str):
        self._tokens: list[tuple[int, str]] = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            for tok in line.split():
                self._tokens.append((lineno, tok))
        self._pos = 0
        self._last_line = 0

    def next_int(self, block: str) -> int:
        if self._pos >= len(self._tokens):
            raise ParseError(
                f"truncated file: ran out of data in block '{block}' "
                f"(after line {self._last_line})"
            )
        lineno, tok = self._tokens[self._pos]
        self._pos += 1
        self._last_line = lineno
        try:
            return int(tok)
        except ValueError:
            raise ParseError(
                f"non-integer value {tok!r} in block '{block}' (line {lineno})"
            ) from None

    def expect_end(self) -> None:
        if self._pos < len(self._tokens):
            lineno, tok = self._tokens[self._pos]
            raise ParseError(f"trailing garbage {tok!r} after last block (line {lineno})")

    @property
    def line(self) -> int:
        return self._last_line


def _read_binary_matrix(rd: _TokenReader, rows: int, cols: int, block: str) -> np.ndarray:
    out = np.zeros((rows, cols), dtype=bool)
    for i in range(rows):
        for j in range(cols):
            v = rd.next_int(block)
            if v not in (0, 1):
                raise ParseError(
                    f"non-binary entry {v} in block '{block}' (line {rd.line})"
                )
            out[i, j] = bool(v)
    return out


def parse_instance(
    text: str | bytes,
    fmt: InstanceFormat = InstanceFormat.WITH_AVAILABILITY,
    formulation: Formulation = Formulation.FULL,
    name: str = "",
) -> Instance:
    """Parse one instance file.  T is fixed at 45, D at 5 for all public files.

    The formulation tag is supplied by the caller, never inferred: plain-format
    files are shared by families with different formulations.
    """
    if isinstance(text, bytes):
        text = text.decode("ascii")
    if fmt is InstanceFormat.WITH_AVAILABILITY and formulation is not Formulation.FULL:
        raise ParseError(
            "availability-carrying files imply the full formulation; "
            f"got {formulation.value}"
        )
    rd = _TokenReader(text)
    E = rd.next_int("header")
    R = rd.next_int("header")
    F = rd.next_int("header")
    S = rd.next_int("header")
    if min(E, R, F, S) < 0:
        raise ParseError(f"negative count in header (line {rd.line})")
    capacity = np.empty(R, dtype=np.int64)
    for r in range(R):
        c = rd.next_int("room capacities")
        if c < 0:
            raise ParseError(f"negative capacity {c} for room {r + 1} (line {rd.line})")
        capacity[r] = c
    enrol = _read_binary_matrix(rd, E, S, "event-student enrolment")
    room_feat = _read_binary_matrix(rd, R, F, "room-feature")
    event_feat = _read_binary_matrix(rd, E, F, "event-feature")
    if fmt is InstanceFormat.WITH_AVAILABILITY:
        avail = _read_binary_matrix(rd, E, PUBLIC_TIMESLOTS, "availability")
        prec = set()
        # Entry (i, j) = 1 puts event i before event j.  Published files also
        # mirror pairs as -1 in the transposed cell; accept that spelling.
        for i in range(E):
            for j in range(E):
                v = rd.next_int("precedence")
                if v == 1:
                    if i != j:
                        prec.add((i + 1, j + 1))
                elif v == -1:
                    if i != j:
                        prec.add((j + 1, i + 1))
                elif v != 0:
                    raise ParseError(
                        f"precedence entry {v} not in {{-1,0,1}} (line {rd.line})"
                    )
    else:
        avail = np.ones((E, PUBLIC_TIMESLOTS), dtype=bool)
        prec = set()
    rd.expect_end()
    return Instance(
        num_events=E,
        num_rooms=R,
        num_students=S,
        num_features=F,
        num_timeslots=PUBLIC_TIMESLOTS,
        num_days=PUBLIC_DAYS,
        room_capacity=capacity,
        enrolment=tuple(
            frozenset(int(s) + 1 for s in np.flatnonzero(enrol[e])) for e in range(E)
        ),
        room_features=tuple(
            frozenset(int(f) + 1 for f in np.flatnonzero(room_feat[r])) for r in range(R)
        ),
        event_features=tuple(
            frozenset(int(f) + 1 for f in np.flatnonzero(event_feat[e])) for e in range(E)
        ),
        availability=avail,
        precedences=frozenset(prec),
        formulation=formulation,
        name=name,
    )


def load_instance(
    path: str | Path,
    fmt: InstanceFormat,
    formulation: Formulation,
) -> Instance:
    p = Path(path)
    return parse_instance(p.read_text(), fmt, formulation, name=p.stem)


def write_instance(inst: Instance, fmt: InstanceFormat | None = None) -> str:
    """Serialize an instance back to file text (one value per line).

    Used for round-trip checks and synthetic fixtures; the inverse of
    ``parse_instance`` up to whitespace normalization.
    """
    if fmt is None:
        fmt = (
            InstanceFormat.WITH_AVAILABILITY
            if inst.formulation.has_extra_constraints
            else InstanceFormat.PLAIN
        )
    lines = [f"{inst.num_events} {inst.num_rooms} {inst.num_features} {inst.num_students}"]
    lines += [str(int(c)) for c in inst.room_capacity]
    for e in range(1, inst.num_events + 1):
        students = inst.enrolment[e - 1]
        lines += ["1" if s in students else "0" for s in range(1, inst.num_students + 1)]
    for r in range(1, inst.num_rooms + 1):
        feats = inst.room_features[r - 1]
        lines += ["1" if f in feats else "0" for f in range(1, inst.num_features + 1)]
    for e in range(1, inst.num_events + 1):
        feats = inst.event_features[e - 1]
        lines += ["1" if f in feats else "0" for f in range(1, inst.num_features + 1)]
    if fmt is InstanceFormat.WITH_AVAILABILITY:
        for e in range(inst.num_events):
            lines += [
                "1" if inst.availability[e, t] else "0"
                for t in range(inst.num_timeslots)
            ]
        for e1 in range(1, inst.num_events + 1):
            lines += [
                "1" if (e1, e2) in inst.precedences else "0"
                for e2 in range(1, inst.num_events + 1)
            ]
    return "\n".join(lines) + "\n"


def write_solution(assignment: list[tuple[int, int]]) -> str:
    """Render a completed timetable as competition-format solution text.

    Every pair must be either fully real (1-based) or the dummy pair; a mixed
    pair means post-processing was skipped and is an internal error.
    """
    lines = []
    for e, (t, r) in enumerate(assignment, start=1):
        if (t, r) == DUMMY_PAIR:
            lines.append("-1 -1")
        elif t >= 1 and r >= 1:
            lines.append(f"{t - 1} {r - 1}")
        else:
            raise RuntimeError(
                f"event {e} carries mixed dummy pair ({t}, {r}); "
                "run postprocess_all_rooms before writing"
            )
    return "\n".join(lines) + "\n"


def parse_solution(
    text: str | bytes,
    num_events: int,
    num_timeslots: int | None = None,
    num_rooms: int | None = None,
) -> list[tuple[int, int]]:
    """Inverse of ``write_solution``: E lines of ``t r`` (0-based) or ``-1 -1``."""
    if isinstance(text, bytes):
        text = text.decode("ascii")
    rows = [line.split() for line in text.splitlines() if line.strip()]
    if len(rows) != num_events:
        raise ParseError(f"expected {num_events} solution lines, found {len(rows)}")
    out: list[tuple[int, int]] = []
    for lineno, parts in enumerate(rows, start=1):
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected two integers, got {parts!r}")
        try:
            t, r = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer value in {parts!r}") from None
        if t == -1 and r == -1:
            out.append(DUMMY_PAIR)
            continue
        if t == -1 or r == -1:
            raise ParseError(f"line {lineno}: half-dummy pair ({t}, {r}) is forbidden")
        if t < 0 or r < 0:
            raise ParseError(f"line {lineno}: negative id in ({t}, {r})")
        if num_timeslots is not None and t >= num_timeslots:
            raise ParseError(f"line {lineno}: timeslot {t} out of range 0..{num_timeslots - 1}")
        if num_rooms is not None and r >= num_rooms:
            raise ParseError(f"line {lineno}: room {r} out of range 0..{num_rooms - 1}")
        out.append((t + 1, r + 1))
    return out
