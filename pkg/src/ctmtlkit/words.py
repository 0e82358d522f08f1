"""Finite timed words over exact rational timestamps, the counting sets the
semantics is defined from, and the extension/projection machinery used by
the compiler round trip.

Positions are 0-based throughout.
"""

from __future__ import annotations

from collections.abc import Callable, Collection
from dataclasses import dataclass
from fractions import Fraction

from .intervals import Interval


class ProjectionUndefined(ValueError):
    """Raised when a word is not an extension of the required shape."""


@dataclass(frozen=True)
class TimedWord:
    """Non-empty sequence of (event set, timestamp), weakly monotone."""

    points: tuple[tuple[frozenset[str], Fraction], ...]

    def __post_init__(self) -> None:
        if not self.points:
            raise ValueError("empty timed word")
        prev: Fraction | None = None
        for events, t in self.points:
            if not events:
                raise ValueError("empty event set")
            if t < 0:
                raise ValueError(f"negative timestamp {t}")
            if prev is not None and t < prev:
                raise ValueError(f"decreasing timestamps: {prev} then {t}")
            prev = t

    def __len__(self) -> int:
        return len(self.points)

    def events(self, i: int) -> frozenset[str]:
        return self.points[i][0]

    def time(self, i: int) -> Fraction:
        return self.points[i][1]

    @property
    def times(self) -> tuple[Fraction, ...]:
        return tuple(t for _, t in self.points)

    def alphabet(self) -> frozenset[str]:
        out: set[str] = set()
        for events, _ in self.points:
            out |= events
        return frozenset(out)

    def is_strict(self) -> bool:
        return all(self.points[i][1] < self.points[i + 1][1]
                   for i in range(len(self.points) - 1))


def word(*points: tuple[Collection[str] | str, object]) -> TimedWord:
    """Convenience constructor: word(({"a"}, "0.3"), ("b", "0.7"), ...)."""
    built = []
    for events, t in points:
        if isinstance(events, str):
            events = {events}
        built.append((frozenset(events), Fraction(t)))  # type: ignore[arg-type]
    return TimedWord(tuple(built))


def validate(w: TimedWord) -> str:
    """'strict' when timestamps strictly increase, 'weak' otherwise.

    Structural errors raise from the constructor.
    """
    return "strict" if w.is_strict() else "weak"


def _as_predicate(holds: Collection[int] | Callable[[int], bool]) -> Callable[[int], bool]:
    if callable(holds):
        return holds
    members = frozenset(holds)
    return members.__contains__


def count_in_interval(w: TimedWord, i: int, interval: Interval,
                      holds: Collection[int] | Callable[[int], bool]) -> int:
    """|{k : t_k in t_i + I and holds(k)}|; k = i itself may qualify."""
    if not 0 <= i < len(w):
        raise IndexError(f"position {i} out of range")
    pred = _as_predicate(holds)
    anchor = w.time(i)
    return sum(1 for k in range(len(w))
               if interval.contains(w.time(k) - anchor) and pred(k))


def count_between(w: TimedWord, i: int, j: int,
                  holds: Collection[int] | Callable[[int], bool]) -> int:
    """Count over strictly intermediate positions i < k < j."""
    for pos in (i, j):
        if not 0 <= pos < len(w):
            raise IndexError(f"position {pos} out of range")
    pred = _as_predicate(holds)
    return sum(1 for k in range(i + 1, j) if pred(k))


def is_simple_extension(w: TimedWord, base: Collection[str]) -> bool:
    base_set = frozenset(base)
    return all(events & base_set for events, _ in w.points)


def simple_projection(w: TimedWord, fresh: Collection[str]) -> TimedWord:
    """Erase the fresh symbols from every point; domain is preserved."""
    fresh_set = frozenset(fresh)
    points = []
    for idx, (events, t) in enumerate(w.points):
        kept = events - fresh_set
        if not kept:
            raise ProjectionUndefined(
                f"point {idx} (t={t}) carries only erased symbols; "
                "simple projection undefined")
        points.append((kept, t))
    return TimedWord(tuple(points))


def oversampled_projection(w: TimedWord, fresh: Collection[str]) -> TimedWord:
    """Delete points carrying only fresh symbols, erase fresh from the rest.

    The first and last point must be action points (carry a base symbol).
    """
    fresh_set = frozenset(fresh)
    for which, idx in (("first", 0), ("last", len(w) - 1)):
        if w.events(idx) <= fresh_set:
            raise ProjectionUndefined(
                f"{which} point carries no base symbol; "
                "not an oversampled behaviour")
    points = []
    for events, t in w.points:
        kept = events - fresh_set
        if kept:
            points.append((kept, t))
    return TimedWord(tuple(points))
