"""Time intervals with natural-or-infinite endpoints and open/closed brackets."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class Interval:
    """An interval <lo, hi> over time distances.

    ``hi`` is ``None`` for an unbounded right end, which must be open.
    A degenerate interval (lo == hi) must be closed on both sides.
    """

    lo: int
    hi: int | None
    lo_closed: bool
    hi_closed: bool

    def __post_init__(self) -> None:
        if self.lo < 0:
            raise ValueError(f"negative left endpoint: {self.lo}")
        if self.hi is None:
            if self.hi_closed:
                raise ValueError("unbounded right endpoint must be open")
        else:
            if self.hi < self.lo:
                raise ValueError(f"empty interval: lo={self.lo} > hi={self.hi}")
            if self.hi == self.lo and not (self.lo_closed and self.hi_closed):
                raise ValueError("degenerate interval requires closed brackets")

    def contains(self, x: Fraction | int) -> bool:
        if self.lo_closed:
            if x < self.lo:
                return False
        elif x <= self.lo:
            return False
        if self.hi is None:
            return True
        if self.hi_closed:
            return x <= self.hi
        return x < self.hi

    @property
    def unbounded(self) -> bool:
        return self.hi is None

    @property
    def punctual(self) -> bool:
        return self.hi is not None and self.lo == self.hi

    def render(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        hi = "inf" if self.hi is None else str(self.hi)
        return f"{left}{self.lo},{hi}{right}"

    def __str__(self) -> str:
        return self.render()


def closed(lo: int, hi: int) -> Interval:
    return Interval(lo, hi, True, True)

def open_(lo: int, hi: int) -> Interval:
    return Interval(lo, hi, False, False)

def left_closed(lo: int, hi: int) -> Interval:
    """[lo, hi) -- the shape the compiler's window machinery is stated for."""
    return Interval(lo, hi, True, False)

def left_open(lo: int, hi: int) -> Interval:
    return Interval(lo, hi, False, True)

def unbounded(lo: int, lo_closed: bool = True) -> Interval:
    return Interval(lo, None, lo_closed, False)


#: [0, inf) -- the trivial constraint carried by an untimed until.
FULL = unbounded(0)


def is_full(iv: Interval) -> bool:
    return iv == FULL
