"""Pointwise satisfaction of the full counting logic, including compound
thresholds.  This module is the semantic oracle the rest of the toolkit is
checked against, so it follows the definitions directly: until is strict in
the witness and in the intermediate range, counting modalities enumerate
positions, and threshold expressions are evaluated per candidate witness.

An :class:`EvalTable` memoizes, per subformula, the set of positions where
it holds; counts are answered from prefix sums over those sets.
"""

from __future__ import annotations

from .formulas import (
    And, Count, FalseF, Formula, Not, Or, Prop, TAnd, TNot,
    ThresholdAtom, ThresholdExpr, TrueF, Until, expand_sugar_step,
)
from .words import TimedWord


class EvalTable:
    """Bottom-up memoized evaluation over one timed word."""

    def __init__(self, word: TimedWord):
        self.word = word
        self._positions: dict[Formula, frozenset[int]] = {}
        self._prefix: dict[Formula, list[int]] = {}

    def positions(self, f: Formula) -> frozenset[int]:
        cached = self._positions.get(f)
        if cached is None:
            cached = self._compute(f)
            self._positions[f] = cached
        return cached

    def holds(self, f: Formula, i: int) -> bool:
        if not 0 <= i < len(self.word):
            raise IndexError(f"position {i} out of range")
        return i in self.positions(f)

    def _prefix_counts(self, f: Formula) -> list[int]:
        """prefix[k] = |{p < k : f holds at p}|, so counts over (i, j) are
        prefix[j] - prefix[i + 1]."""
        cached = self._prefix.get(f)
        if cached is None:
            pos = self.positions(f)
            n = len(self.word)
            cached = [0] * (n + 1)
            for k in range(n):
                cached[k + 1] = cached[k] + (1 if k in pos else 0)
            self._prefix[f] = cached
        return cached

    def count_strictly_between(self, f: Formula, i: int, j: int) -> int:
        prefix = self._prefix_counts(f)
        if j <= i + 1:
            return 0
        return prefix[j] - prefix[i + 1]

    def _threshold_ok(self, t: ThresholdExpr, i: int, j: int) -> bool:
        if isinstance(t, ThresholdAtom):
            c = self.count_strictly_between(t.counted, i, j)
            if t.cmp == ">=":
                return c >= t.bound
            if t.cmp == ">":
                return c > t.bound
            if t.cmp == "=":
                return c == t.bound
            if t.cmp == "<=":
                return c <= t.bound
            return c < t.bound
        if isinstance(t, TNot):
            return not self._threshold_ok(t.arg, i, j)
        if isinstance(t, TAnd):
            return (self._threshold_ok(t.left, i, j)
                    and self._threshold_ok(t.right, i, j))
        return (self._threshold_ok(t.left, i, j)
                or self._threshold_ok(t.right, i, j))

    def _compute(self, f: Formula) -> frozenset[int]:
        w = self.word
        n = len(w)
        if isinstance(f, TrueF):
            return frozenset(range(n))
        if isinstance(f, FalseF):
            return frozenset()
        if isinstance(f, Prop):
            return frozenset(i for i in range(n) if f.name in w.events(i))
        if isinstance(f, Not):
            return frozenset(range(n)) - self.positions(f.arg)
        if isinstance(f, And):
            return self.positions(f.left) & self.positions(f.right)
        if isinstance(f, Or):
            return self.positions(f.left) | self.positions(f.right)
        if isinstance(f, Count):
            body = self.positions(f.body)
            out = set()
            for i in range(n):
                anchor = w.time(i)
                c = sum(1 for k in body if f.interval.contains(w.time(k) - anchor))
                ok = {"<": c < f.bound, "<=": c <= f.bound, "=": c == f.bound,
                      ">": c > f.bound, ">=": c >= f.bound}[f.cmp]
                if ok:
                    out.add(i)
            return frozenset(out)
        if isinstance(f, Until):
            left = self.positions(f.left)
            right = self.positions(f.right)
            # touch the atom caches so prefix sums exist once
            if f.threshold is not None:
                for a in _atoms(f.threshold):
                    self._prefix_counts(a.counted)
            out = set()
            for i in range(n):
                anchor = w.time(i)
                for j in range(i + 1, n):
                    if j - 1 > i and (j - 1) not in left:
                        break  # left fails at j-1, so no later witness either
                    if j not in right:
                        continue
                    if not f.interval.contains(w.time(j) - anchor):
                        continue
                    if f.threshold is not None and \
                            not self._threshold_ok(f.threshold, i, j):
                        continue
                    out.add(i)
                    break
            return frozenset(out)
        # sugar: evaluate through the one-step expansion
        return self.positions(expand_sugar_step(f))


def _atoms(t: ThresholdExpr) -> list[ThresholdAtom]:
    if isinstance(t, ThresholdAtom):
        return [t]
    if isinstance(t, TNot):
        return _atoms(t.arg)
    return _atoms(t.left) + _atoms(t.right)


def eval_at(w: TimedWord, i: int, f: Formula, table: EvalTable | None = None) -> bool:
    table = table if table is not None else EvalTable(w)
    return table.holds(f, i)


def eval_word(w: TimedWord, f: Formula, table: EvalTable | None = None) -> bool:
    """A word satisfies a formula iff the formula holds at its first point."""
    return eval_at(w, 0, f, table)


def distinguishes(f: Formula, w1: TimedWord, w2: TimedWord) -> bool:
    return eval_word(w1, f) != eval_word(w2, f)


def naive_eval_at(w: TimedWord, i: int, f: Formula) -> bool:
    """Reference recursion with no memoization; used to cross-check the table."""
    if isinstance(f, TrueF):
        return True
    if isinstance(f, FalseF):
        return False
    if isinstance(f, Prop):
        return f.name in w.events(i)
    if isinstance(f, Not):
        return not naive_eval_at(w, i, f.arg)
    if isinstance(f, And):
        return naive_eval_at(w, i, f.left) and naive_eval_at(w, i, f.right)
    if isinstance(f, Or):
        return naive_eval_at(w, i, f.left) or naive_eval_at(w, i, f.right)
    if isinstance(f, Count):
        anchor = w.time(i)
        c = sum(1 for k in range(len(w))
                if f.interval.contains(w.time(k) - anchor)
                and naive_eval_at(w, k, f.body))
        return {"<": c < f.bound, "<=": c <= f.bound, "=": c == f.bound,
                ">": c > f.bound, ">=": c >= f.bound}[f.cmp]
    if isinstance(f, Until):
        anchor = w.time(i)
        for j in range(i + 1, len(w)):
            if (naive_eval_at(w, j, f.right)
                    and f.interval.contains(w.time(j) - anchor)
                    and all(naive_eval_at(w, k, f.left) for k in range(i + 1, j))
                    and (f.threshold is None
                         or _naive_threshold(w, i, j, f.threshold))):
                return True
        return False
    return naive_eval_at(w, i, expand_sugar_step(f))


def _naive_threshold(w: TimedWord, i: int, j: int, t: ThresholdExpr) -> bool:
    if isinstance(t, ThresholdAtom):
        c = sum(1 for k in range(i + 1, j) if naive_eval_at(w, k, t.counted))
        return {"<": c < t.bound, "<=": c <= t.bound, "=": c == t.bound,
                ">": c > t.bound, ">=": c >= t.bound}[t.cmp]
    if isinstance(t, TNot):
        return not _naive_threshold(w, i, j, t.arg)
    if isinstance(t, TAnd):
        return _naive_threshold(w, i, j, t.left) and _naive_threshold(w, i, j, t.right)
    return _naive_threshold(w, i, j, t.left) or _naive_threshold(w, i, j, t.right)
