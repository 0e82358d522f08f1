"""Formula AST for metric temporal logic with counting, plus the rewriting
passes the rest of the pipeline consumes: comparison desugaring, threshold
normalization and fragment classification.

Two counting constructs exist on top of plain MTL:

* ``Count(cmp, bound, interval, body)`` -- how often ``body`` holds inside a
  time window anchored at the current point.
* ``Until(..., threshold, ...)`` -- an until whose witness additionally
  constrains how often formulas hold strictly between the current point and
  the witness.  ``threshold`` is a boolean combination over ``ThresholdAtom``
  leaves; ``None`` means the trivial constraint (count of ``true`` >= 0).

All nodes are immutable and hashable, so they can key memo tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .intervals import FULL, Interval, is_full

GE = ">="
GT = ">"
EQ = "="
LE = "<="
LT = "<"
COMPARISONS = (GE, GT, EQ, LE, LT)


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class TrueF(Formula):
    pass


@dataclass(frozen=True)
class FalseF(Formula):
    pass


@dataclass(frozen=True)
class Prop(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class ThresholdAtom:
    """One count constraint ``#(counted) cmp bound`` inside a threshold."""

    counted: Formula
    cmp: str
    bound: int

    def __post_init__(self) -> None:
        if self.cmp not in COMPARISONS:
            raise ValueError(f"bad comparison {self.cmp!r}")
        if self.bound < 0:
            raise ValueError("negative bound")


@dataclass(frozen=True)
class TAnd:
    left: ThresholdExpr
    right: ThresholdExpr


@dataclass(frozen=True)
class TOr:
    left: ThresholdExpr
    right: ThresholdExpr


@dataclass(frozen=True)
class TNot:
    arg: ThresholdExpr


ThresholdExpr = ThresholdAtom | TAnd | TOr | TNot


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    interval: Interval
    right: Formula
    threshold: ThresholdExpr | None = None


@dataclass(frozen=True)
class Count(Formula):
    cmp: str
    bound: int
    interval: Interval
    body: Formula

    def __post_init__(self) -> None:
        if self.cmp not in COMPARISONS:
            raise ValueError(f"bad comparison {self.cmp!r}")
        if self.bound < 0:
            raise ValueError("negative bound")


# Derived operators are kept as sugar so compiler output stays readable;
# `desugar` expands them to the core connectives.

@dataclass(frozen=True)
class Eventually(Formula):
    interval: Interval
    arg: Formula


@dataclass(frozen=True)
class Always(Formula):
    interval: Interval
    arg: Formula


@dataclass(frozen=True)
class Next(Formula):
    interval: Interval
    arg: Formula


@dataclass(frozen=True)
class WeakEventually(Formula):
    interval: Interval
    arg: Formula


@dataclass(frozen=True)
class WeakAlways(Formula):
    interval: Interval
    arg: Formula


@dataclass(frozen=True)
class WeakUntil(Formula):
    left: Formula
    interval: Interval
    right: Formula


TRUE = TrueF()
FALSE = FalseF()


def conj(parts: list[Formula]) -> Formula:
    if not parts:
        return TRUE
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts: list[Formula]) -> Formula:
    if not parts:
        return FALSE
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def implies(a: Formula, b: Formula) -> Formula:
    return Or(Not(a), b)


def iff(a: Formula, b: Formula) -> Formula:
    return And(implies(a, b), implies(b, a))


def weak_always(f: Formula) -> Formula:
    """Untimed box over the current and all later positions."""
    return WeakAlways(FULL, f)


def next_(f: Formula) -> Formula:
    return Next(FULL, f)


def eventually(interval: Interval, f: Formula) -> Formula:
    return Eventually(interval, f)


def until(left: Formula, interval: Interval, right: Formula,
          threshold: ThresholdExpr | None = None) -> Until:
    return Until(left, interval, right, threshold)


# ---------------------------------------------------------------------------
# Traversal helpers
# ---------------------------------------------------------------------------

def threshold_atoms(t: ThresholdExpr) -> list[ThresholdAtom]:
    if isinstance(t, ThresholdAtom):
        return [t]
    if isinstance(t, TNot):
        return threshold_atoms(t.arg)
    return threshold_atoms(t.left) + threshold_atoms(t.right)


def subformula_children(f: Formula) -> list[Formula]:
    if isinstance(f, (TrueF, FalseF, Prop)):
        return []
    if isinstance(f, Not):
        return [f.arg]
    if isinstance(f, (And, Or)):
        return [f.left, f.right]
    if isinstance(f, Until):
        kids = [f.left, f.right]
        if f.threshold is not None:
            kids.extend(a.counted for a in threshold_atoms(f.threshold))
        return kids
    if isinstance(f, Count):
        return [f.body]
    if isinstance(f, (Eventually, Always, Next, WeakEventually, WeakAlways)):
        return [f.arg]
    if isinstance(f, WeakUntil):
        return [f.left, f.right]
    raise TypeError(f"unknown formula node {f!r}")


def propositions(f: Formula) -> frozenset[str]:
    out: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Prop):
            out.add(g.name)
        stack.extend(subformula_children(g))
    return frozenset(out)


def collect_intervals(f: Formula) -> frozenset[Interval]:
    out: set[Interval] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, (Until, Count, Eventually, Always, Next,
                          WeakEventually, WeakAlways, WeakUntil)):
            out.add(g.interval)
        stack.extend(subformula_children(g))
    return frozenset(out)


def max_counting_constant(f: Formula) -> int:
    """Largest bound in any Count modality or threshold atom."""
    best = 0
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Count):
            best = max(best, g.bound)
        if isinstance(g, Until) and g.threshold is not None:
            for a in threshold_atoms(g.threshold):
                best = max(best, a.bound)
        stack.extend(subformula_children(g))
    return best


# ---------------------------------------------------------------------------
# Rendering (the published grammar; parse(render(f)) == f)
# ---------------------------------------------------------------------------

_PREC_OR = 1       # also ->, which renders as | of !
_PREC_AND = 2
_PREC_UNTIL = 3
_PREC_UNARY = 4


def _render_threshold(t: ThresholdExpr, prec: int = 0) -> str:
    if isinstance(t, ThresholdAtom):
        return f"#({render(t.counted)}){t.cmp}{t.bound}"
    if isinstance(t, TNot):
        return f"!{_render_threshold(t.arg, 3)}"
    if isinstance(t, TAnd):
        s = f"{_render_threshold(t.left, 2)} && {_render_threshold(t.right, 2)}"
        return f"({s})" if prec > 1 else s
    s = f"{_render_threshold(t.left, 1)} || {_render_threshold(t.right, 1)}"
    return f"({s})" if prec > 0 else s


def _iv(interval: Interval) -> str:
    return interval.render()


def _render(f: Formula, prec: int) -> str:
    if isinstance(f, TrueF):
        return "true"
    if isinstance(f, FalseF):
        return "false"
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, Not):
        return f"!{_render(f.arg, _PREC_UNARY)}"
    if isinstance(f, And):
        s = f"{_render(f.left, _PREC_AND)} & {_render(f.right, _PREC_AND)}"
        return f"({s})" if prec > _PREC_AND else s
    if isinstance(f, Or):
        s = f"{_render(f.left, _PREC_OR)} | {_render(f.right, _PREC_OR)}"
        return f"({s})" if prec > _PREC_OR else s
    if isinstance(f, (Until, WeakUntil)):
        op = "U" if isinstance(f, Until) else "Uw"
        th = ""
        if isinstance(f, Until) and f.threshold is not None:
            th = "{" + _render_threshold(f.threshold) + "}"
        # right-associative: the left operand needs strictly higher precedence
        s = (f"{_render(f.left, _PREC_UNTIL + 1)} {op}{_iv(f.interval)}{th} "
             f"{_render(f.right, _PREC_UNTIL)}")
        return f"({s})" if prec > _PREC_UNTIL else s
    if isinstance(f, Count):
        return f"C{_iv(f.interval)}{f.cmp}{f.bound}({render(f.body)})"
    if isinstance(f, (Eventually, Always, Next, WeakEventually, WeakAlways)):
        tag = {Eventually: "F", Always: "G", Next: "X",
               WeakEventually: "Fw", WeakAlways: "Gw"}[type(f)]
        iv = "" if is_full(f.interval) else _iv(f.interval)
        return f"{tag}{iv}({render(f.arg)})"
    raise TypeError(f"unknown formula node {f!r}")


def render(f: Formula) -> str:
    return _render(f, 0)


# ---------------------------------------------------------------------------
# Nesting depth
# ---------------------------------------------------------------------------

def depth(f: Formula) -> int:
    """Maximum nesting of counting operators.

    Every timed until contributes at least 1 because its (possibly implicit)
    threshold counts ``true`` at depth 0; see ``counting_depth`` for the
    variant that ignores trivial thresholds.
    """
    return _depth(f, trivial_until_counts=True)


def counting_depth(f: Formula) -> int:
    """Like ``depth`` but plain untils (threshold ``#true >= 0``) add nothing."""
    return _depth(f, trivial_until_counts=False)


def _depth(f: Formula, trivial_until_counts: bool) -> int:
    def go(g: Formula) -> int:
        if isinstance(g, (TrueF, FalseF, Prop)):
            return 0
        if isinstance(g, Not):
            return go(g.arg)
        if isinstance(g, (And, Or)):
            return max(go(g.left), go(g.right))
        if isinstance(g, Until):
            base = max(go(g.left), go(g.right))
            if g.threshold is None:
                return max(base, 1) if trivial_until_counts else base
            th = max(go(a.counted) + 1 for a in threshold_atoms(g.threshold))
            return max(base, th)
        if isinstance(g, Count):
            return go(g.body) + 1
        # sugar measures like its expansion
        return go(expand_sugar_step(g))
    return go(f)


def expand_sugar_step(f: Formula) -> Formula:
    """One-step expansion of a derived operator into core connectives."""
    if isinstance(f, Eventually):
        return Until(TRUE, f.interval, f.arg)
    if isinstance(f, Always):
        return Not(Until(TRUE, f.interval, Not(f.arg)))
    if isinstance(f, Next):
        return Until(FALSE, f.interval, f.arg)
    if isinstance(f, WeakEventually):
        return Or(f.arg, Until(TRUE, f.interval, f.arg))
    if isinstance(f, WeakAlways):
        return And(f.arg, Not(Until(TRUE, f.interval, Not(f.arg))))
    if isinstance(f, WeakUntil):
        strong = Until(f.left, f.interval, f.right)
        if f.interval.contains(0):
            return Or(f.right, And(f.left, strong))
        return And(f.left, strong)
    raise TypeError(f"not a sugar node: {f!r}")


# ---------------------------------------------------------------------------
# Desugaring
# ---------------------------------------------------------------------------

def _desugar_atom(a: ThresholdAtom) -> ThresholdExpr:
    counted = desugar(a.counted)
    if a.cmp == GE:
        return ThresholdAtom(counted, GE, a.bound)
    if a.cmp == LT:
        return ThresholdAtom(counted, LT, a.bound)
    if a.cmp == GT:
        return ThresholdAtom(counted, GE, a.bound + 1)
    if a.cmp == LE:
        return ThresholdAtom(counted, LT, a.bound + 1)
    # '=': >= n and < n+1
    return TAnd(ThresholdAtom(counted, GE, a.bound),
                ThresholdAtom(counted, LT, a.bound + 1))


def _negate_atom(a: ThresholdAtom) -> ThresholdExpr:
    if a.cmp == GE:
        return ThresholdAtom(a.counted, LT, a.bound)
    return ThresholdAtom(a.counted, GE, a.bound)


def _desugar_threshold(t: ThresholdExpr, negate: bool = False) -> ThresholdExpr:
    """Rewrite to {>=, <} atoms with negation pushed into the comparisons."""
    if isinstance(t, ThresholdAtom):
        d = _desugar_atom(t)
        return _desugar_threshold(d, True) if negate else d
    if isinstance(t, TNot):
        return _desugar_threshold(t.arg, not negate)
    if isinstance(t, TAnd):
        l = _desugar_threshold(t.left, negate)
        r = _desugar_threshold(t.right, negate)
        return TOr(l, r) if negate else TAnd(l, r)
    if isinstance(t, TOr):
        l = _desugar_threshold(t.left, negate)
        r = _desugar_threshold(t.right, negate)
        return TAnd(l, r) if negate else TOr(l, r)
    raise TypeError(f"unknown threshold node {t!r}")


def desugar(f: Formula) -> Formula:
    """Expand derived operators and reduce all comparisons to >= (counts)
    and {>=, <} (threshold atoms).  Idempotent."""
    if isinstance(f, (TrueF, FalseF, Prop)):
        return f
    if isinstance(f, Not):
        return Not(desugar(f.arg))
    if isinstance(f, And):
        return And(desugar(f.left), desugar(f.right))
    if isinstance(f, Or):
        return Or(desugar(f.left), desugar(f.right))
    if isinstance(f, Until):
        th = None if f.threshold is None else _desugar_threshold(f.threshold)
        return Until(desugar(f.left), f.interval, desugar(f.right), th)
    if isinstance(f, Count):
        body = desugar(f.body)
        if f.cmp == GE:
            return Count(GE, f.bound, f.interval, body)
        if f.cmp == GT:
            return Count(GE, f.bound + 1, f.interval, body)
        if f.cmp == LT:
            return Not(Count(GE, f.bound, f.interval, body))
        if f.cmp == LE:
            return Not(Count(GE, f.bound + 1, f.interval, body))
        return And(Count(GE, f.bound, f.interval, body),
                   Not(Count(GE, f.bound + 1, f.interval, body)))
    return desugar(expand_sugar_step(f))


def is_desugared(f: Formula) -> bool:
    stack: list[Formula] = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, (Eventually, Always, Next, WeakEventually,
                          WeakAlways, WeakUntil)):
            return False
        if isinstance(g, Count) and g.cmp != GE:
            return False
        if isinstance(g, Until) and g.threshold is not None:
            todo = [g.threshold]
            while todo:
                t = todo.pop()
                if isinstance(t, TNot):
                    return False
                if isinstance(t, ThresholdAtom):
                    if t.cmp not in (GE, LT):
                        return False
                else:
                    todo.extend([t.left, t.right])
        stack.extend(subformula_children(g))
    return True


# ---------------------------------------------------------------------------
# Threshold normalization
# ---------------------------------------------------------------------------
#
# A desugared threshold is an and/or tree over {>=, <} atoms.  Normalization
# puts it in DNF, splits disjuncts into a disjunction of untils, and splits a
# conjunctive clause per the monotonicity lemmas:
#
#   phi U_{I, a1&..&am & b1&..&bp} psi
#     ==  /\_{i,l} phi U_{[0,inf), ai & bl} psi          (mixed pairs)
#         & /\_i phi U_{I, ai} psi  & /\_l phi U_{I, bl} psi
#
# where the a's are >=-atoms and the b's are <-atoms.  Pure clauses split
# completely into atomic untils (farthest/earliest-witness arguments); a
# mixed pair at [0,inf) is a fixpoint of the split and is kept as a
# two-atom threshold.  Anything beyond that is not achievable by an exact
# equivalence (there are pointwise counterexamples), so "at most one atom"
# holds everywhere except these untimed mixed pairs.

_TRIVIAL_TRUE = "true"
_TRIVIAL_FALSE = "false"


def _atom_triviality(a: ThresholdAtom) -> str | None:
    if a.cmp == GE and a.bound == 0:
        return _TRIVIAL_TRUE
    if a.cmp == LT and a.bound == 0:
        return _TRIVIAL_FALSE
    return None


def _dnf(t: ThresholdExpr) -> list[list[ThresholdAtom]] | None:
    """DNF as a list of clauses; None means the whole threshold is `true`.

    An empty list means `false`; clauses drop trivially-true atoms.
    """
    if isinstance(t, ThresholdAtom):
        triv = _atom_triviality(t)
        if triv == _TRIVIAL_TRUE:
            return None
        if triv == _TRIVIAL_FALSE:
            return []
        return [[t]]
    if isinstance(t, TOr):
        l = _dnf(t.left)
        r = _dnf(t.right)
        if l is None or r is None:
            return None
        return l + r
    if isinstance(t, TAnd):
        l = _dnf(t.left)
        r = _dnf(t.right)
        if l is None:
            return r
        if r is None:
            return l
        out = []
        for cl, cr in itertools.product(l, r):
            out.append(cl + cr)
        return out
    raise TypeError(f"threshold not desugared: {t!r}")


def _clause_to_formula(left: Formula, interval: Interval, right: Formula,
                       clause: list[ThresholdAtom]) -> Formula:
    ge = [a for a in clause if a.cmp == GE]
    lt = [a for a in clause if a.cmp == LT]
    if not clause:
        return Until(left, interval, right)
    if len(clause) == 1:
        return Until(left, interval, right, clause[0])
    if not ge or not lt:
        # pure clause: conjunction of atomic untils over the same interval
        return conj([Until(left, interval, right, a) for a in clause])
    parts: list[Formula] = []
    seen: set[Formula] = set()

    def add(p: Formula) -> None:
        if p not in seen:
            seen.add(p)
            parts.append(p)

    for a, b in itertools.product(ge, lt):
        add(Until(left, FULL, right, TAnd(a, b)))
        if not is_full(interval):
            add(Until(left, interval, right, a))
            add(Until(left, interval, right, b))
    return conj(parts)


def normalize_thresholds(f: Formula) -> Formula:
    """Split compound thresholds; input must be desugared.

    Afterwards every until carries no threshold, a single atom, or (only at
    interval [0,inf)) one irreducible pair `#a >= n && #b < k`.
    """
    if isinstance(f, (TrueF, FalseF, Prop)):
        return f
    if isinstance(f, Not):
        return Not(normalize_thresholds(f.arg))
    if isinstance(f, And):
        return And(normalize_thresholds(f.left), normalize_thresholds(f.right))
    if isinstance(f, Or):
        return Or(normalize_thresholds(f.left), normalize_thresholds(f.right))
    if isinstance(f, Count):
        return Count(f.cmp, f.bound, f.interval, normalize_thresholds(f.body))
    if isinstance(f, Until):
        left = normalize_thresholds(f.left)
        right = normalize_thresholds(f.right)
        if f.threshold is None:
            return Until(left, f.interval, right)
        th = _normalize_threshold_inner(f.threshold)
        clauses = _dnf(th)
        if clauses is None:
            return Until(left, f.interval, right)
        if not clauses:
            return FALSE
        return disj([_clause_to_formula(left, f.interval, right, c)
                     for c in clauses])
    raise TypeError(f"normalize_thresholds expects desugared input: {f!r}")


def _normalize_threshold_inner(t: ThresholdExpr) -> ThresholdExpr:
    """Normalize the counted formulas inside atoms (innermost first)."""
    if isinstance(t, ThresholdAtom):
        return ThresholdAtom(normalize_thresholds(t.counted), t.cmp, t.bound)
    if isinstance(t, TAnd):
        return TAnd(_normalize_threshold_inner(t.left),
                    _normalize_threshold_inner(t.right))
    if isinstance(t, TOr):
        return TOr(_normalize_threshold_inner(t.left),
                   _normalize_threshold_inner(t.right))
    raise TypeError(f"threshold not desugared: {t!r}")


def is_normalized(f: Formula) -> bool:
    """Check the post-normalization shape of every until threshold."""
    stack: list[Formula] = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Until) and g.threshold is not None:
            t = g.threshold
            if isinstance(t, TAnd):
                ok = (isinstance(t.left, ThresholdAtom)
                      and isinstance(t.right, ThresholdAtom)
                      and {t.left.cmp, t.right.cmp} == {GE, LT}
                      and is_full(g.interval))
                if not ok:
                    return False
            elif not isinstance(t, ThresholdAtom):
                return False
        stack.extend(subformula_children(g))
    return is_desugared(f)


# ---------------------------------------------------------------------------
# Fragment classification
# ---------------------------------------------------------------------------

FRAGMENTS = ("MITL", "MTL", "C01MTL", "C0MTL", "CMTL", "TMTL", "CTMTL")


def _nontrivial_threshold(t: ThresholdExpr | None) -> bool:
    if t is None:
        return False
    for a in threshold_atoms(t):
        if not (a.cmp == GE and a.bound == 0 and isinstance(a.counted, TrueF)):
            return True
    return False


def classify_fragment(f: Formula) -> str:
    """Least syntactic fragment containing a desugared formula."""
    has_count = False
    count_zero_anchored = True
    count_unit = True
    has_ut = False
    punctual = False
    stack: list[Formula] = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Count):
            has_count = True
            iv = g.interval
            if iv.lo != 0:
                count_zero_anchored = False
                count_unit = False
            elif not (iv.hi == 1):
                count_unit = False
            if iv.punctual:
                punctual = True
        elif isinstance(g, Until):
            if _nontrivial_threshold(g.threshold):
                has_ut = True
            if g.interval.punctual:
                punctual = True
        stack.extend(subformula_children(g))
    if has_count and has_ut:
        return "CTMTL"
    if has_ut:
        return "TMTL"
    if has_count:
        if count_unit:
            return "C01MTL"
        if count_zero_anchored:
            return "C0MTL"
        return "CMTL"
    return "MTL" if punctual else "MITL"


def fragment_index(label: str) -> int:
    """Position in the inclusion order MITL < MTL < C01 < C0 < CMTL/TMTL < CTMTL."""
    order = {"MITL": 0, "MTL": 1, "C01MTL": 2, "C0MTL": 3,
             "CMTL": 4, "TMTL": 4, "CTMTL": 5}
    return order[label]
