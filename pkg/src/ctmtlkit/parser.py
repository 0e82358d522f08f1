"""Parser for the published formula grammar and the trace file format.

Grammar (whitespace insignificant, UTF-8):

    formula := "true" | "false" | IDENT | "!" formula | "(" formula ")"
             | formula ("&"|"|"|"->") formula
             | formula "U" interval [threshold] formula
             | ("F"|"G"|"X"|"Fw"|"Gw") [interval] "(" formula ")"
             | formula "Uw" interval formula
             | "C" interval CMP NAT "(" formula ")"
    interval  := ("("|"[") BOUND "," BOUND (")"|"]")   BOUND := NAT | "inf"
    threshold := "{" texpr "}"
    texpr     := "#" "(" formula ")" CMP NAT | texpr ("&&"|"||") texpr | "!" texpr
    CMP       := ">=" | ">" | "=" | "<=" | "<"

Precedence: ! > U > & > | > ->; U binds right-associatively.
`a -> b` parses to `!a | b`; unary operators accept an unparenthesized
atom (`F a`) as a convenience, and `Uw(I)(a, b)` is accepted prefix-style.

Traces are one point per line, ``TIME ":" IDENT ("," IDENT)*`` with TIME a
decimal literal or ``p/q``, parsed exactly; ``#`` starts a comment.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .formulas import (
    COMPARISONS, And, Count, Eventually, FalseF, Formula, Next, Not, Or, Prop,
    TAnd, TNot, TOr, ThresholdAtom, ThresholdExpr, TrueF, Until, WeakAlways,
    WeakEventually, WeakUntil, Always,
)
from .intervals import Interval
from .words import TimedWord


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<arrow>->)
  | (?P<cmp>>=|<=|>|<|=)
  | (?P<dand>&&)
  | (?P<dor>\|\|)
  | (?P<nat>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>[!&|(){}\[\],#])
""", re.VERBOSE)

_UNARY = {"F": Eventually, "G": Always, "X": Next,
          "Fw": WeakEventually, "Gw": WeakAlways}
_KEYWORDS = {"true", "false", "U", "Uw", "C"} | set(_UNARY)


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind: str, text: str, line: int, col: int):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup or ""
        chunk = m.group()
        if kind != "ws":
            if kind == "ident" and chunk in _KEYWORDS:
                kind = chunk
            tokens.append(_Token(kind, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self, k: int = 0) -> _Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def next(self) -> _Token:
        t = self.tokens[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def error(self, message: str) -> ParseError:
        t = self.peek()
        return ParseError(message, t.line, t.col)

    def expect(self, kind: str, what: str | None = None) -> _Token:
        t = self.peek()
        if t.kind != kind:
            raise self.error(f"expected {what or kind}, found {t.text!r}")
        return self.next()

    # -- intervals ---------------------------------------------------------

    def at_interval(self) -> bool:
        t = self.peek()
        if t.kind != "sym" or t.text not in "([":
            return False
        nxt = self.peek(1)
        return nxt.kind == "nat" or (nxt.kind == "ident" and nxt.text == "inf")

    def interval(self) -> Interval:
        opener = self.expect("sym", "interval")
        if opener.text not in "([":
            raise self.error("expected interval bracket")
        lo_closed = opener.text == "["
        lo = self.bound()
        if lo is None:
            raise self.error("left endpoint cannot be inf")
        comma = self.expect("sym", "','")
        if comma.text != ",":
            raise ParseError("expected ',' in interval", comma.line, comma.col)
        hi = self.bound()
        closer = self.expect("sym", "interval bracket")
        if closer.text not in ")]":
            raise ParseError("expected closing interval bracket",
                             closer.line, closer.col)
        hi_closed = closer.text == "]"
        try:
            return Interval(lo, hi, lo_closed, hi_closed)
        except ValueError as exc:
            raise ParseError(f"malformed interval: {exc}",
                             opener.line, opener.col) from exc

    def bound(self) -> int | None:
        t = self.peek()
        if t.kind == "nat":
            self.next()
            return int(t.text)
        if t.kind == "ident" and t.text == "inf":
            self.next()
            return None
        raise self.error("expected interval endpoint")

    # -- thresholds --------------------------------------------------------

    def threshold(self) -> ThresholdExpr:
        self.expect("sym", "'{'")
        t = self.texpr_or()
        closer = self.expect("sym", "'}'")
        if closer.text != "}":
            raise ParseError("expected '}'", closer.line, closer.col)
        return t

    def texpr_or(self) -> ThresholdExpr:
        t = self.texpr_and()
        while self.peek().kind == "dor":
            self.next()
            t = TOr(t, self.texpr_and())
        return t

    def texpr_and(self) -> ThresholdExpr:
        t = self.texpr_unary()
        while self.peek().kind == "dand":
            self.next()
            t = TAnd(t, self.texpr_unary())
        return t

    def texpr_unary(self) -> ThresholdExpr:
        t = self.peek()
        if t.kind == "sym" and t.text == "!":
            self.next()
            return TNot(self.texpr_unary())
        if t.kind == "sym" and t.text == "(":
            self.next()
            inner = self.texpr_or()
            closer = self.expect("sym", "')'")
            if closer.text != ")":
                raise ParseError("expected ')'", closer.line, closer.col)
            return inner
        if t.kind == "sym" and t.text == "#":
            self.next()
            opener = self.expect("sym", "'('")
            if opener.text != "(":
                raise ParseError("expected '(' after '#'", opener.line, opener.col)
            counted = self.formula_arrow()
            closer = self.expect("sym", "')'")
            if closer.text != ")":
                raise ParseError("expected ')'", closer.line, closer.col)
            cmp = self.expect("cmp", "comparison").text
            if cmp not in COMPARISONS:
                raise self.error(f"unknown comparison operator {cmp!r}")
            bound = self.expect("nat", "count bound")
            return ThresholdAtom(counted, cmp, int(bound.text))
        raise self.error("expected threshold atom")

    # -- formulas ----------------------------------------------------------

    def formula_arrow(self) -> Formula:
        left = self.formula_or()
        if self.peek().kind == "arrow":
            self.next()
            right = self.formula_arrow()
            return Or(Not(left), right)
        return left

    def formula_or(self) -> Formula:
        f = self.formula_and()
        while self.peek().kind == "sym" and self.peek().text == "|":
            self.next()
            f = Or(f, self.formula_and())
        return f

    def formula_and(self) -> Formula:
        f = self.formula_until()
        while self.peek().kind == "sym" and self.peek().text == "&":
            self.next()
            f = And(f, self.formula_until())
        return f

    def formula_until(self) -> Formula:
        left = self.formula_unary()
        t = self.peek()
        if t.kind == "U":
            self.next()
            interval = self.interval()
            threshold = None
            if self.peek().kind == "sym" and self.peek().text == "{":
                threshold = self.threshold()
            right = self.formula_until()
            return Until(left, interval, right, threshold)
        if t.kind == "Uw":
            self.next()
            interval = self.interval()
            right = self.formula_until()
            return WeakUntil(left, interval, right)
        return left

    def formula_unary(self) -> Formula:
        t = self.peek()
        if t.kind == "sym" and t.text == "!":
            self.next()
            return Not(self.formula_unary())
        if t.kind == "sym" and t.text == "(":
            self.next()
            inner = self.formula_arrow()
            closer = self.expect("sym", "')'")
            if closer.text != ")":
                raise ParseError("expected ')'", closer.line, closer.col)
            return inner
        if t.kind == "true":
            self.next()
            return TrueF()
        if t.kind == "false":
            self.next()
            return FalseF()
        if t.kind in _UNARY:
            self.next()
            interval = self.interval() if self.at_interval() else \
                Interval(0, None, True, False)
            arg = self.formula_unary()
            return _UNARY[t.kind](interval, arg)
        if t.kind == "Uw":
            # prefix form Uw[I](a, b)
            self.next()
            interval = self.interval()
            opener = self.expect("sym", "'('")
            if opener.text != "(":
                raise ParseError("expected '('", opener.line, opener.col)
            left = self.formula_arrow()
            comma = self.expect("sym", "','")
            if comma.text != ",":
                raise ParseError("expected ','", comma.line, comma.col)
            right = self.formula_arrow()
            closer = self.expect("sym", "')'")
            if closer.text != ")":
                raise ParseError("expected ')'", closer.line, closer.col)
            return WeakUntil(left, interval, right)
        if t.kind == "C":
            self.next()
            interval = self.interval()
            cmp = self.expect("cmp", "comparison").text
            bound = int(self.expect("nat", "count bound").text)
            opener = self.expect("sym", "'('")
            if opener.text != "(":
                raise ParseError("expected '('", opener.line, opener.col)
            body = self.formula_arrow()
            closer = self.expect("sym", "')'")
            if closer.text != ")":
                raise ParseError("expected ')'", closer.line, closer.col)
            return Count(cmp, bound, interval, body)
        if t.kind == "ident":
            self.next()
            return Prop(t.text)
        raise self.error(f"expected a formula, found {t.text!r}")


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula_arrow()
    t = p.peek()
    if t.kind != "eof":
        raise ParseError(f"trailing input {t.text!r}", t.line, t.col)
    return f


# ---------------------------------------------------------------------------
# Trace files
# ---------------------------------------------------------------------------

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


def parse_time(text: str) -> Fraction:
    """Exact rational from a decimal literal or p/q."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad timestamp {text!r}: {exc}") from exc


def render_time(t: Fraction) -> str:
    if t.denominator == 1:
        return str(t.numerator)
    return f"{t.numerator}/{t.denominator}"


def parse_trace(text: str) -> TimedWord:
    points: list[tuple[frozenset[str], Fraction]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ParseError("expected 'TIME: events'", lineno, 1)
        time_part, events_part = line.split(":", 1)
        try:
            t = parse_time(time_part.strip())
        except ValueError as exc:
            raise ParseError(str(exc), lineno, 1) from exc
        names = [e.strip() for e in events_part.split(",")]
        if any(not _IDENT_RE.match(n) for n in names):
            raise ParseError(f"bad event list {events_part.strip()!r}", lineno, 1)
        points.append((frozenset(names), t))
    return TimedWord(tuple(points))


def render_trace(word: TimedWord) -> str:
    lines = []
    for events, t in word.points:
        lines.append(f"{render_time(t)}: {','.join(sorted(events))}")
    return "\n".join(lines) + "\n"
