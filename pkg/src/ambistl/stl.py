"""Discrete-time STL formulas: syntax tree, canonical form, horizon, robustness.

Formulas are immutable trees built from True, atoms, boolean connectives and
the bounded temporal operators F (eventually), G (always) and U (until).
Atoms are named propositions; when a formula is evaluated on a trajectory,
each atom is grounded through a region map that assigns it a signed margin
at every state.

The canonical text rendering produced by :func:`format_formula` doubles as
the deduplication key for the translation pipeline, so it is deterministic
down to the byte.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterator

if TYPE_CHECKING:  # pragma: no cover - typing only, avoids a runtime cycle
    from .trajectory import RegionMap, Trajectory


class StlError(Exception):
    """Base class for formula-evaluation errors."""


class UnknownAtomError(StlError):
    """An atom in the formula has no region grounding it."""


class EmptyWindowError(StlError):
    """A temporal window lies entirely beyond the end of the trajectory."""


class FormulaSyntaxError(StlError):
    """The canonical text rendering could not be parsed back."""


@dataclass(frozen=True)
class Interval:
    """Discrete time interval [lo, hi] in steps, 0 <= lo <= hi."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if not (isinstance(self.lo, int) and isinstance(self.hi, int)):
            raise ValueError("interval bounds must be integers")
        if self.lo < 0 or self.hi < self.lo:
            raise ValueError(f"invalid interval [{self.lo},{self.hi}]")

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi}]"


class Formula:
    """Base class for STL formula nodes. All nodes are frozen dataclasses."""

    __slots__ = ()

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class TrueF(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class And(Formula):
    children: tuple[Formula, ...]

    def __post_init__(self) -> None:
        if len(self.children) < 2:
            raise ValueError("And requires at least two children")


@dataclass(frozen=True)
class Or(Formula):
    children: tuple[Formula, ...]

    def __post_init__(self) -> None:
        if len(self.children) < 2:
            raise ValueError("Or requires at least two children")


@dataclass(frozen=True)
class F(Formula):
    interval: Interval
    child: Formula


@dataclass(frozen=True)
class G(Formula):
    interval: Interval
    child: Formula


@dataclass(frozen=True)
class Until(Formula):
    interval: Interval
    left: Formula
    right: Formula


def atoms_of(formula: Formula) -> set[str]:
    """Names of all atoms occurring in the formula."""
    found: set[str] = set()

    def walk(f: Formula) -> None:
        if isinstance(f, Atom):
            found.add(f.name)
        elif isinstance(f, Not):
            walk(f.child)
        elif isinstance(f, (And, Or)):
            for c in f.children:
                walk(c)
        elif isinstance(f, (F, G)):
            walk(f.child)
        elif isinstance(f, Until):
            walk(f.left)
            walk(f.right)

    walk(formula)
    return found


def format_formula(formula: Formula) -> str:
    """Deterministic, parse-unambiguous text rendering.

    Grammar: ``true | phi_<name> | !f | (f & f & ...) | (f | f | ...)
    | F[a,b] f | G[a,b] f | U[a,b](f, f)``.  Conjunctions and disjunctions
    are always parenthesised, so every subterm is self-delimiting.
    """
    if isinstance(formula, TrueF):
        return "true"
    if isinstance(formula, Atom):
        return f"phi_{formula.name}"
    if isinstance(formula, Not):
        return "!" + format_formula(formula.child)
    if isinstance(formula, And):
        return "(" + " & ".join(format_formula(c) for c in formula.children) + ")"
    if isinstance(formula, Or):
        return "(" + " | ".join(format_formula(c) for c in formula.children) + ")"
    if isinstance(formula, (F, G)):
        op = "F" if isinstance(formula, F) else "G"
        body = format_formula(formula.child)
        sep = "" if body.startswith("(") else " "
        return f"{op}{formula.interval}{sep}{body}"
    if isinstance(formula, Until):
        left = format_formula(formula.left)
        right = format_formula(formula.right)
        return f"U{formula.interval}({left}, {right})"
    raise TypeError(f"not a formula node: {formula!r}")


def canonicalize(formula: Formula) -> Formula:
    """Rewrite a formula to its canonical normal form.

    The normal form eliminates double negation, flattens nested
    conjunctions into conjunctions and nested disjunctions into
    disjunctions, sorts the children of each connective by their text
    rendering, and drops duplicate siblings.  No rewriting crosses a
    temporal operator, so e.g. an F over a disjunction is left as is.
    Idempotent.
    """
    if isinstance(formula, Not):
        child = canonicalize(formula.child)
        if isinstance(child, Not):
            return child.child
        return Not(child)
    if isinstance(formula, (And, Or)):
        same = type(formula)
        flat: list[Formula] = []
        for item in formula.children:
            c = canonicalize(item)
            if isinstance(c, same):
                flat.extend(c.children)
            else:
                flat.append(c)
        seen: dict[str, Formula] = {}
        for c in flat:
            seen.setdefault(format_formula(c), c)
        ordered = [seen[k] for k in sorted(seen)]
        if len(ordered) == 1:
            return ordered[0]
        return same(tuple(ordered))
    if isinstance(formula, (F, G)):
        return type(formula)(formula.interval, canonicalize(formula.child))
    if isinstance(formula, Until):
        return Until(formula.interval, canonicalize(formula.left), canonicalize(formula.right))
    return formula


def extent(formula: Formula) -> int:
    """Temporal horizon: the farthest step the formula can look ahead."""
    if isinstance(formula, (TrueF, Atom)):
        return 0
    if isinstance(formula, Not):
        return extent(formula.child)
    if isinstance(formula, (And, Or)):
        return max(extent(c) for c in formula.children)
    if isinstance(formula, (F, G)):
        return formula.interval.hi + extent(formula.child)
    if isinstance(formula, Until):
        return formula.interval.hi + max(extent(formula.left), extent(formula.right))
    raise TypeError(f"not a formula node: {formula!r}")


def robustness(formula: Formula, x: "Trajectory", regions: "RegionMap", t: int = 0) -> float:
    """Quantitative satisfaction degree of ``formula`` on trajectory ``x`` at time ``t``.

    Positive means satisfied, negative violated.  Atom robustness is the
    signed box margin of the state; boolean connectives take min and max;
    F and G take max and min over the shifted window, clipped to the end
    of the trajectory; U combines both.  A window whose intersection with
    the trajectory is empty raises :class:`EmptyWindowError`, signalling
    that the trajectory is too short to judge the formula at all.
    """
    horizon = len(x) - 1
    if t < 0 or t > horizon:
        raise EmptyWindowError(f"time index {t} outside trajectory [0,{horizon}]")
    return _rob(formula, x, regions, t, horizon)


def _window(t: int, interval: Interval, horizon: int) -> range:
    lo = t + interval.lo
    hi = min(t + interval.hi, horizon)
    if lo > hi:
        raise EmptyWindowError(
            f"window t+{interval} = [{lo},{t + interval.hi}] has no overlap with [0,{horizon}]"
        )
    return range(lo, hi + 1)


def _rob(f: Formula, x: "Trajectory", regions: "RegionMap", t: int, horizon: int) -> float:
    if isinstance(f, TrueF):
        return math.inf
    if isinstance(f, Atom):
        try:
            return float(regions.margin(f.name, x.point(t)))
        except KeyError:
            raise UnknownAtomError(f"atom '{f.name}' has no region") from None
    if isinstance(f, Not):
        return -_rob(f.child, x, regions, t, horizon)
    if isinstance(f, And):
        return min(_rob(c, x, regions, t, horizon) for c in f.children)
    if isinstance(f, Or):
        return max(_rob(c, x, regions, t, horizon) for c in f.children)
    if isinstance(f, F):
        return max(_rob(f.child, x, regions, t1, horizon) for t1 in _window(t, f.interval, horizon))
    if isinstance(f, G):
        return min(_rob(f.child, x, regions, t1, horizon) for t1 in _window(t, f.interval, horizon))
    if isinstance(f, Until):
        best = -math.inf
        for t1 in _window(t, f.interval, horizon):
            hold = min(_rob(f.left, x, regions, t2, horizon) for t2 in range(t, t1 + 1))
            best = max(best, min(_rob(f.right, x, regions, t1, horizon), hold))
        return best
    raise TypeError(f"not a formula node: {f!r}")


# ---------------------------------------------------------------------------
# Reader for the canonical text rendering (round-trips format_formula).


def parse_formula(text: str) -> Formula:
    """Parse the canonical rendering back into a formula tree."""
    tokens = list(_lex(text))
    formula, pos = _parse(tokens, 0)
    if pos != len(tokens):
        raise FormulaSyntaxError(f"trailing input at token {pos}: {tokens[pos:]}")
    return formula


def _lex(text: str) -> Iterator[str]:
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()[],&|!":
            yield ch
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            yield text[i:j]
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            yield text[i:j]
            i = j
        else:
            raise FormulaSyntaxError(f"unexpected character {ch!r}")


def _expect(tokens: list[str], pos: int, expected: str) -> int:
    if pos >= len(tokens) or tokens[pos] != expected:
        got = tokens[pos] if pos < len(tokens) else "end of input"
        raise FormulaSyntaxError(f"expected {expected!r}, got {got!r}")
    return pos + 1


def _parse_interval(tokens: list[str], pos: int) -> tuple[Interval, int]:
    pos = _expect(tokens, pos, "[")
    lo = int(tokens[pos])
    pos = _expect(tokens, pos + 1, ",")
    hi = int(tokens[pos])
    pos = _expect(tokens, pos + 1, "]")
    return Interval(lo, hi), pos


def _parse(tokens: list[str], pos: int) -> tuple[Formula, int]:
    if pos >= len(tokens):
        raise FormulaSyntaxError("unexpected end of input")
    tok = tokens[pos]
    if tok == "true":
        return TrueF(), pos + 1
    if tok.startswith("phi_"):
        name = tok[len("phi_"):]
        if not name:
            raise FormulaSyntaxError("empty atom name")
        return Atom(name), pos + 1
    if tok == "!":
        child, pos = _parse(tokens, pos + 1)
        return Not(child), pos
    if tok in ("F", "G"):
        interval, pos = _parse_interval(tokens, pos + 1)
        child, pos = _parse(tokens, pos)
        return (F if tok == "F" else G)(interval, child), pos
    if tok == "U":
        interval, pos = _parse_interval(tokens, pos + 1)
        pos = _expect(tokens, pos, "(")
        left, pos = _parse(tokens, pos)
        pos = _expect(tokens, pos, ",")
        right, pos = _parse(tokens, pos)
        pos = _expect(tokens, pos, ")")
        return Until(interval, left, right), pos
    if tok == "(":
        first, pos = _parse(tokens, pos + 1)
        if pos >= len(tokens) or tokens[pos] not in ("&", "|"):
            raise FormulaSyntaxError("expected '&' or '|' inside parentheses")
        op = tokens[pos]
        children = [first]
        while pos < len(tokens) and tokens[pos] == op:
            child, pos = _parse(tokens, pos + 1)
            children.append(child)
        pos = _expect(tokens, pos, ")")
        node = And if op == "&" else Or
        return node(tuple(children)), pos
    raise FormulaSyntaxError(f"unexpected token {tok!r}")
