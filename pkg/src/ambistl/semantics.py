"""Meaning terms and their reduction.

The intermediate meaning language is an untyped lambda calculus over a
small set of first-order constructors: atoms, integer and interval
literals, the temporal constructors F and G, the boolean constructors
NOT/AND/OR, symbolic sequencing SEQ, and EXTG, the guard whose interval is
anchored to the temporal extent of its sibling (resolved during conversion
to STL).  Lexical templates are closed terms in this language; composition
applies them along a derivation and beta-reduces the result.

Constructors are opaque to reduction: an application whose head is a
constructor is stuck and survives into the normal form, where the
conversion step either resolves it (a sentence-level time bound over a
disjunction) or rejects the meaning as ill-formed.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from itertools import count
from typing import Iterator

REDUCTION_BUDGET = 10_000


class TermError(Exception):
    """Base class for meaning-term errors."""


class ReductionBudgetError(TermError):
    """Reduction did not reach a normal form within the step budget."""


class TemplateSyntaxError(TermError):
    """The template expression could not be parsed."""


class Term:
    """Base class for meaning-term nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        return format_term(self)


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Lam(Term):
    var: str
    body: Term


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True)
class AtomC(Term):
    name: str


@dataclass(frozen=True)
class IntC(Term):
    value: int


@dataclass(frozen=True)
class IntervalC(Term):
    lo: Term
    hi: Term


@dataclass(frozen=True)
class FC(Term):
    interval: Term
    body: Term


@dataclass(frozen=True)
class GC(Term):
    interval: Term
    body: Term


@dataclass(frozen=True)
class NotC(Term):
    body: Term


@dataclass(frozen=True)
class AndC(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class OrC(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class SeqC(Term):
    first: Term
    second: Term


@dataclass(frozen=True)
class ExtG(Term):
    guard: Term
    anchor: Term


_CONSTRUCTORS: dict[str, tuple[type, int]] = {
    "F": (FC, 2),
    "G": (GC, 2),
    "NOT": (NotC, 1),
    "AND": (AndC, 2),
    "OR": (OrC, 2),
    "SEQ": (SeqC, 2),
    "I": (IntervalC, 2),
    "EXTG": (ExtG, 2),
}
_CONSTRUCTOR_NAMES = {cls: name for name, (cls, _) in _CONSTRUCTORS.items()}


def _term_fields(t: Term) -> list[tuple[str, object]]:
    return [(f.name, getattr(t, f.name)) for f in dataclasses.fields(t)]


def _children(t: Term) -> list[Term]:
    return [v for _, v in _term_fields(t) if isinstance(v, Term)]


def _rebuild(t: Term, new_children: list[Term]) -> Term:
    it = iter(new_children)
    values = [next(it) if isinstance(v, Term) else v for _, v in _term_fields(t)]
    return type(t)(*values)


def free_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Lam):
        return free_vars(t.body) - {t.var}
    vs: set[str] = set()
    for c in _children(t):
        vs |= free_vars(c)
    return vs


_fresh_counter = count()


def _fresh(base: str, avoid: set[str]) -> str:
    while True:
        name = f"{base}_{next(_fresh_counter)}"
        if name not in avoid:
            return name


def substitute(t: Term, var: str, repl: Term) -> Term:
    """Capture-avoiding substitution of ``repl`` for ``var`` in ``t``."""
    if isinstance(t, Var):
        return repl if t.name == var else t
    if isinstance(t, Lam):
        if t.var == var:
            return t
        if t.var in free_vars(repl):
            fresh = _fresh(t.var, free_vars(t.body) | free_vars(repl) | {var})
            renamed = substitute(t.body, t.var, Var(fresh))
            return Lam(fresh, substitute(renamed, var, repl))
        return Lam(t.var, substitute(t.body, var, repl))
    kids = _children(t)
    if not kids:
        return t
    return _rebuild(t, [substitute(c, var, repl) for c in kids])


def _step_normal(t: Term) -> Term | None:
    """One leftmost-outermost beta step, or None when t is normal."""
    if isinstance(t, App):
        if isinstance(t.fn, Lam):
            return substitute(t.fn.body, t.fn.var, t.arg)
        fn = _step_normal(t.fn)
        if fn is not None:
            return App(fn, t.arg)
        arg = _step_normal(t.arg)
        if arg is not None:
            return App(t.fn, arg)
        return None
    if isinstance(t, Lam):
        body = _step_normal(t.body)
        return Lam(t.var, body) if body is not None else None
    kids = _children(t)
    for i, c in enumerate(kids):
        stepped = _step_normal(c)
        if stepped is not None:
            kids[i] = stepped
            return _rebuild(t, kids)
    return None


def _step_applicative(t: Term) -> Term | None:
    """One innermost-leftmost beta step, or None when t is normal."""
    if isinstance(t, App):
        fn = _step_applicative(t.fn)
        if fn is not None:
            return App(fn, t.arg)
        arg = _step_applicative(t.arg)
        if arg is not None:
            return App(t.fn, arg)
        if isinstance(t.fn, Lam):
            return substitute(t.fn.body, t.fn.var, t.arg)
        return None
    if isinstance(t, Lam):
        body = _step_applicative(t.body)
        return Lam(t.var, body) if body is not None else None
    kids = _children(t)
    for i, c in enumerate(kids):
        stepped = _step_applicative(c)
        if stepped is not None:
            kids[i] = stepped
            return _rebuild(t, kids)
    return None


def beta_reduce(term: Term, order: str = "normal", budget: int = REDUCTION_BUDGET) -> Term:
    """Reduce ``term`` to beta-normal form.

    ``order`` selects the reduction strategy ("normal" or "applicative");
    the templates shipped with the package are non-self-applicative, so
    both orders terminate and agree.  Exceeding the step budget raises
    :class:`ReductionBudgetError`, the signal for an ill-typed template.
    """
    step = {"normal": _step_normal, "applicative": _step_applicative}[order]
    current = term
    for _ in range(budget):
        reduced = step(current)
        if reduced is None:
            return current
        current = reduced
    raise ReductionBudgetError(f"no normal form within {budget} steps (ill-typed template?)")


def alpha_equal(a: Term, b: Term) -> bool:
    """Structural equality modulo renaming of bound variables."""

    def go(x: Term, y: Term, env_x: dict[str, int], env_y: dict[str, int], depth: int) -> bool:
        if isinstance(x, Var) and isinstance(y, Var):
            bx, by = env_x.get(x.name), env_y.get(y.name)
            if bx is None and by is None:
                return x.name == y.name
            return bx == by
        if isinstance(x, Lam) and isinstance(y, Lam):
            return go(
                x.body, y.body, {**env_x, x.var: depth}, {**env_y, y.var: depth}, depth + 1
            )
        if type(x) is not type(y):
            return False
        fx, fy = _term_fields(x), _term_fields(y)
        for (_, vx), (_, vy) in zip(fx, fy):
            if isinstance(vx, Term):
                if not go(vx, vy, env_x, env_y, depth):
                    return False
            elif vx != vy:
                return False
        return True

    return go(a, b, {}, {}, 0)


# ---------------------------------------------------------------------------
# Template expression mini-language.


def format_term(t: Term) -> str:
    """Render a term in the template mini-language."""
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Lam):
        return f"lam {t.var}. {format_term(t.body)}"
    if isinstance(t, App):
        head = t
        args: list[Term] = []
        while isinstance(head, App):
            args.append(head.arg)
            head = head.fn
        args.reverse()
        head_text = format_term(head)
        if isinstance(head, Lam):
            head_text = f"({head_text})"
        return f"{head_text}({', '.join(format_term(a) for a in args)})"
    if isinstance(t, AtomC):
        return f"phi_{t.name}"
    if isinstance(t, IntC):
        return str(t.value)
    name = _CONSTRUCTOR_NAMES.get(type(t))
    if name is not None:
        kids = _children(t)
        return f"{name}({', '.join(format_term(c) for c in kids)})"
    raise TypeError(f"not a term node: {t!r}")


def _lex_template(text: str) -> Iterator[str]:
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "().,":
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
            raise TemplateSyntaxError(f"unexpected character {ch!r} in template")


def parse_term(text: str) -> Term:
    """Parse a template expression: ``lam v. body``, application ``f(a, b)``,
    constructors ``F G NOT AND OR SEQ I EXTG``, atoms ``phi_<name>``, integers,
    and variables."""
    tokens = list(_lex_template(text))
    term, pos = _parse_term(tokens, 0)
    if pos != len(tokens):
        raise TemplateSyntaxError(f"trailing input: {' '.join(tokens[pos:])!r}")
    return term


def _parse_term(tokens: list[str], pos: int) -> tuple[Term, int]:
    if pos >= len(tokens):
        raise TemplateSyntaxError("unexpected end of template")
    if tokens[pos] == "lam":
        if pos + 2 >= len(tokens) or tokens[pos + 2] != ".":
            raise TemplateSyntaxError("expected 'lam <var>. <body>'")
        var = tokens[pos + 1]
        if not var.isidentifier() or var == "lam":
            raise TemplateSyntaxError(f"bad variable name {var!r}")
        body, pos = _parse_term(tokens, pos + 3)
        return Lam(var, body), pos
    return _parse_app(tokens, pos)


def _parse_app(tokens: list[str], pos: int) -> tuple[Term, int]:
    term, pos = _parse_atom(tokens, pos)
    while pos < len(tokens) and tokens[pos] == "(":
        args, pos = _parse_args(tokens, pos)
        for arg in args:
            term = App(term, arg)
    return term, pos


def _parse_args(tokens: list[str], pos: int) -> tuple[list[Term], int]:
    assert tokens[pos] == "("
    pos += 1
    args: list[Term] = []
    while True:
        arg, pos = _parse_term(tokens, pos)
        args.append(arg)
        if pos >= len(tokens):
            raise TemplateSyntaxError("unclosed argument list")
        if tokens[pos] == ",":
            pos += 1
            continue
        if tokens[pos] == ")":
            return args, pos + 1
        raise TemplateSyntaxError(f"expected ',' or ')', got {tokens[pos]!r}")


def _parse_atom(tokens: list[str], pos: int) -> tuple[Term, int]:
    tok = tokens[pos]
    if tok == "(":
        term, pos = _parse_term(tokens, pos + 1)
        if pos >= len(tokens) or tokens[pos] != ")":
            raise TemplateSyntaxError("unclosed parenthesis")
        return term, pos + 1
    if tok.isdigit():
        return IntC(int(tok)), pos + 1
    if tok in _CONSTRUCTORS:
        cls, arity = _CONSTRUCTORS[tok]
        if pos + 1 >= len(tokens) or tokens[pos + 1] != "(":
            raise TemplateSyntaxError(f"constructor {tok} expects {arity} argument(s)")
        args, pos = _parse_args(tokens, pos + 1)
        if len(args) != arity:
            raise TemplateSyntaxError(
                f"constructor {tok} expects {arity} argument(s), got {len(args)}"
            )
        return cls(*args), pos
    if tok.startswith("phi_"):
        name = tok[len("phi_"):]
        if not name:
            raise TemplateSyntaxError("empty atom name")
        return AtomC(name), pos + 1
    if tok.isidentifier():
        return Var(tok), pos + 1
    raise TemplateSyntaxError(f"unexpected token {tok!r}")


# ---------------------------------------------------------------------------
# Composition along a derivation.


def compose(derivation) -> Term:
    """Compose lexical templates along a derivation and beta-reduce.

    Leaves contribute their entry templates; a forward-application node
    applies the left meaning to the right one, a backward-application node
    the right meaning to the left one.  The result is beta-normal but need
    not be convertible to STL yet: stuck applications and leftover
    abstractions are handled (or rejected) by the conversion step.
    """
    from .parser import Derivation, Leaf  # local import to avoid a cycle

    if isinstance(derivation, Derivation):
        derivation = derivation.root

    def raw(node) -> Term:
        if isinstance(node, Leaf):
            return node.entry.template
        left, right = raw(node.left), raw(node.right)
        if node.rule == "fa":
            return App(left, right)
        if node.rule == "ba":
            return App(right, left)
        raise ValueError(f"unknown combinatory rule {node.rule!r}")

    return beta_reduce(raw(derivation))
