"""MELL formulas in negation-normal form.

Grammar (s-expressions): atom ``X``; dual atom ``(~ X)``; ``(tens A B)``;
``(par A B)``; ``(! A)``; ``(? A)``; ``1``; ``bot``.  Negation appears only
on variables; general negation is the defined operation :func:`dual`.
"""

from __future__ import annotations

from dataclasses import dataclass

from pllk import sexpr
from pllk.sexpr import SexprError


class Formula:
    """Base class; all formula values are immutable and hashable."""

    __slots__ = ()

    def __repr__(self):
        return print_formula(self)


@dataclass(frozen=True, slots=True, repr=False)
class Var(Formula):
    name: str


@dataclass(frozen=True, slots=True, repr=False)
class DualVar(Formula):
    name: str


@dataclass(frozen=True, slots=True, repr=False)
class Tensor(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True, repr=False)
class Par(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True, repr=False)
class OfCourse(Formula):
    body: Formula


@dataclass(frozen=True, slots=True, repr=False)
class WhyNot(Formula):
    body: Formula


@dataclass(frozen=True, slots=True, repr=False)
class _One(Formula):
    pass


@dataclass(frozen=True, slots=True, repr=False)
class _Bot(Formula):
    pass


ONE = _One()
BOT = _Bot()


def dual(f: Formula) -> Formula:
    """Involutive linear negation, computed by De Morgan duality."""
    if isinstance(f, Var):
        return DualVar(f.name)
    if isinstance(f, DualVar):
        return Var(f.name)
    if isinstance(f, Tensor):
        return Par(dual(f.left), dual(f.right))
    if isinstance(f, Par):
        return Tensor(dual(f.left), dual(f.right))
    if isinstance(f, OfCourse):
        return WhyNot(dual(f.body))
    if isinstance(f, WhyNot):
        return OfCourse(dual(f.body))
    if f is ONE or isinstance(f, _One):
        return BOT
    if f is BOT or isinstance(f, _Bot):
        return ONE
    raise TypeError(f"not a formula: {f!r}")


def lollipop(a: Formula, b: Formula) -> Formula:
    """Linear implication: A -o B is notation for dual(A) par B."""
    return Par(dual(a), b)


def is_why_not(f):
    return isinstance(f, WhyNot)


def is_of_course(f):
    return isinstance(f, OfCourse)


def print_formula(f: Formula) -> str:
    return sexpr.write(_to_sexpr(f))


def _to_sexpr(f):
    if isinstance(f, Var):
        return f.name
    if isinstance(f, DualVar):
        return ["~", f.name]
    if isinstance(f, Tensor):
        return ["tens", _to_sexpr(f.left), _to_sexpr(f.right)]
    if isinstance(f, Par):
        return ["par", _to_sexpr(f.left), _to_sexpr(f.right)]
    if isinstance(f, OfCourse):
        return ["!", _to_sexpr(f.body)]
    if isinstance(f, WhyNot):
        return ["?", _to_sexpr(f.body)]
    if isinstance(f, _One):
        return "1"
    if isinstance(f, _Bot):
        return "bot"
    raise TypeError(f"not a formula: {f!r}")


_RESERVED = {"1", "bot", "~", "tens", "par", "!", "?", "seq"}


def formula_from_sexpr(form, offset=0):
    """Decode one parsed s-expression form into a Formula."""
    if isinstance(form, str):
        if form == "1":
            return ONE
        if form == "bot":
            return BOT
        if form in _RESERVED:
            raise SexprError(f"reserved word {form!r} is not a formula", offset)
        return Var(form)
    if not form:
        raise SexprError("empty form is not a formula", offset)
    head = form[0]
    if head == "~":
        if len(form) != 2 or not isinstance(form[1], str) or form[1] in _RESERVED:
            raise SexprError("(~ X) takes one variable name", offset)
        return DualVar(form[1])
    if head in ("tens", "par"):
        if len(form) != 3:
            raise SexprError(f"({head} A B) takes two formulas", offset)
        cls = Tensor if head == "tens" else Par
        return cls(formula_from_sexpr(form[1], offset), formula_from_sexpr(form[2], offset))
    if head in ("!", "?"):
        if len(form) != 2:
            raise SexprError(f"({head} A) takes one formula", offset)
        cls = OfCourse if head == "!" else WhyNot
        return cls(formula_from_sexpr(form[1], offset))
    raise SexprError(f"unknown formula constructor {head!r}", offset)


def parse_formula(text: str) -> Formula:
    """Parse the formula grammar; raises SexprError with a byte offset."""
    return formula_from_sexpr(sexpr.parse_one(text))
