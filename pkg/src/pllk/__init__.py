"""Proof kernel for parsimonious linear logic and its non-wellfounded systems.

Subpackages cover formula syntax, sequent proofs (finite open derivations and
finitely-described infinite coderivations), global validity criteria,
cut-elimination, translations, and relational semantics.
"""

from pllk.formula import (
    Formula,
    Var,
    DualVar,
    Tensor,
    Par,
    OfCourse,
    WhyNot,
    ONE,
    BOT,
    dual,
    lollipop,
    parse_formula,
    print_formula,
)

__all__ = [
    "Formula",
    "Var",
    "DualVar",
    "Tensor",
    "Par",
    "OfCourse",
    "WhyNot",
    "ONE",
    "BOT",
    "dual",
    "lollipop",
    "parse_formula",
    "print_formula",
]
