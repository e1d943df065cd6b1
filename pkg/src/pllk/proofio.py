"""Reader and printer for the proof text format.

Every node carries its full conclusion sequent, so parsing never needs
proof search; positions not written in the format (cut/tens occurrence maps,
the insert position of qb/qc, the principal of bot) are inferred leftmost.

Forms::

    (ax F)  (one)  (hyp S)
    (bot S d)  (par S i d)  (qw S i d)  (qb S i d)  (qd S i d)
    (qc S i d)  (qqd S i d)  (ex S i d)
    (tens S i d1 d2)  (cut S F d1 d2)  (cp S d1 d2)  (fp S d)  (bp S d)
    (def name d)  (ref name)
    (nwb S (calls d ...) SEL)   (nup S (calls d ...) SEL)
    (family S name d ...)

with S a parenthesized list of formulas and SEL either
``(sel (prefix i ...) (loop i ...))`` or ``(sel oracle name)``.
"""

from __future__ import annotations

from pllk import proofcore, sexpr
from pllk.formula import dual, formula_from_sexpr, _to_sexpr
from pllk.proofcore import ProofError, delete, insert
from pllk.selector import EventuallyPeriodic, Oracle
from pllk.sexpr import SexprError


def _seq(form):
    if isinstance(form, str):
        raise SexprError(f"expected a sequent, got atom {form!r}", 0)
    return tuple(formula_from_sexpr(f) for f in form)


def _int(form):
    if not isinstance(form, str) or not form.lstrip("-").isdigit():
        raise SexprError(f"expected an integer, got {sexpr.write(form)}", 0)
    return int(form)


def _sel(form):
    if not isinstance(form, list) or not form or form[0] != "sel":
        raise SexprError("expected (sel ...)", 0)
    if len(form) == 3 and form[1] == "oracle":
        return Oracle(form[2])
    if len(form) == 3 and form[1] == "oracle-at":
        raise SexprError("oracle offsets are not written explicitly", 0)
    parts = {p[0]: [_int(x) for x in p[1:]] for p in form[1:]}
    prefix = tuple(parts.get("prefix", ()))
    loop = tuple(parts.get("loop", ()))
    return EventuallyPeriodic(prefix, loop)


def _arity(form, n, what):
    if len(form) != n + 1:
        raise SexprError(f"{what} takes {n} arguments", 0)


def node_from_sexpr(form, env=None):
    env = env or {}
    if isinstance(form, str):
        raise SexprError(f"expected a proof form, got atom {form!r}", 0)
    if not form:
        raise SexprError("empty proof form", 0)
    head = form[0]
    try:
        return _dispatch(head, form, env)
    except ProofError as e:
        raise SexprError(f"in ({head} ...): {e}", 0) from e


def _dispatch(head, form, env):
    if head == "ax":
        _arity(form, 1, "ax")
        return proofcore.ax(formula_from_sexpr(form[1]))
    if head == "one":
        _arity(form, 0, "one")
        return proofcore.one()
    if head == "hyp":
        _arity(form, 1, "hyp")
        return proofcore.hyp(_seq(form[1]))
    if head == "ref":
        _arity(form, 1, "ref")
        name = form[1]
        if name not in env:
            raise SexprError(f"ref to unknown definition {name!r}", 0)
        return proofcore.ref(name, env[name])
    if head == "def":
        _arity(form, 2, "def")
        name = form[1]
        env2 = dict(env)
        env2[name] = peek_concl(form[2], env2)
        return proofcore.defn(name, node_from_sexpr(form[2], env2))
    if head in ("bot", "fp", "bp"):
        _arity(form, 2, head)
        s = _seq(form[1])
        kid = node_from_sexpr(form[2], env)
        if head == "fp":
            return proofcore.fp(s, kid)
        if head == "bp":
            return proofcore.bp(s, kid)
        for i, f in enumerate(s):
            if f == proofcore.BOT and delete(s, i) == kid.concl:
                return proofcore.bot(s, i, kid)
        raise ProofError("no bot position matches the premise")
    if head in ("par", "qw", "qd", "qqd", "ex"):
        _arity(form, 3, head)
        s = _seq(form[1])
        i = _int(form[2])
        kid = node_from_sexpr(form[3], env)
        return getattr(proofcore, head)(s, i, kid)
    if head in ("qb", "qc"):
        _arity(form, 3, head)
        s = _seq(form[1])
        i = _int(form[2])
        kid = node_from_sexpr(form[3], env)
        if not (0 <= i < len(s)) or not isinstance(s[i], proofcore.WhyNot):
            raise ProofError(f"{head}: principal {i} is not a ?-formula")
        popped = s[i].body if head == "qb" else s[i]
        for a in range(len(s) + 1):
            if kid.concl == insert(s, a, popped):
                return getattr(proofcore, head)(s, i, a, kid)
        raise ProofError(f"{head}: premise does not extend the conclusion")
    if head == "cp":
        _arity(form, 3, "cp")
        s = _seq(form[1])
        return proofcore.cp(s, node_from_sexpr(form[2], env),
                            node_from_sexpr(form[3], env))
    if head == "cut":
        _arity(form, 4, "cut")
        s = _seq(form[1])
        f = formula_from_sexpr(form[2])
        d1 = node_from_sexpr(form[3], env)
        d2 = node_from_sexpr(form[4], env)
        return proofcore.mk_cut(s, f, d1, d2)
    if head == "tens":
        _arity(form, 4, "tens")
        s = _seq(form[1])
        i = _int(form[2])
        d1 = node_from_sexpr(form[3], env)
        d2 = node_from_sexpr(form[4], env)
        return proofcore.mk_tens(s, i, d1, d2)
    if head in ("nwb", "nup"):
        _arity(form, 3, head)
        s = _seq(form[1])
        calls_form = form[2]
        if not isinstance(calls_form, list) or calls_form[:1] != ["calls"]:
            raise SexprError(f"{head} needs (calls d ...)", 0)
        calls = tuple(node_from_sexpr(c, env) for c in calls_form[1:])
        sel = _sel(form[3])
        builder = proofcore.nwb if head == "nwb" else proofcore.nup
        return builder(s, calls, sel)
    if head == "family":
        if len(form) < 3:
            raise SexprError("family takes a sequent, a name and base calls", 0)
        s = _seq(form[1])
        name = form[2]
        args = tuple(node_from_sexpr(c, env) for c in form[3:])
        return proofcore.family(s, name, args)
    raise SexprError(f"unknown proof constructor {head!r}", 0)


def peek_concl(form, env):
    """Conclusion of a form without fully parsing it (for back-edges)."""
    if isinstance(form, str) or not form:
        raise SexprError("expected a proof form", 0)
    head = form[0]
    if head == "ax":
        f = formula_from_sexpr(form[1])
        return (f, dual(f))
    if head == "one":
        return (proofcore.ONE,)
    if head == "ref":
        if form[1] not in env:
            raise SexprError(f"cannot resolve (ref {form[1]}) for its label", 0)
        return env[form[1]]
    if head == "def":
        return peek_concl(form[2], env)
    if head in ("hyp",):
        return _seq(form[1])
    return _seq(form[1])


def parse_proof(text):
    """Parse one proof form; raises SexprError with a byte offset."""
    return node_from_sexpr(sexpr.parse_one(text))


# ---------------------------------------------------------------------------
# printing

def _seq_sx(s):
    return [_to_sexpr(f) for f in s]


def node_to_sexpr(node):
    k = node.kind
    if k == "ax":
        return ["ax", _to_sexpr(node.f)]
    if k == "one":
        return ["one"]
    if k == "hyp":
        return ["hyp", _seq_sx(node.concl)]
    if k == "ref":
        return ["ref", node.name]
    if k == "defn":
        return ["def", node.name, node_to_sexpr(node.kids[0])]
    if k in ("bot", "fp", "bp"):
        return [k if k != "bot" else "bot", _seq_sx(node.concl),
                node_to_sexpr(node.kids[0])]
    if k in ("par", "qw", "qd", "qqd", "ex", "qb", "qc"):
        return [k, _seq_sx(node.concl), str(node.i), node_to_sexpr(node.kids[0])]
    if k == "cp":
        return ["cp", _seq_sx(node.concl), node_to_sexpr(node.kids[0]),
                node_to_sexpr(node.kids[1])]
    if k == "cut":
        return ["cut", _seq_sx(node.concl), _to_sexpr(node.f),
                node_to_sexpr(node.kids[0]), node_to_sexpr(node.kids[1])]
    if k == "tens":
        return ["tens", _seq_sx(node.concl), str(node.i),
                node_to_sexpr(node.kids[0]), node_to_sexpr(node.kids[1])]
    if k in ("nwb", "nup"):
        sel = node.selector
        if isinstance(sel, EventuallyPeriodic):
            sel_sx = ["sel", ["prefix"] + [str(j) for j in sel.prefix],
                      ["loop"] + [str(j) for j in sel.loop]]
        else:
            sel_sx = ["sel", "oracle", sel.name]
        return [k, _seq_sx(node.concl),
                ["calls"] + [node_to_sexpr(c) for c in node.kids], sel_sx]
    if k == "family":
        return ["family", _seq_sx(node.concl), node.name] + [
            node_to_sexpr(c) for c in node.kids]
    raise ProofError(f"cannot print {k}")


def print_proof(node):
    return sexpr.write(node_to_sexpr(node))
