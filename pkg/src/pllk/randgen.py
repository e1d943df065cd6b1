"""Seeded random generation of small open derivations.

Used by the property suites: derivations are built bottom-up by applying
randomly chosen rules to a pool of leaves (axioms on small non-modal
formulas, one, hyp), so every output is schema-valid by construction.
Axioms are kept non-modal so relational interpretations stay finite and
exact.
"""

from __future__ import annotations

import random

from pllk import proofcore
from pllk.formula import BOT, DualVar, OfCourse, ONE, Par, Tensor, Var, WhyNot, dual
from pllk.proofcore import delete, insert

SMALL = (Var("X"), DualVar("X"), Var("Y"), ONE, BOT,
         Tensor(Var("X"), DualVar("X")), Par(Var("Y"), DualVar("Y")))


def _modal_inside(f):
    if isinstance(f, (OfCourse, WhyNot)):
        return True
    if isinstance(f, (Tensor, Par)):
        return _modal_inside(f.left) or _modal_inside(f.right)
    return False


def rand_formula(rng):
    return rng.choice(SMALL)


def _leaf(rng):
    roll = rng.random()
    if roll < 0.5:
        return proofcore.ax(rand_formula(rng))
    if roll < 0.7:
        return proofcore.one()
    seq = tuple(rand_formula(rng) for _ in range(rng.randrange(1, 3)))
    return proofcore.hyp(seq)


def _apply_unary(rng, d):
    # no exchange nodes: the cut steps absorb them, so derivations that
    # differ only by when an exchange got absorbed would defeat the
    # unique-normal-form checks (the underlying calculus has none either)
    p = d.concl
    ops = []
    if len(p) >= 2:
        ops.append("par")
    ops += ["bot", "qw"]
    pairs = [(a, q) for a in range(len(p)) for q in range(len(p))
             if a != q and p[q] == WhyNot(p[a])]
    if pairs:
        ops.append("qb")
    op = rng.choice(ops)
    if op == "par":
        i = rng.randrange(len(p) - 1)
        s = p[:i] + (Par(p[i], p[i + 1]),) + p[i + 2:]
        return proofcore.par(s, i, d)
    if op == "ex":
        i = rng.randrange(len(p) - 1)
        return proofcore.ex(proofcore.swap_adj(p, i), i, d)
    if op == "bot":
        i = rng.randrange(len(p) + 1)
        return proofcore.bot(insert(p, i, BOT), i, d)
    if op == "qw":
        i = rng.randrange(len(p) + 1)
        return proofcore.qw(insert(p, i, WhyNot(rand_formula(rng))), i, d)
    a, q = rng.choice(pairs)
    s = delete(p, a)
    i = q if q < a else q - 1
    return proofcore.qb(s, i, a, d)


def _apply_cp(rng, d):
    p = d.concl
    if not p:
        return None
    pos = rng.randrange(len(p))
    s = tuple(OfCourse_or_whynot(f, k == pos) for k, f in enumerate(p))
    return proofcore.cp(s, d, proofcore.hyp(s))


def OfCourse_or_whynot(f, is_principal):
    return OfCourse(f) if is_principal else WhyNot(f)


def _rand_merge(rng, c0, skip0, c1, skip1, extra=None, extra_at=None):
    """Random interleave of two contexts; returns (concl, src)."""
    items = ([(0, j, f) for j, f in enumerate(c0) if j != skip0]
             + [(1, j, f) for j, f in enumerate(c1) if j != skip1])
    rng.shuffle(items)
    concl, src = [], []
    if extra is not None and extra_at is None:
        extra_at = rng.randrange(len(items) + 1)
    for m, (side, j, f) in enumerate(items):
        if extra is not None and m == extra_at:
            concl.append(extra)
            src.append(None)
        concl.append(f)
        src.append((side, j))
    if extra is not None and extra_at == len(items):
        concl.append(extra)
        src.append(None)
    return tuple(concl), tuple(src)


def _apply_tens(rng, d1, d2):
    if not d1.concl or not d2.concl:
        return None
    a = rng.randrange(len(d1.concl))
    b = rng.randrange(len(d2.concl))
    f = Tensor(d1.concl[a], d2.concl[b])
    concl, src = _rand_merge(rng, d1.concl, a, d2.concl, b, extra=f)
    i = src.index(None)
    return proofcore.tens(concl, i, a, b, src, d1, d2)


def _apply_cut(rng, d1, d2):
    pairs = [(l, r) for l, f in enumerate(d1.concl)
             for r, g in enumerate(d2.concl) if g == dual(f)]
    if not pairs:
        return None
    ell, r = rng.choice(pairs)
    concl, src = _rand_merge(rng, d1.concl, ell, d2.concl, r)
    return proofcore.cut(concl, d1.concl[ell], ell, r, src, d1, d2)


def _promotion_of(rng, d):
    """A cp node promoting d's conclusion (tail premise left open)."""
    p = d.concl
    if not p:
        return None
    pos = rng.randrange(len(p))
    s = tuple(OfCourse_or_whynot(f, k == pos) for k, f in enumerate(p))
    return proofcore.cp(s, d, proofcore.hyp(s)), s[pos]


def _apply_promcut(rng, d):
    """A cut whose redex is cp against qw, qb or a second cp."""
    made = _promotion_of(rng, d)
    if made is None:
        return None
    box, bang = made
    qf = dual(bang)  # the ?-formula the partner introduces
    shape = rng.choice(("qw", "qb", "cp"))
    if shape == "qb" and _modal_inside(bang.body):
        shape = "qw"  # an axiom on a modal formula has an infinite web
    if shape == "qw":
        base = _leaf(rng)
        i = rng.randrange(len(base.concl) + 1)
        partner = proofcore.qw(insert(base.concl, i, qf), i, base)
    elif shape == "qb":
        core = proofcore.ax(bang.body)  # conclusion (A, dual A)
        with_q = proofcore.qw(insert(core.concl, 1, qf), 1, core)
        partner = proofcore.qb(delete(with_q.concl, 2), 1, 2, with_q)
    else:
        # a second box whose context carries the dual ?-formula
        body = proofcore.hyp((qf.body, rand_formula(rng)))
        s2 = (qf, OfCourse(body.concl[1]))
        partner = proofcore.cp(s2, body, proofcore.hyp(s2))
    ell = box.concl.index(bang)
    r = partner.concl.index(qf)
    concl, src = _rand_merge(rng, box.concl, ell, partner.concl, r)
    if rng.random() < 0.5:
        box, partner = partner, box
        ell, r = r, ell
        src = tuple((s ^ 1, j) for s, j in src)
    return proofcore.cut(concl, box.concl[ell], ell, r, src, box, partner)


def _apply_mulcut(rng, d):
    """A cut whose redex is par against tensor."""
    p = d.concl
    if len(p) < 2:
        return None
    i = rng.randrange(len(p) - 1)
    if _modal_inside(p[i]) or _modal_inside(p[i + 1]):
        return None  # keep axiom webs finite
    pnode = proofcore.par(p[:i] + (Par(p[i], p[i + 1]),) + p[i + 2:], i, d)
    d1 = proofcore.ax(p[i])
    d2 = proofcore.ax(p[i + 1])
    tf = Tensor(dual(p[i]), dual(p[i + 1]))
    tc, tsrc = _rand_merge(rng, d1.concl, 1, d2.concl, 1, extra=tf)
    ti = tsrc.index(None)
    partner = proofcore.tens(tc, ti, 1, 1, tsrc, d1, d2)
    ell, r = i, ti
    concl, src = _rand_merge(rng, pnode.concl, ell, partner.concl, r)
    if rng.random() < 0.5:
        pnode, partner = partner, pnode
        ell, r = r, ell
        src = tuple((s ^ 1, j) for s, j in src)
    return proofcore.cut(concl, pnode.concl[ell], ell, r, src, pnode, partner)


def rand_open_derivation(rng, max_nodes=12, want_cuts=True):
    """One random open derivation with at most ``max_nodes`` nodes."""
    pool = [_leaf(rng) for _ in range(rng.randrange(2, 5))]
    for _ in range(rng.randrange(4, 13)):
        roll = rng.random()
        if roll < 0.06 and pool:
            d = rng.choice(pool)
            if d.size + 4 <= max_nodes and len(d.concl) >= 2:
                new = _apply_mulcut(rng, d)
                if new is not None and new.size <= max_nodes + 4:
                    pool.append(new)
        elif roll < 0.35 and pool:
            d = rng.choice(pool)
            if d.size < max_nodes:
                new = _apply_unary(rng, d)
                if new is not None and new.size <= max_nodes:
                    pool.append(new)
        elif roll < 0.5 and pool:
            d = rng.choice(pool)
            if d.size + 2 <= max_nodes and len(d.concl) <= 3:
                new = _apply_cp(rng, d)
                if new is not None and new.size <= max_nodes:
                    pool.append(new)
        elif roll < 0.65 and pool:
            d = rng.choice(pool)
            if d.size + 6 <= max_nodes and 0 < len(d.concl) <= 2:
                new = _apply_promcut(rng, d)
                if new is not None and new.size <= max_nodes + 4:
                    pool.append(new)
        elif roll < 0.82 and len(pool) >= 2:
            d1, d2 = rng.sample(pool, 2)
            if d1.size + d2.size + 1 <= max_nodes:
                new = _apply_tens(rng, d1, d2)
                if new is not None:
                    pool.append(new)
        elif len(pool) >= 2:
            d1, d2 = rng.sample(pool, 2)
            if d1.size + d2.size + 1 <= max_nodes:
                new = _apply_cut(rng, d1, d2)
                if new is not None:
                    pool.append(new)
    if want_cuts:
        with_cuts = [d for d in pool
                     if any(n.kind == "cut" for _, n in proofcore.iter_nodes(d))]
        if with_cuts:
            return max(with_cuts, key=lambda d: d.size)
    return max(pool, key=lambda d: d.size)
