"""Cut-elimination steps, termination measure, and the stream normalizer.

Redexes are cut nodes whose premises match one of the step schemas:
principal multiplicative steps (ax, tens-par, one-bot), exponential steps for
conditional promotion (cp-cp, cp-qw, cp-qb) and functorial promotion (fp-fp,
fp-qw, fp-qb), and commutative steps over any non-cut, non-promotion rule.
A cut with a hyp premise is blocked and never reduced; blocked cuts are
pruned by :func:`cf`.

Every step preserves the conclusion sequent exactly.  Steps over the
exchange rule absorb it into the cut's occurrence map (size shrinks by one,
so they sit with the multiplicative steps in the measure catalog).
"""

from __future__ import annotations

from dataclasses import dataclass

from pllk import proofcore, specs
from pllk.formula import dual
from pllk.proofcore import (
    Node,
    ProofError,
    at,
    delete,
    hyp,
    iter_nodes,
    parents,
    prune,
    replace_at,
    reorder,
)


class StaleRedex(ProofError):
    pass


class FuelExhausted(Exception):
    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


@dataclass(frozen=True)
class Redex:
    addr: tuple
    kind: str
    orient: str  # which premise plays the principal/commuting role: "L" or "R"

    def __repr__(self):
        a = "".join(map(str, self.addr)) or "e"
        return f"{self.kind}@{a}/{self.orient}"


@dataclass(frozen=True)
class Measure:
    ncp: int
    size: int
    hcut: int

    def as_tuple(self):
        return (self.ncp, self.size, self.hcut)

    def __lt__(self, other):
        return self.as_tuple() < other.as_tuple()


@dataclass(frozen=True)
class Trace:
    start: Node
    steps: tuple  # ((redex, derivation-after), ...)

    def __len__(self):
        return len(self.steps)

    @property
    def derivations(self):
        return (self.start,) + tuple(d for _, d in self.steps)

    @property
    def end(self):
        return self.steps[-1][1] if self.steps else self.start


def measure(d):
    """The termination triple: (#promotions, size, cut-rooted subtree mass)."""
    ncp = 0
    hcut = 0
    for _, n in iter_nodes(d):
        if n.kind in ("cp", "fp"):
            ncp += 1
        elif n.kind == "cut":
            hcut += n.size
    return Measure(ncp, d.size, hcut)


# ---------------------------------------------------------------------------
# redex classification

_COMMUTABLE = {"par", "bot", "qw", "qb", "qd", "qc", "qqd", "ex", "tens"}


def _active(node, side):
    return node.ell if side == 0 else node.r


def _is_principal(prem, active):
    k = prem.kind
    if k in ("ax", "one"):
        return True
    if k in ("par", "bot", "qw", "qb", "qd", "qc", "qqd", "tens"):
        return active == prem.i
    if k in ("cp", "fp", "bp"):
        return active == prem.i
    return False


def classify_all(node):
    """Every step applicable at this cut, in the documented priority order.

    Principal steps come before commutative ones, and commutative steps
    prefer the left premise; position 0 is what the deterministic strategy
    fires.
    """
    L, R = node.kids
    if L.kind == "hyp" or R.kind == "hyp":
        return []
    out = []
    lp = _is_principal(L, node.ell)
    rp = _is_principal(R, node.r)
    if L.kind == "ax":
        out.append(("ax", "L"))
    if R.kind == "ax":
        out.append(("ax", "R"))
    if lp and rp:
        kinds = {L.kind, R.kind}
        if kinds == {"par", "tens"}:
            out.append(("tens-par", "L" if L.kind == "par" else "R"))
        if kinds == {"one", "bot"}:
            out.append(("one-bot", "L" if L.kind == "one" else "R"))
    for box in ("cp", "fp"):
        if L.kind == box and lp:
            if R.kind == box:
                out.append((f"{box}-{box}", "L"))
            if R.kind == "qw" and rp:
                out.append((f"{box}-qw", "L"))
            if R.kind == "qb" and rp:
                out.append((f"{box}-qb", "L"))
        if R.kind == box and rp:
            if L.kind == box:
                out.append((f"{box}-{box}", "R"))
            if L.kind == "qw" and lp:
                out.append((f"{box}-qw", "R"))
            if L.kind == "qb" and lp:
                out.append((f"{box}-qb", "R"))
    if L.kind == "bp" and lp:
        if R.kind == "bp":
            out.append(("bp-bp", "L"))
        if R.kind == "qd" and rp:
            out.append(("bp-qd", "L"))
        if R.kind == "qw" and rp:
            out.append(("bp-qw", "L"))
        if R.kind == "qc" and rp:
            out.append(("bp-qc", "L"))
    if R.kind == "bp" and rp:
        if L.kind == "bp":
            out.append(("bp-bp", "R"))
        if L.kind == "qd" and lp:
            out.append(("bp-qd", "R"))
        if L.kind == "qw" and lp:
            out.append(("bp-qw", "R"))
        if L.kind == "qc" and lp:
            out.append(("bp-qc", "R"))
    if L.kind in _COMMUTABLE and not lp:
        out.append(("comm-left-2ary" if L.kind == "tens" else "comm-left-1ary",
                    "L"))
    if R.kind in _COMMUTABLE and not rp:
        out.append(("comm-right-2ary" if R.kind == "tens" else "comm-right-1ary",
                    "R"))
    return out


def classify_cut(node):
    """The step the deterministic strategy fires here, or None (blocked)."""
    steps = classify_all(node)
    return steps[0] if steps else None


def redexes(d):
    """All redexes in leftmost-lowest order (height, then address)."""
    out = []
    for addr, n in iter_nodes(d):
        if n.kind != "cut":
            continue
        c = classify_cut(n)
        if c is not None:
            out.append(Redex(addr, c[0], c[1]))
    out.sort(key=lambda r: (len(r.addr), r.addr))
    return out


def minimal_redexes(d):
    """The redexes at minimal height (the hbh strategy's candidate set).

    Distinct cuts at one height sit in disjoint subtrees and steps never
    create cuts above the height just fired, so reduction restricted to
    these candidates reaches a unique normal form whatever the tie-break.
    """
    rs = redexes(d)
    if not rs:
        return []
    h = len(rs[0].addr)
    return [r for r in rs if len(r.addr) == h]


# ---------------------------------------------------------------------------
# step application

def apply_step(d, redex):
    node = at(d, redex.addr)
    if node.kind != "cut":
        raise StaleRedex(f"no cut at {redex.addr}")
    if (redex.kind, redex.orient) not in classify_all(node):
        raise StaleRedex(f"redex {redex} does not match the tree")
    new = _fire(node, redex.kind, redex.orient)
    if new.concl != node.concl:
        raise ProofError("step changed the conclusion")
    return replace_at(d, redex.addr, new)


def _fire(node, kind, orient):
    if kind == "ax":
        return _step_ax(node, orient)
    if kind == "one-bot":
        return _step_one_bot(node, orient)
    if kind == "tens-par":
        return _step_tens_par(node, orient)
    if kind in ("cp-cp", "fp-fp", "bp-bp"):
        return _step_prom_prom(node, orient, kind)
    if kind in ("cp-qw", "fp-qw", "bp-qw"):
        return _step_prom_qw(node, orient)
    if kind in ("cp-qb", "fp-qb"):
        return _step_prom_qb(node, orient)
    if kind == "bp-qd":
        return _step_bp_qd(node, orient)
    if kind == "bp-qc":
        return _step_bp_qc(node, orient)
    if kind.startswith("comm"):
        return _step_comm(node, 0 if orient == "L" else 1)
    raise ProofError(f"unknown step kind {kind}")


def _sides(node, orient):
    """(principal premise, its side index, other premise, other side index)."""
    if orient == "L":
        return node.kids[0], 0, node.kids[1], 1
    return node.kids[1], 1, node.kids[0], 0


def _step_ax(node, orient):
    _, _, other, oside = _sides(node, orient)
    o_active = _active(node, oside)
    pi = []
    for k in range(len(node.concl)):
        side, j = node.src[k]
        pi.append(j if side == oside else o_active)
    return reorder(other, pi)


def _step_one_bot(node, orient):
    _, _, botn, bside = _sides(node, orient)
    pi = []
    for k in range(len(node.concl)):
        side, j = node.src[k]
        assert side == bside
        pi.append(j if j < botn.i else j - 1)
    return reorder(botn.kids[0], pi)


def _step_tens_par(node, orient):
    pnode, pside, tnode, tside = _sides(node, orient)
    parf = pnode.concl[pnode.i]
    A, B = parf.left, parf.right
    e = pnode.kids[0]
    t1, t2 = tnode.kids
    # inner cut on A: e (A at pnode.i) against t1 (dual A at tnode.a)
    c1_seq, c1_src = [], []
    for k, g in enumerate(node.concl):
        side, j = node.src[k]
        if side == pside:
            jp = j if j < pnode.i else j + 1
            c1_seq.append(g)
            c1_src.append((0, jp))
        else:
            tk, jj = tnode.src[j]
            if tk == 0:
                c1_seq.append(g)
                c1_src.append((1, jj))
    c1_seq.append(B)
    c1_src.append((0, pnode.i + 1))
    inner = proofcore.cut(tuple(c1_seq), A, pnode.i, tnode.a,
                          tuple(c1_src), e, t1)
    # outer cut on B: inner (B last) against t2 (dual B at tnode.b)
    pos_in_c1 = {}
    m = 0
    for k in range(len(node.concl)):
        side, j = node.src[k]
        if side == pside or tnode.src[j][0] == 0:
            pos_in_c1[k] = m
            m += 1
    out_src = []
    for k in range(len(node.concl)):
        side, j = node.src[k]
        if k in pos_in_c1:
            out_src.append((0, pos_in_c1[k]))
        else:
            out_src.append((1, tnode.src[j][1]))
    return proofcore.cut(node.concl, B, len(c1_seq) - 1, tnode.b,
                         tuple(out_src), inner, t2)


def _xy_src(node, xside):
    """Split the cut's src by which premise feeds each conclusion position."""
    out = []
    for k in range(len(node.concl)):
        side, j = node.src[k]
        out.append(("x" if side == xside else "y", j))
    return out


def _step_prom_prom(node, orient, kind):
    x, xside, y, yside = _sides(node, orient)
    cy = _active(node, yside)
    fa = x.concl[x.i]  # the promoted !A
    body = fa.body
    tagged = _xy_src(node, xside)
    src = tuple((0, j) if t == "x" else (1, j) for t, j in tagged)
    if kind == "bp-bp":
        return _bp_bp(node, x, y, cy, tagged)
    x1, x2 = (x.kids if x.kind == "cp" else (x.kids[0], x))
    y1 = y.kids[0]
    stripped = proofcore.strip_promotion(node.concl)
    left = proofcore.cut(stripped, body, x.i, cy, src, x1, y1)
    if x.kind == "fp":
        return proofcore.fp(node.concl, left)
    right = proofcore.cut(node.concl, fa, x.i, cy, src, x2, y.kids[1])
    return proofcore.cp(node.concl, left, right)


def _ppos(node, tagged, y):
    for k, (t, j) in enumerate(tagged):
        if t == "y" and j == y.i:
            return k
    raise ProofError("promotion principal lost")


def _bp_bp(node, x, y, cy, tagged):
    # cut(bp(u), bp-node y) -> bp(cut(bp(u), y-premise)); the cut slides
    # inside the right box, its conclusion derelicting y's principal
    p = _ppos(node, tagged, y)
    inner_seq = tuple(
        g if k != p else g.body for k, g in enumerate(node.concl))
    src = tuple((0, j) if t == "x" else (1, j) for t, j in tagged)
    inner = proofcore.cut(inner_seq, x.concl[x.i], x.i, cy, src, x, y.kids[0])
    return proofcore.bp(node.concl, inner)


def _step_prom_qw(node, orient):
    x, xside, y, yside = _sides(node, orient)
    y0 = y.kids[0]
    tagged = _xy_src(node, xside)
    # base: y's premise, reordered to the y-subsequence of the conclusion
    y_positions = [k for k, (t, _) in enumerate(tagged) if t == "y"]
    pi = []
    for k in y_positions:
        j = tagged[k][1]
        pi.append(j if j < y.i else j - 1)
    cur = reorder(y0, pi)
    x_positions = [k for k, (t, _) in enumerate(tagged) if t == "x"]
    included = sorted(y_positions)
    for k in sorted(x_positions):
        included = sorted(included + [k])
        seq = tuple(node.concl[m] for m in included)
        cur = proofcore.qw(seq, included.index(k), cur)
    return cur


def _step_prom_qb(node, orient):
    x, xside, y, yside = _sides(node, orient)
    fa = x.concl[x.i]
    body = fa.body
    y0 = y.kids[0]
    cyp = y.i if y.i < y.a else y.i + 1  # surviving ?-occurrence in y0
    tagged = _xy_src(node, xside)
    n = len(node.concl)
    if x.kind == "cp":
        x1, x_tail = x.kids
    else:  # fp duplicates its box
        x1, x_tail = x.kids[0], x
    # inner cut: the stream tail against y's premise, on the boxed formula
    c1_seq = node.concl + (dual(body),)
    c1_src = []
    for k, (t, j) in enumerate(tagged):
        if t == "x":
            c1_src.append((0, j))
        else:
            c1_src.append((1, j if j < y.a else j + 1))
    c1_src.append((1, y.a))
    inner = proofcore.cut(c1_seq, fa, x.i, cyp, tuple(c1_src), x_tail, y0)
    # outer cut: the popped call against the inner cut, on the body
    xctx = [j for j in range(len(x1.concl)) if j != x.i]
    c2_seq = node.concl + tuple(x1.concl[j] for j in xctx)
    c2_src = [(1, k) for k in range(n)] + [(0, j) for j in xctx]
    outer = proofcore.cut(c2_seq, body, x.i, n, tuple(c2_src), x1, inner)
    # absorption chain consumes the popped context copies
    pos_of = {j: k for k, (t, j) in enumerate(tagged) if t == "x"}
    cur = outer
    for t in range(len(xctx), 0, -1):
        seq = node.concl + tuple(x1.concl[j] for j in xctx[:t - 1])
        cur = proofcore.qb(seq, pos_of[xctx[t - 1]], len(seq), cur)
    return cur


def _step_bp_qd(node, orient):
    # open the box: cut(bp(u), qd(w)) -> cut(u, w) on the bare formula
    x, xside, y, yside = _sides(node, orient)
    body = x.concl[x.i].body
    tagged = _xy_src(node, xside)
    src = tuple((0, j) if t == "x" else (1, j) for t, j in tagged)
    return proofcore.cut(node.concl, body, x.i, y.i, src, x.kids[0], y.kids[0])


def _step_bp_qc(node, orient):
    # duplicate the box over both contracted occurrences, then contract
    # the doubled ?-context copies
    x, xside, y, yside = _sides(node, orient)
    fa = x.concl[x.i]
    y0 = y.kids[0]
    cyp = y.i if y.i < y.a else y.i + 1
    tagged = _xy_src(node, xside)
    n = len(node.concl)
    xctx = [j for j in range(len(x.concl)) if j != x.i]
    # inner cut: one box copy against the surviving ?-occurrence of y0
    i_seq = node.concl + (dual(fa),)
    i_src = []
    for k, (t, j) in enumerate(tagged):
        if t == "x":
            i_src.append((0, j))
        else:
            i_src.append((1, j if j < y.a else j + 1))
    i_src.append((1, y.a))
    inner = proofcore.cut(i_seq, fa, x.i, cyp, tuple(i_src), x, y0)
    # outer cut: the second box copy against the copy kept by the inner cut
    o_seq = node.concl + tuple(x.concl[j] for j in xctx)
    o_src = [(1, k) for k in range(n)] + [(0, j) for j in xctx]
    outer = proofcore.cut(o_seq, fa, x.i, n, tuple(o_src), x, inner)
    pos_of = {j: k for k, (t, j) in enumerate(tagged) if t == "x"}
    cur = outer
    for t in range(len(xctx), 0, -1):
        seq = node.concl + tuple(x.concl[j] for j in xctx[:t - 1])
        cur = proofcore.qc(seq, pos_of[xctx[t - 1]], len(seq), cur)
    return cur


def _step_comm(node, side):
    u = node.kids[side]
    other = node.kids[1 - side]
    c = _active(node, side)
    o_active = _active(node, 1 - side)
    f = node.f
    if u.kind == "ex":
        cp_ = parents(u, c)[0][1]
        src = []
        for k in range(len(node.concl)):
            s, j = node.src[k]
            src.append((s, parents(u, j)[0][1]) if s == side else (s, j))
        kids = (u.kids[0], other) if side == 0 else (other, u.kids[0])
        ell = cp_ if side == 0 else node.ell
        r = node.r if side == 0 else cp_
        return proofcore.cut(node.concl, f, ell, r, tuple(src), *kids)
    if u.kind == "tens":
        return _comm_tens(node, side)
    # unary rule: rebuild it under the lifted cut
    u0 = u.kids[0]
    cp_ = parents(u, c)[0][1]
    ipos = _src_index(node, side, u.i)
    S = node.concl

    def mapped(j):
        return parents(u, j)[0][1]

    if u.kind in ("bot", "qw"):
        inner_seq = delete(S, ipos)
        inner_src = []
        for k in range(len(S)):
            if k == ipos:
                continue
            s, j = node.src[k]
            inner_src.append((s, mapped(j)) if s == side else (s, j))
        inner = _mkcut(node, side, f, cp_, o_active, tuple(inner_seq),
                       tuple(inner_src), u0, other)
        return (proofcore.bot if u.kind == "bot" else proofcore.qw)(S, ipos, inner)
    if u.kind in ("qd", "qqd"):
        newf = u0.concl[u.i]
        inner_seq = proofcore.replace(S, ipos, newf)
        inner_src = []
        for k in range(len(S)):
            s, j = node.src[k]
            if k == ipos:
                inner_src.append((side, u.i))
            else:
                inner_src.append((s, mapped(j)) if s == side else (s, j))
        inner = _mkcut(node, side, f, cp_, o_active, tuple(inner_seq),
                       tuple(inner_src), u0, other)
        return (proofcore.qd if u.kind == "qd" else proofcore.qqd)(S, ipos, inner)
    if u.kind == "par":
        pf = u.concl[u.i]
        inner_seq = S[:ipos] + (pf.left, pf.right) + S[ipos + 1:]
        inner_src = []
        for k in range(len(S)):
            s, j = node.src[k]
            if k == ipos:
                inner_src.append((side, u.i))
                inner_src.append((side, u.i + 1))
            else:
                inner_src.append((s, mapped(j)) if s == side else (s, j))
        inner = _mkcut(node, side, f, cp_, o_active, tuple(inner_seq),
                       tuple(inner_src), u0, other)
        return proofcore.par(S, ipos, inner)
    if u.kind in ("qb", "qc"):
        popped = u0.concl[u.a]
        inner_seq = S + (popped,)
        inner_src = []
        for k in range(len(S)):
            s, j = node.src[k]
            if k == ipos:
                inner_src.append((side, u.i if u.i < u.a else u.i + 1))
            else:
                inner_src.append((s, mapped(j)) if s == side else (s, j))
        inner_src.append((side, u.a))
        inner = _mkcut(node, side, f, cp_, o_active, tuple(inner_seq),
                       tuple(inner_src), u0, other)
        return (proofcore.qb if u.kind == "qb" else proofcore.qc)(
            S, ipos, len(S), inner)
    raise ProofError(f"cannot commute over {u.kind}")


def _src_index(node, side, j):
    for k in range(len(node.concl)):
        if node.src[k] == (side, j):
            return k
    raise ProofError("principal position lost in the conclusion")


def _mkcut(node, side, f, u_active, o_active, seq, src, u_kid, other):
    """Rebuild the lifted cut with the commuting premise kept on its side.

    The src entries are already tagged with the original premise sides, so
    they line up with the kid slots without remapping.
    """
    if side == 0:
        return proofcore.cut(seq, f, u_active, o_active, src, u_kid, other)
    return proofcore.cut(seq, f, o_active, u_active, src, other, u_kid)


def _comm_tens(node, side):
    u = node.kids[side]
    other = node.kids[1 - side]
    c = _active(node, side)
    o_active = _active(node, 1 - side)
    f = node.f
    S = node.concl
    w, jc = u.src[c]
    tw = u.kids[w]
    t_other = u.kids[1 - w]
    ipos = _src_index(node, side, u.i)
    # inner cut inside premise w of the tensor
    inner_seq = delete(tw.concl, jc) + tuple(
        g for k, g in enumerate(other.concl) if k != o_active)
    inner_src = []
    for j in range(len(tw.concl)):
        if j != jc:
            inner_src.append((0, j))
    for k in range(len(other.concl)):
        if k != o_active:
            inner_src.append((1, k))
    jc_in = [j for j in range(len(tw.concl)) if j != jc]
    posin = {j: m for m, j in enumerate(jc_in)}
    other_pos = {k: len(jc_in) + m
                 for m, k in enumerate(j for j in range(len(other.concl))
                                       if j != o_active)}
    if side == 0:
        inner = proofcore.cut(tuple(inner_seq), f, jc, o_active,
                              tuple(inner_src), tw, other)
    else:
        remapped = tuple((s ^ 1, j) for s, j in inner_src)
        seq2 = tuple(g for k, g in enumerate(other.concl) if k != o_active
                     ) + delete(tw.concl, jc)
        # keep ordering: contexts of the other premise first
        inner_src2 = [(0, k) for k in range(len(other.concl)) if k != o_active]
        inner_src2 += [(1, j) for j in range(len(tw.concl)) if j != jc]
        inner = proofcore.cut(tuple(seq2), f, o_active, jc,
                              tuple(inner_src2), other, tw)
        posin = {j: len(other.concl) - 1 + m for m, j in enumerate(jc_in)}
        other_pos = {k: m for m, k in
                     enumerate(j for j in range(len(other.concl))
                               if j != o_active)}
    # rebuild the tensor over the lifted cut
    new_active = posin[u.a if w == 0 else u.b]
    new_src = []
    for k in range(len(S)):
        if k == ipos:
            new_src.append(None)
            continue
        s, j = node.src[k]
        if s != side:
            new_src.append((w, other_pos[j]))
        else:
            tk, jj = u.src[j]
            if tk == w:
                new_src.append((w, posin[jj]))
            else:
                new_src.append((1 - w, jj))
    if w == 0:
        return proofcore.tens(S, ipos, new_active, u.b, tuple(new_src),
                              inner, t_other)
    return proofcore.tens(S, ipos, u.a, new_active, tuple(new_src),
                          t_other, inner)


# ---------------------------------------------------------------------------
# strategies

def hbh_step(d):
    """Apply the leftmost reducible cut of minimal height, or report normal."""
    rs = redexes(d)
    if not rs:
        return None
    r = rs[0]
    return apply_step(d, r), r


def normalize_finite(d, fuel=None):
    """Iterate hbh to the normal form (every cut has a hyp premise)."""
    if fuel is None:
        fuel = 10 * d.size * d.size
    for _ in range(fuel):
        nxt = hbh_step(d)
        if nxt is None:
            return d
        d = nxt[0]
    raise FuelExhausted(f"no normal form within {fuel} steps", best=d)


def cf(d):
    """Greatest cut-free approximation: prune at the lowest cuts."""
    addrs = []
    stack = [((), d)]
    while stack:
        addr, n = stack.pop()
        if n.kind == "cut":
            addrs.append(addr)
            continue
        for j, kid in enumerate(n.kids):
            stack.append((addr + (j + 1,), kid))
    return prune(d, addrs) if addrs else d


def reduce_stream(spec, target_height, rounds=8, fuel=None):
    """Approximate the infinitary normal form up to a requested height.

    Unfolds the spec to growing depths, fully normalizes the finite
    approximation, and returns its greatest cut-free part once that part has
    a hyp-free bar above ``target_height`` (a hyp-free result is the total
    normal form and succeeds at every height).  On non-weakly-progressing
    input this fails with the best approximation found (possibly just hyp).
    """
    k = max(target_height, 1)
    best = None
    for _ in range(rounds):
        approx = specs.unfold(spec, k) if _has_spec_nodes(spec) else prune_to(spec, k)
        nf = normalize_finite(approx, fuel)
        res = cf(nf)
        hypfree = all(n.kind != "hyp" for _, n in iter_nodes(res))
        if hypfree or proofcore.hypfree_bar_height(res) > target_height:
            return res
        if best is None or proofcore.approx_leq(best, res):
            best = res
        k *= 2
    raise FuelExhausted(
        f"no hyp-free bar above height {target_height} within {rounds} rounds",
        best=best)


def _has_spec_nodes(d):
    return any(n.kind in proofcore.SPEC_KINDS or n.kind == "nwb"
               for _, n in iter_nodes(d))


def prune_to(d, h):
    """Truncate an open derivation at height h (hyp frontier)."""
    if h == 0:
        return hyp(d.concl)
    return d.with_kids(tuple(prune_to(k, h - 1) for k in d.kids))


def run_trace(spec, n):
    """The first n height-by-height steps, with stable provenance.

    On specs the approximation depth is grown until two consecutive depths
    agree on the redex sequence, so the trace is what the full coderivation
    would do.
    """
    if not _has_spec_nodes(spec):
        return _trace_on(spec, n)
    k = 8
    prev = None
    while k <= 2048:
        tr = _trace_on(specs.unfold(spec, k), n)
        sig = tuple(r for r, _ in tr.steps) + ("normal" if len(tr) < n else "more",)
        if prev is not None and sig == prev[0]:
            return tr
        prev = (sig, tr)
        k *= 2
    raise FuelExhausted("trace did not stabilize", best=prev[1])


def _trace_on(d, n):
    steps = []
    start = d
    for _ in range(n):
        nxt = hbh_step(d)
        if nxt is None:
            break
        d, r = nxt
        steps.append((r, d))
    return Trace(start, tuple(steps))
