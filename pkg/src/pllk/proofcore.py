"""Sequents, rule applications, open derivations and coderivation specs.

A proof tree is built from :class:`Node` values.  Every node stores its full
conclusion sequent (a tuple of formulas); rule-specific bookkeeping pins the
principal position(s) and, for two-premise rules, an explicit map ``src``
from conclusion positions to premise occurrences.  That map doubles as the
parent relation used for thread tracking: it is exact about which premise
occurrence each conclusion occurrence comes from, cut formulas and the left
premise of conditional promotion having no parent edge.

Rule kinds
----------
Ordinary rules: ``ax cut tens par one bot fp cp bp nup qw qb qd qc qqd ex
hyp``.  Spec-only constructors, which describe possibly infinite
coderivations finitely: ``nwb`` (non-wellfounded box with calls and a
selector), ``family`` (registry-built box whose calls are generated, used for
boxes without finite support), ``defn``/``ref`` (back-edges of regular
coderivations).
"""

from __future__ import annotations

from pllk.formula import (
    BOT,
    Formula,
    OfCourse,
    ONE,
    Par,
    Tensor,
    Var,
    WhyNot,
    dual,
    print_formula,
)

Sequent = tuple  # tuple[Formula, ...]


class ProofError(Exception):
    """A rule application that does not match its schema."""


RULE_KINDS = frozenset(
    "ax cut tens par one bot fp cp bp nup qw qb qd qc qqd ex hyp".split()
)
SPEC_KINDS = frozenset("nwb family defn ref".split())

# rule sets of the named systems; `ex` is available everywhere
_COMMON = {"ax", "cut", "tens", "par", "one", "bot", "qw", "ex"}
SYSTEMS = {
    "pll": _COMMON | {"qb", "fp"},
    "nupll": _COMMON | {"qb", "nup"},
    "pllinf": _COMMON | {"qb", "cp"},
    "opllinf": _COMMON | {"qb", "cp", "hyp"},
    "mell": _COMMON | {"qd", "qc", "bp"},
    "mellinf": _COMMON | {"qb", "cp", "qqd"},
    "omellinf": _COMMON | {"qb", "cp", "qqd", "hyp"},
}

# systems whose coderivations may be described by spec constructors
_INFINITARY = {"pllinf", "opllinf", "mellinf", "omellinf"}


def seq_str(s):
    return "(" + " ".join(print_formula(f) for f in s) + ")"


class Node:
    """One rule application (or spec constructor) with its conclusion."""

    __slots__ = (
        "kind",
        "concl",
        "kids",
        "f",
        "i",
        "a",
        "b",
        "ell",
        "r",
        "src",
        "selector",
        "name",
        "size",
        "height",
        "_hash",
    )

    def __init__(self, kind, concl, kids=(), f=None, i=None, a=None, b=None,
                 ell=None, r=None, src=None, selector=None, name=None):
        self.kind = kind
        self.concl = tuple(concl)
        self.kids = tuple(kids)
        self.f = f
        self.i = i
        self.a = a
        self.b = b
        self.ell = ell
        self.r = r
        self.src = src
        self.selector = selector
        self.name = name
        self.size = 1 + sum(k.size for k in self.kids)
        self.height = 1 + max((k.height for k in self.kids), default=-1)
        self._hash = hash(
            (kind, self.concl, f, i, a, b, ell, r, src, selector, name)
            + tuple(k._hash for k in self.kids)
        )

    def _key(self):
        return (self.kind, self.concl, self.f, self.i, self.a, self.b,
                self.ell, self.r, self.src, self.selector, self.name)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Node):
            return NotImplemented
        if self._hash != other._hash or self._key() != other._key():
            return False
        return self.kids == other.kids

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"<{self.kind} {seq_str(self.concl)} size={self.size}>"

    def with_kids(self, kids):
        return Node(self.kind, self.concl, kids, self.f, self.i, self.a,
                    self.b, self.ell, self.r, self.src, self.selector,
                    self.name)


# ---------------------------------------------------------------------------
# sequent helpers

def delete(s, i):
    return s[:i] + s[i + 1:]


def insert(s, i, f):
    return s[:i] + (f,) + s[i:]


def replace(s, i, f):
    return s[:i] + (f,) + s[i + 1:]


def swap_adj(s, i):
    return s[:i] + (s[i + 1], s[i]) + s[i + 2:]


def promotion_shape(s):
    """For a sequent ?Γ,!A return the position of !A, else raise."""
    bangs = [k for k, f in enumerate(s) if isinstance(f, OfCourse)]
    if len(bangs) != 1:
        raise ProofError(f"promotion needs exactly one !-formula: {seq_str(s)}")
    p = bangs[0]
    for k, f in enumerate(s):
        if k != p and not isinstance(f, WhyNot):
            raise ProofError(f"promotion context must be ?-formulas: {seq_str(s)}")
    return p


def strip_promotion(s, p=None):
    """Γ,A from ?Γ,!A (positionally)."""
    if p is None:
        p = promotion_shape(s)
    return tuple(f.body for f in s)


# ---------------------------------------------------------------------------
# smart constructors (each checks its schema)

def ax(f):
    return Node("ax", (f, dual(f)), f=f)


def one():
    return Node("one", (ONE,))


def hyp(s):
    return Node("hyp", tuple(s))


def _check_kid(s_expected, kid, what):
    if kid.concl != tuple(s_expected):
        raise ProofError(
            f"{what}: premise is {seq_str(kid.concl)}, expected {seq_str(s_expected)}"
        )


def bot(s, i, kid):
    s = tuple(s)
    if not (0 <= i < len(s)) or s[i] is not BOT:
        raise ProofError(f"bot: position {i} of {seq_str(s)} is not bot")
    _check_kid(delete(s, i), kid, "bot")
    return Node("bot", s, (kid,), i=i)


def qw(s, i, kid):
    s = tuple(s)
    if not (0 <= i < len(s)) or not isinstance(s[i], WhyNot):
        raise ProofError(f"qw: position {i} of {seq_str(s)} is not a ?-formula")
    _check_kid(delete(s, i), kid, "qw")
    return Node("qw", s, (kid,), i=i)


def qd(s, i, kid):
    s = tuple(s)
    if not (0 <= i < len(s)) or not isinstance(s[i], WhyNot):
        raise ProofError(f"qd: position {i} of {seq_str(s)} is not a ?-formula")
    _check_kid(replace(s, i, s[i].body), kid, "qd")
    return Node("qd", s, (kid,), i=i)


def qqd(s, i, kid):
    s = tuple(s)
    if not (0 <= i < len(s)) or not isinstance(s[i], WhyNot):
        raise ProofError(f"qqd: position {i} of {seq_str(s)} is not a ?-formula")
    _check_kid(replace(s, i, WhyNot(s[i])), kid, "qqd")
    return Node("qqd", s, (kid,), i=i)


def ex(s, i, kid):
    s = tuple(s)
    if not (0 <= i < len(s) - 1):
        raise ProofError(f"ex: position {i} out of range for {seq_str(s)}")
    _check_kid(swap_adj(s, i), kid, "ex")
    return Node("ex", s, (kid,), i=i)


def par(s, i, kid):
    s = tuple(s)
    if not (0 <= i < len(s)) or not isinstance(s[i], Par):
        raise ProofError(f"par: position {i} of {seq_str(s)} is not a par-formula")
    _check_kid(s[:i] + (s[i].left, s[i].right) + s[i + 1:], kid, "par")
    return Node("par", s, (kid,), i=i)


def qb(s, i, a, kid):
    s = tuple(s)
    if not (0 <= i < len(s)) or not isinstance(s[i], WhyNot):
        raise ProofError(f"qb: position {i} of {seq_str(s)} is not a ?-formula")
    if not (0 <= a <= len(s)):
        raise ProofError(f"qb: insert position {a} out of range")
    _check_kid(insert(s, a, s[i].body), kid, "qb")
    return Node("qb", s, (kid,), i=i, a=a)


def qc(s, i, a, kid):
    s = tuple(s)
    if not (0 <= i < len(s)) or not isinstance(s[i], WhyNot):
        raise ProofError(f"qc: position {i} of {seq_str(s)} is not a ?-formula")
    if not (0 <= a <= len(s)):
        raise ProofError(f"qc: insert position {a} out of range")
    _check_kid(insert(s, a, s[i]), kid, "qc")
    return Node("qc", s, (kid,), i=i, a=a)


def fp(s, kid):
    s = tuple(s)
    p = promotion_shape(s)
    _check_kid(strip_promotion(s, p), kid, "fp")
    return Node("fp", s, (kid,), i=p)


def bp(s, kid):
    s = tuple(s)
    p = promotion_shape(s)
    _check_kid(replace(s, p, s[p].body), kid, "bp")
    return Node("bp", s, (kid,), i=p)


def cp(s, kid1, kid2):
    s = tuple(s)
    p = promotion_shape(s)
    _check_kid(strip_promotion(s, p), kid1, "cp left premise")
    _check_kid(s, kid2, "cp right premise")
    return Node("cp", s, (kid1, kid2), i=p)


def _check_src(s, src, ctx0, ctx1, what):
    """src maps each conclusion position to ('side', premise position)."""
    if len(src) != len(s):
        raise ProofError(f"{what}: src length mismatch")
    seen0, seen1 = set(), set()
    for k, entry in enumerate(src):
        if entry is None:
            continue
        side, j = entry
        ctx = ctx0 if side == 0 else ctx1
        seen = seen0 if side == 0 else seen1
        if j not in ctx or j in seen:
            raise ProofError(f"{what}: bad src entry {entry} at {k}")
        seen.add(j)
        if s[k] != ctx[j]:
            raise ProofError(
                f"{what}: conclusion {print_formula(s[k])} at {k} does not "
                f"match premise occurrence {entry}"
            )
    if seen0 != set(ctx0) or seen1 != set(ctx1):
        raise ProofError(f"{what}: src is not onto the premise contexts")


def cut(s, f, ell, r, src, kid1, kid2):
    s = tuple(s)
    if not (0 <= ell < len(kid1.concl)) or kid1.concl[ell] != f:
        raise ProofError("cut: left premise lacks the cut formula at ell")
    if not (0 <= r < len(kid2.concl)) or kid2.concl[r] != dual(f):
        raise ProofError("cut: right premise lacks the dual cut formula at r")
    ctx0 = {j: g for j, g in enumerate(kid1.concl) if j != ell}
    ctx1 = {j: g for j, g in enumerate(kid2.concl) if j != r}
    if any(e is None for e in src):
        raise ProofError("cut: src entries must all be premise positions")
    _check_src(s, src, ctx0, ctx1, "cut")
    return Node("cut", s, (kid1, kid2), f=f, ell=ell, r=r, src=tuple(src))


def tens(s, i, a, b, src, kid1, kid2):
    s = tuple(s)
    if not (0 <= i < len(s)) or not isinstance(s[i], Tensor):
        raise ProofError(f"tens: position {i} of {seq_str(s)} is not a tensor")
    if not (0 <= a < len(kid1.concl)) or kid1.concl[a] != s[i].left:
        raise ProofError("tens: left premise lacks the left component at a")
    if not (0 <= b < len(kid2.concl)) or kid2.concl[b] != s[i].right:
        raise ProofError("tens: right premise lacks the right component at b")
    if src[i] is not None:
        raise ProofError("tens: src at the principal position must be None")
    ctx0 = {j: g for j, g in enumerate(kid1.concl) if j != a}
    ctx1 = {j: g for j, g in enumerate(kid2.concl) if j != b}
    _check_src(s, src, ctx0, ctx1, "tens")
    return Node("tens", s, (kid1, kid2), i=i, a=a, b=b, src=tuple(src))


def mk_cut(s, f, kid1, kid2, ell=None, r=None):
    """Cut with src inferred: leftmost unused matching occurrence, left first."""
    s = tuple(s)
    if ell is None:
        ell = _find(kid1.concl, f, set())
    if r is None:
        r = _find(kid2.concl, dual(f), set())
    src = _infer_src(s, kid1.concl, ell, kid2.concl, r)
    return cut(s, f, ell, r, src, kid1, kid2)


def mk_tens(s, i, kid1, kid2):
    s = tuple(s)
    if not isinstance(s[i], Tensor):
        raise ProofError("mk_tens: principal is not a tensor")
    a = _find(kid1.concl, s[i].left, set())
    b = _find(kid2.concl, s[i].right, set())
    src = _infer_src(s, kid1.concl, a, kid2.concl, b, skip=i)
    return tens(s, i, a, b, src, kid1, kid2)


def _find(seq, f, used):
    for j, g in enumerate(seq):
        if j not in used and g == f:
            return j
    raise ProofError(f"occurrence of {print_formula(f)} not found in {seq_str(seq)}")


def _infer_src(s, c0, skip0, c1, skip1, skip=None):
    used0, used1 = {skip0}, {skip1}
    src = []
    for k, g in enumerate(s):
        if k == skip:
            src.append(None)
            continue
        try:
            src.append((0, _find(c0, g, used0)))
            used0.add(src[-1][1])
        except ProofError:
            j = _find(c1, g, used1)
            used1.add(j)
            src.append((1, j))
    if len(used0) != len(c0) or len(used1) != len(c1):
        raise ProofError("premise contexts not exhausted by the conclusion")
    return tuple(src)


def nup(s, calls, sel):
    s = tuple(s)
    p = promotion_shape(s)
    body = strip_promotion(s, p)
    calls = tuple(calls)
    if not calls:
        raise ProofError("nup: needs at least one call")
    for c in calls:
        _check_kid(body, c, "nup call")
    _check_selector(sel, len(calls))
    return Node("nup", s, calls, i=p, selector=sel)


def nwb(s, calls, sel):
    s = tuple(s)
    p = promotion_shape(s)
    body = strip_promotion(s, p)
    calls = tuple(calls)
    if not calls:
        raise ProofError("nwb: needs at least one call")
    for c in calls:
        _check_kid(body, c, "nwb call")
    _check_selector(sel, len(calls))
    return Node("nwb", s, calls, i=p, selector=sel)


def _check_selector(sel, ncalls):
    idx = sel.indices()
    if idx is not None and any(not (0 <= j < ncalls) for j in idx):
        raise ProofError("selector index out of range")


def family(s, name, args=()):
    from pllk import families  # local import: families builds spec nodes

    s = tuple(s)
    p = promotion_shape(s)
    fam = families.get(name)
    node = Node("family", s, tuple(args), i=p, name=name)
    fam.check(node)
    return node


def defn(name, kid):
    return Node("defn", kid.concl, (kid,), name=name)


def ref(name, concl):
    return Node("ref", tuple(concl), name=name)


BUILD = {
    "ax": ax, "one": one, "hyp": hyp, "bot": bot, "qw": qw, "qd": qd,
    "qqd": qqd, "ex": ex, "par": par, "qb": qb, "qc": qc, "fp": fp,
    "bp": bp, "cp": cp, "cut": cut, "tens": tens, "nup": nup, "nwb": nwb,
}


# ---------------------------------------------------------------------------
# the parent relation (thread edges)

def parents(node, k):
    """Premise occurrences that are parents of conclusion position k.

    Returns a list of (kid index, premise position).  Cut formulas are not
    reachable (they are premise-only); the left premise of cp carries no
    edges; qb's principal points at the surviving ?-occurrence only.
    """
    kind = node.kind
    if kind in ("ax", "one", "hyp", "ref"):
        return []
    if kind in ("bot", "qw"):
        return [] if k == node.i else [(0, k if k < node.i else k - 1)]
    if kind in ("qd", "qqd"):
        return [(0, k)]
    if kind == "ex":
        if k == node.i:
            return [(0, k + 1)]
        if k == node.i + 1:
            return [(0, k - 1)]
        return [(0, k)]
    if kind == "par":
        if k == node.i:
            return [(0, k), (0, k + 1)]
        return [(0, k if k < node.i else k + 1)]
    if kind == "qb":
        return [(0, k if k < node.a else k + 1)]
    if kind == "qc":
        j = k if k < node.a else k + 1
        if k == node.i:
            return [(0, j), (0, node.a)]
        return [(0, j)]
    if kind in ("fp", "bp"):
        return [(0, k)]
    if kind == "cp":
        return [(1, k)]
    if kind == "cut":
        return [node.src[k]]
    if kind == "tens":
        if k == node.i:
            return [(0, node.a), (1, node.b)]
        return [node.src[k]]
    if kind == "defn":
        return [(0, k)]
    raise ProofError(f"no parent map for {kind}")


# ---------------------------------------------------------------------------
# navigation and structural operations

def at(d, addr):
    node = d
    for step in addr:
        if not (1 <= step <= len(node.kids)):
            raise ProofError(f"address {addr} not in tree")
        node = node.kids[step - 1]
    return node


def subderivation_at(d, addr):
    """The rooted subtree at an address."""
    return at(d, addr)


def replace_at(d, addr, new):
    if not addr:
        return new
    step = addr[0]
    if not (1 <= step <= len(d.kids)):
        raise ProofError(f"address {addr} not in tree")
    kids = list(d.kids)
    kids[step - 1] = replace_at(kids[step - 1], addr[1:], new)
    return d.with_kids(tuple(kids))


def iter_nodes(d):
    """Yield (address, node) over the finite tree, preorder."""
    stack = [((), d)]
    while stack:
        addr, node = stack.pop()
        yield addr, node
        for j in range(len(node.kids) - 1, -1, -1):
            stack.append((addr + (j + 1,), node.kids[j]))


def is_open_derivation(d):
    return all(n.kind in RULE_KINDS for _, n in iter_nodes(d))


def prune(d, addrs):
    """Replace the subtrees at the given addresses by hyp."""
    addrs = sorted(set(tuple(a) for a in addrs))
    for a in addrs:
        at(d, a)  # raises if absent
    # pruning at an address subsumes pruning anywhere above it
    minimal = [a for a in addrs
               if not any(a != b and a[:len(b)] == b for b in addrs)]
    out = d
    for addr in minimal:
        out = replace_at(out, addr, hyp(at(d, addr).concl))
    return out


def approx_leq(d1, d2):
    """d1 is d2 with some subtrees pruned to hyp (and equal conclusions)."""
    if d1.kind == "hyp":
        return d1.concl == d2.concl
    if d1._key() != d2._key() or len(d1.kids) != len(d2.kids):
        return False
    return all(approx_leq(a, b) for a, b in zip(d1.kids, d2.kids))


def hypfree_bar_height(d):
    """Largest h such that no hyp occurs at height < h.

    Hyp-free trees report their node-level count plus one (a bar strictly
    above every node fits there).
    """
    best = None
    maxdepth = 0
    for addr, node in iter_nodes(d):
        depth = len(addr)
        maxdepth = max(maxdepth, depth)
        if node.kind == "hyp":
            best = depth if best is None else min(best, depth)
    return best if best is not None else maxdepth + 2


def is_bar(d, addrs):
    """Is the address set a bar of the (finite) derivation?

    Pairwise incomparable under the prefix order, and every maximal branch
    either crosses the set or ends at a leaf below it.
    """
    addrs = sorted(set(tuple(a) for a in addrs))
    for a in addrs:
        at(d, a)
    for i, a in enumerate(addrs):
        for b in addrs[i + 1:]:
            if a[:len(b)] == b or b[:len(a)] == a:
                return False
    covered = set(addrs)

    def walk(node, addr):
        if addr in covered:
            return True
        if not node.kids:
            return True  # the branch ends below the bar
        return all(walk(kid, addr + (j + 1,))
                   for j, kid in enumerate(node.kids))

    return walk(d, ())


# ---------------------------------------------------------------------------
# reordering (conclusion permutation pushed through a derivation)

def reorder(d, pi):
    """Return a derivation proving the permuted conclusion.

    ``pi`` maps new positions to old ones; the result's conclusion is
    ``tuple(d.concl[pi[k]])``.  Every rule is re-indexed in place; a
    reversed axiom is the axiom on the dual formula, so reordering never
    changes the size of a derivation.
    """
    pi = tuple(pi)
    if pi == tuple(range(len(pi))):
        return d
    newc = tuple(d.concl[j] for j in pi)
    inv = {old: new for new, old in enumerate(pi)}
    kind = d.kind
    if kind == "hyp":
        return hyp(newc)
    if kind == "ax":
        # only the transposition is possible here: flip the axiom
        return ax(newc[0])
    if kind in ("cut", "tens"):
        src = [None] * len(newc)
        for new, old in enumerate(pi):
            src[new] = d.src[old]
        if kind == "cut":
            return cut(newc, d.f, d.ell, d.r, tuple(src), *d.kids)
        return tens(newc, inv[d.i], d.a, d.b, tuple(src), *d.kids)
    if kind in ("bot", "qw"):
        ip = inv[d.i]
        sub = [j if j < d.i else j - 1 for j in pi if j != d.i]
        kid = reorder(d.kids[0], sub)
        return (bot if kind == "bot" else qw)(newc, ip, kid)
    if kind in ("qd", "qqd"):
        kid = reorder(d.kids[0], pi)
        return (qd if kind == "qd" else qqd)(newc, inv[d.i], kid)
    if kind == "ex":
        swap = list(range(len(d.concl)))
        swap[d.i], swap[d.i + 1] = swap[d.i + 1], swap[d.i]
        return reorder(d.kids[0], [swap[j] for j in pi])
    if kind == "par":
        ip = inv[d.i]
        sub = []
        for j in pi:
            if j < d.i:
                sub.append(j)
            elif j == d.i:
                sub.extend((d.i, d.i + 1))
            else:
                sub.append(j + 1)
        return par(newc, ip, reorder(d.kids[0], sub))
    if kind in ("qb", "qc"):
        ip = inv[d.i]
        # popped occurrence goes to the end of the new premise
        sub = [j if j < d.a else j + 1 for j in pi] + [d.a]
        kid = reorder(d.kids[0], sub)
        return (qb if kind == "qb" else qc)(newc, ip, len(newc), kid)
    if kind in ("fp", "bp"):
        kid = reorder(d.kids[0], pi)
        return (fp if kind == "fp" else bp)(newc, kid)
    if kind == "cp":
        return cp(newc, reorder(d.kids[0], pi), reorder(d.kids[1], pi))
    raise ProofError(f"reorder unsupported for {kind}")


# ---------------------------------------------------------------------------
# validation

class ValidationReport:
    def __init__(self, ok, address=None, message=None):
        self.ok = ok
        self.address = address
        self.message = message

    def __bool__(self):
        return self.ok

    def __repr__(self):
        if self.ok:
            return "ok"
        return f"violation at {''.join(map(str, self.address)) or 'root'}: {self.message}"


def _rebuild_check(node):
    """Re-run the node's constructor against its stored fields."""
    k = node.kind
    if k == "ax":
        if node.concl != (node.f, dual(node.f)):
            raise ProofError("ax conclusion must be (F, dual F)")
    elif k == "one":
        if node.concl != (ONE,):
            raise ProofError("one proves exactly (1)")
    elif k in ("hyp", "ref", "defn"):
        if k == "defn" and node.kids[0].concl != node.concl:
            raise ProofError("defn conclusion must match its body")
    elif k in ("bot", "qw", "qd", "qqd", "ex", "par"):
        BUILD[k](node.concl, node.i, node.kids[0])
    elif k in ("qb", "qc"):
        BUILD[k](node.concl, node.i, node.a, node.kids[0])
    elif k in ("fp", "bp"):
        BUILD[k](node.concl, node.kids[0])
    elif k == "cp":
        cp(node.concl, node.kids[0], node.kids[1])
    elif k == "cut":
        cut(node.concl, node.f, node.ell, node.r, node.src, *node.kids)
    elif k == "tens":
        tens(node.concl, node.i, node.a, node.b, node.src, *node.kids)
    elif k in ("nup", "nwb"):
        BUILD[k](node.concl, node.kids, node.selector)
    elif k == "family":
        from pllk import families

        families.get(node.name).check(node)
    else:
        raise ProofError(f"unknown rule kind {k!r}")


def validate(d, system):
    """Check every node against the named system and its rule schema.

    Works on open derivations and on coderivation specs; spec constructors
    (nwb, family, defn/ref) are admitted only for the infinitary systems,
    where they stand for the cp-chains they unfold to.  Graph back-edges must
    target a defn with an identical sequent label.
    """
    if system not in SYSTEMS:
        raise ValueError(f"unknown system {system!r}; one of {sorted(SYSTEMS)}")
    allowed = SYSTEMS[system]
    spec_ok = system in _INFINITARY

    def walk(node, addr, defs):
        if node.kind in SPEC_KINDS:
            if not spec_ok:
                return ValidationReport(False, addr, f"{node.kind} not allowed in {system}")
            if node.kind == "ref":
                if node.name not in defs:
                    return ValidationReport(False, addr, f"ref to unknown {node.name!r}")
                if defs[node.name] != node.concl:
                    return ValidationReport(False, addr, "back-edge target label differs")
                return None
            if node.kind == "defn":
                defs = dict(defs)
                defs[node.name] = node.concl
        elif node.kind not in allowed:
            return ValidationReport(False, addr, f"rule {node.kind} not in {system}")
        try:
            _rebuild_check(node)
        except ProofError as e:
            return ValidationReport(False, addr, str(e))
        for j, kid in enumerate(node.kids):
            bad = walk(kid, addr + (j + 1,), defs)
            if bad is not None:
                return bad
        return None

    bad = walk(d, (), {})
    return bad if bad is not None else ValidationReport(True)
