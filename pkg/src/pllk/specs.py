"""Finitely described coderivations: unfolding, graphs, depth, decomposition.

A spec is a :class:`pllk.proofcore.Node` tree that may contain the spec-only
constructors ``nwb``, ``family``, ``defn``/``ref``.  Unfolding produces open
derivations (finite approximations with a hyp frontier).  For the global
criteria and depth we analyse the finite *spec graph*: nodes are reachable
spec positions, back-edges come from refs, and boxes contribute a self "tail"
edge plus one edge per call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from pllk import families, proofcore
from pllk.proofcore import Node, ProofError, hyp
from pllk.selector import EventuallyPeriodic


class NotDecomposable(Exception):
    pass


def family_offset(node):
    return node.a or 0


def shifted(node):
    """Spec for the tail of a box (stream positions moved down by one)."""
    if node.kind == "nwb":
        return proofcore.nwb(node.concl, node.kids, node.selector.shift())
    if node.kind == "family":
        return Node("family", node.concl, node.kids, name=node.name,
                    a=family_offset(node) + 1)
    raise ProofError(f"not a box spec: {node.kind}")


def box_call(node, n=0):
    """The call spec at stream position n of a box node."""
    if node.kind == "nwb":
        return node.kids[node.selector.at(family_offset(node) + n)]
    if node.kind == "family":
        return families.get(node.name).call(node, family_offset(node) + n)
    raise ProofError(f"not a box spec: {node.kind}")


def is_box(node):
    return node.kind in ("nwb", "family")


def unfold(spec, h):
    """Truncate the coderivation described by ``spec`` at height ``h``.

    Every node at height < h carries the spec's rule; surviving subtrees at
    height h become hyp with the right conclusion.  defn/ref hops and box
    expansion contribute no height of their own.
    """
    import sys

    if h < 0:
        raise ValueError("unfold depth must be >= 0")
    if h * 6 + 500 > sys.getrecursionlimit():
        sys.setrecursionlimit(h * 6 + 2000)
    return _unfold(spec, h, {}, 0)


def _unfold(node, h, env, hops):
    if hops > len(env) + 1:
        raise ProofError("back-edge cycle without any rule in between")
    if h == 0:
        return hyp(node.concl)
    kind = node.kind
    if kind == "defn":
        env = dict(env)
        env[node.name] = (node.kids[0], env)
        return _unfold(node.kids[0], h, env, hops + 1)
    if kind == "ref":
        if node.name not in env:
            raise ProofError(f"ref to unknown {node.name!r}")
        target, tenv = env[node.name]
        return _unfold(target, h, tenv, hops + 1)
    if is_box(node):
        left = _unfold(box_call(node), h - 1, {}, 0)
        right = _unfold(shifted(node), h - 1, {}, 0)
        return proofcore.cp(node.concl, left, right)
    kids = tuple(_unfold(k, h - 1, env, 0) for k in node.kids)
    return node.with_kids(kids)


def approx_leq(d, other):
    """Approximation order; ``other`` may be an open derivation or a spec."""
    if proofcore.is_open_derivation(other):
        return proofcore.approx_leq(d, other)
    return proofcore.approx_leq(d, unfold(other, d.height + 1))


def is_bar(subject, addrs, slack=12):
    """Is the address set a bar?

    On specs, infinite branches are witnessed by truncation hyps that stay
    unresolved when the unfolding goes ``slack`` levels deeper: each such
    witness must lie below some bar node.
    """
    addrs = {tuple(a) for a in addrs}
    if proofcore.is_open_derivation(subject):
        return proofcore.is_bar(subject, addrs)
    k = max((len(a) for a in addrs), default=0) + 2
    u = unfold(subject, k)
    if not proofcore.is_bar(u, addrs):
        return False
    big = unfold(subject, k + slack)
    for addr, node in proofcore.iter_nodes(u):
        if node.kind != "hyp" or len(addr) != k:
            continue
        sub = proofcore.at(big, addr)
        still_cut = any(n.kind == "hyp" and len(a) == slack
                        for a, n in proofcore.iter_nodes(sub))
        if still_cut and not any(addr[:len(a)] == a for a in addrs):
            return False
    return True


# ---------------------------------------------------------------------------
# spec graphs

@dataclass
class GNode:
    gid: int
    node: Node  # underlying spec node (rule, nwb or family); defn/ref collapsed
    edges: list = field(default_factory=list)
    # edge = (label, target gid); labels: ("kid", j) for rule premises,
    # ("call", j) for box calls, ("tail",) for the box self-edge


FAMILY_SAMPLES = 3


def spec_graph(spec):
    """Finite graph of the positions reachable in ``spec``.

    Returns (list of GNode, root gid).  Box calls of a family node are
    sampled (the builtin families are uniform in shape, so the samples are
    faithful for the analyses here).
    """
    nodes = []
    alias = {}
    memo = {}

    def alloc(node):
        g = GNode(len(nodes), node)
        nodes.append(g)
        return g

    def resolve(gid, guard=0):
        while gid in alias:
            gid = alias[gid]
            guard += 1
            if guard > len(nodes) + 2:
                raise ProofError("back-edge cycle without any rule in between")
        return gid

    def go(node, env):
        key = (id(node), env)
        if key in memo:
            return memo[key]
        if node.kind == "defn":
            g = alloc(node)
            memo[key] = g.gid
            inner = go(node.kids[0], env + ((node.name, g.gid),))
            alias[g.gid] = inner
            return g.gid
        if node.kind == "ref":
            for n, t in reversed(env):
                if n == node.name:
                    return t
            raise ProofError(f"ref to unknown {node.name!r}")
        g = alloc(node)
        memo[key] = g.gid
        if is_box(node):
            calls = (node.kids if node.kind == "nwb"
                     else [box_call(node, n) for n in range(FAMILY_SAMPLES)])
            for j, c in enumerate(calls):
                g.edges.append((("call", j), go(c, ())))
            g.edges.append((("tail",), g.gid))
        else:
            for j, kid in enumerate(node.kids):
                g.edges.append((("kid", j), go(kid, env)))
        return g.gid

    root = go(spec, ())
    for g in nodes:
        g.edges = [(lab, resolve(t)) for lab, t in g.edges]
    root = resolve(root)
    # a pure defn/ref cycle hiding behind an alias is not a coderivation
    for gid in alias:
        resolve(gid)
    return nodes, root


def reachable(nodes, root):
    seen = set()
    todo = [root]
    while todo:
        gid = todo.pop()
        if gid in seen:
            continue
        seen.add(gid)
        for _, t in nodes[gid].edges:
            todo.append(t)
    return seen


def elementary_cycles(nodes, root, max_cycles=10_000):
    """All elementary cycles reachable from root, as lists of edges.

    Each cycle is a list of (gid, label, target gid).  The graphs here are
    tiny, so plain DFS enumeration (dedup by minimal node) is fine.
    """
    live = sorted(reachable(nodes, root))
    cycles = []
    for start in live:
        path = []
        onpath = {start}

        def dfs(gid):
            if len(cycles) >= max_cycles:
                return
            for lab, t in nodes[gid].edges:
                if t == start:
                    cycles.append(path + [(gid, lab, t)])
                elif t > start and t not in onpath:
                    onpath.add(t)
                    path.append((gid, lab, t))
                    dfs(t)
                    path.pop()
                    onpath.discard(t)

        dfs(start)
        onpath.discard(start)
    return cycles


def is_box_gnode(nodes, gid):
    """True for boxes and for cp nodes whose whole tail chain stays boxed."""
    seen = set()
    cur = gid
    while True:
        node = nodes[cur].node
        if is_box(node):
            return True
        if node.kind != "cp":
            return False
        if cur in seen:
            return True  # cp cycle along tail edges: an unfolded box
        seen.add(cur)
        cur = next(t for lab, t in nodes[cur].edges if lab == ("kid", 1))


def is_call_edge(nodes, gid, lab):
    """Edges that enter a call of a non-wellfounded box (nest one level)."""
    node = nodes[gid].node
    if is_box(node):
        return lab[0] == "call"
    return node.kind == "cp" and lab == ("kid", 0) and is_box_gnode(nodes, gid)


def is_tail_edge(nodes, gid, lab):
    """Right-premise-of-cp edges: what weak progressing counts."""
    node = nodes[gid].node
    if is_box(node):
        return lab == ("tail",)
    return node.kind == "cp" and lab == ("kid", 1)


# ---------------------------------------------------------------------------
# depth

def _sccs(nodes, root):
    """Tarjan strongly connected components over the reachable part."""
    live = reachable(nodes, root)
    index = {}
    low = {}
    stack, onstack = [], set()
    comps = {}
    counter = [0]
    ncomp = [0]

    def strong(v):
        work = [(v, 0)]
        while work:
            node, pi = work[-1]
            if pi == 0:
                index[node] = low[node] = counter[0]
                counter[0] += 1
                stack.append(node)
                onstack.add(node)
            edges = nodes[node].edges
            advanced = False
            while pi < len(edges):
                _, w = edges[pi]
                pi += 1
                if w not in index:
                    work[-1] = (node, pi)
                    work.append((w, 0))
                    advanced = True
                    break
                if w in onstack:
                    low[node] = min(low[node], index[w])
            if advanced:
                continue
            work.pop()
            if low[node] == index[node]:
                while True:
                    w = stack.pop()
                    onstack.discard(w)
                    comps[w] = ncomp[0]
                    if w == node:
                        break
                ncomp[0] += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])

    for v in sorted(live):
        if v not in index:
            strong(v)
    return comps


def depth(spec):
    """Maximal nesting of non-wellfounded boxes; math.inf on nesting cycles."""
    nodes, root = spec_graph(spec)
    comps = _sccs(nodes, root)
    live = reachable(nodes, root)
    # a call edge inside one SCC nests forever
    for gid in live:
        for lab, t in nodes[gid].edges:
            if comps[gid] == comps[t] and is_call_edge(nodes, gid, lab):
                return math.inf
    members = {}
    for gid in live:
        members.setdefault(comps[gid], []).append(gid)
    memo = {}

    def value(c):
        # DAG of SCCs: intra-component edges all carry weight 0 here
        if c in memo:
            return memo[c]
        best = 0
        for gid in members[c]:
            for lab, t in nodes[gid].edges:
                if comps[t] == c:
                    continue
                w = 1 if is_call_edge(nodes, gid, lab) else 0
                best = max(best, w + value(comps[t]))
        memo[c] = best
        return best

    return value(comps[root])


# ---------------------------------------------------------------------------
# decomposition into a finite base plus boxes

def _hop(node, env, guard=0):
    """Resolve defn/ref wrappers down to a rule or box node."""
    while node.kind in ("defn", "ref"):
        if guard > len(env) + 2:
            raise ProofError("back-edge cycle without any rule in between")
        if node.kind == "defn":
            env = dict(env)
            env[node.name] = (node.kids[0], env)
            node = node.kids[0]
        else:
            if node.name not in env:
                raise ProofError(f"ref to unknown {node.name!r}")
            node, env = env[node.name]
        guard += 1
    return node, env


def close_spec(node, env, bound=frozenset()):
    """Re-bind outer definitions inside ``node`` so it stands alone."""
    if node.kind == "ref":
        if node.name in bound:
            return node
        target, tenv = env[node.name]
        return proofcore.defn(
            node.name, close_spec(target, tenv, bound | {node.name}))
    if node.kind == "defn":
        env = dict(env)
        env[node.name] = (node.kids[0], env)
        return proofcore.defn(
            node.name, close_spec(node.kids[0], env, bound | {node.name}))
    if not node.kids:
        return node
    return node.with_kids(tuple(close_spec(k, env, bound) for k in node.kids))


def _is_box_root(node, env):
    """nwb/family, or a cp whose tail chain never leaves cp/boxes."""
    seen = set()
    while True:
        node, env = _hop(node, env)
        if is_box(node):
            return True
        if node.kind != "cp":
            return False
        if id(node) in seen:
            return True
        seen.add(id(node))
        node = node.kids[1]


def _extract_box(node, env):
    """Fold a box root into a single nwb (or family) spec node."""
    concl = node.concl
    order, index = [], {}

    def intern(call):
        if call not in index:
            index[call] = len(order)
            order.append(call)
        return index[call]

    prefix = []
    seen = {}
    while True:
        node, env = _hop(node, env)
        if is_box(node):
            closed = close_spec(node, env)
            if not prefix:
                return closed
            if closed.kind == "nwb" and isinstance(closed.selector, EventuallyPeriodic):
                base = len(order)
                order.extend(closed.kids)
                sel = closed.selector
                return proofcore.nwb(
                    concl, tuple(order),
                    EventuallyPeriodic(
                        tuple(prefix) + tuple(base + j for j in sel.prefix),
                        tuple(base + j for j in sel.loop)))
            raise NotDecomposable(
                "cp prefix in front of an oracle or family box is not "
                "expressible by the selector forms")
        key = id(node)
        if key in seen:
            t = seen[key]
            return proofcore.nwb(
                concl, tuple(order),
                EventuallyPeriodic(tuple(prefix[:t]), tuple(prefix[t:])))
        seen[key] = len(prefix)
        prefix.append(intern(close_spec(node.kids[0], env)))
        node = node.kids[1]


def decompose(spec, max_nodes=10_000):
    """Split a progressing, finitely expandable spec into base and boxes.

    Returns (base, boxes): base is a finite open derivation with hyp exactly
    at the roots of the maximal boxes, boxes is a list of (address, box spec).
    """
    from pllk import checkers

    rep = proofcore.validate(spec, "pllinf")
    if not rep:
        raise NotDecomposable(str(rep))
    if not checkers.check_finitely_expandable(spec).holds:
        raise NotDecomposable("not finitely expandable")
    if not checkers.check_progressing(spec).holds:
        raise NotDecomposable("not progressing")

    boxes = []
    count = 0

    def build(node, env, addr):
        nonlocal count
        count += 1
        if count > max_nodes:
            raise NotDecomposable("base did not close within the node budget")
        node, env = _hop(node, env)
        if _is_box_root(node, env):
            boxes.append((addr, _extract_box(node, env)))
            return hyp(node.concl)
        kids = tuple(build(k, env, addr + (j + 1,))
                     for j, k in enumerate(node.kids))
        return node.with_kids(kids)

    base = build(spec, {}, ())
    return base, boxes


def regraft(base, boxes):
    """Inverse of decompose: plant the boxes back at their addresses."""
    out = base
    for addr, box in boxes:
        target = proofcore.at(out, addr)
        if target.kind != "hyp" or target.concl != box.concl:
            raise ProofError("regraft target must be a hyp with the box conclusion")
        out = proofcore.replace_at(out, addr, box)
    return out
