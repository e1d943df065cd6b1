"""Translations between the finitary and infinitary systems, and the MELL
simulation of promotion-based cut-elimination steps.

* promotion unpacking into one-call boxes (finitary to infinitary),
* non-uniform promotion into boxes with the same calls and selector,
* finitization of weakly progressing specs (each conditional promotion
  collapses to a functorial one over its first call),
* the MELL image (absorption becomes contraction over dereliction,
  functorial promotion becomes MELL promotion over a dereliction chain),
* MELL reduction with two extra permutation steps that push derelictions
  down, and the search that replays one PLL step as a MELL trace.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from pllk import checkers, cutelim, proofcore, specs
from pllk.cutelim import Redex, Trace
from pllk.proofcore import ProofError, insert, iter_nodes, replace
from pllk.selector import EventuallyPeriodic


class NotWeaklyProgressing(Exception):
    pass


class SimulationFailed(Exception):
    def __init__(self, message, divergence=None):
        super().__init__(message)
        self.divergence = divergence


def pll_to_pllinf(d):
    """Unpack each functorial promotion into a one-call box."""
    rep = proofcore.validate(d, "pll")
    if not rep:
        raise ProofError(f"not a PLL derivation: {rep}")
    return _unpack(d)


def _unpack(node):
    if node.kind == "fp":
        return proofcore.nwb(node.concl, (_unpack(node.kids[0]),),
                             EventuallyPeriodic((), (0,)))
    if not node.kids:
        return node
    return node.with_kids(tuple(_unpack(k) for k in node.kids))


def nupll_to_pllinf(d):
    """Non-uniform promotion becomes a box with the same calls and selector."""
    rep = proofcore.validate(d, "nupll")
    if not rep:
        raise ProofError(f"not a nuPLL derivation: {rep}")

    def go(node):
        if node.kind == "nup":
            return proofcore.nwb(node.concl,
                                 tuple(go(c) for c in node.kids),
                                 node.selector)
        if not node.kids:
            return node
        return node.with_kids(tuple(go(k) for k in node.kids))

    return go(d)


def finitize(spec, max_nodes=100_000):
    """Collapse a weakly progressing spec to a finite PLL derivation.

    Each conditional promotion keeps only its left premise (the stream's
    first call), under a functorial promotion; weak progressing bounds the
    promotion-free stretches, so the recursion terminates.
    """
    if not checkers.check_weak_progressing(spec).holds:
        raise NotWeaklyProgressing(str(spec))
    budget = [max_nodes]

    def go(node, env):
        budget[0] -= 1
        if budget[0] < 0:
            raise NotWeaklyProgressing("finitization did not close")
        node, env = specs._hop(node, env)
        if specs.is_box(node):
            return proofcore.fp(node.concl, go(specs.box_call(node, 0), env))
        if node.kind == "cp":
            return proofcore.fp(node.concl, go(node.kids[0], env))
        if node.kind == "nup":
            return proofcore.fp(node.concl,
                                go(node.kids[node.selector.at(0)], env))
        if not node.kids:
            return node
        return node.with_kids(tuple(go(k, env) for k in node.kids))

    return go(spec, {})


# ---------------------------------------------------------------------------
# PLL to MELL

def pll_to_mell(d):
    rep = proofcore.validate(d, "pll")
    if not rep:
        raise ProofError(f"not a PLL derivation: {rep}")
    return _to_mell(d)


def _to_mell(node):
    if node.kind == "qb":
        kid = _to_mell(node.kids[0])
        s, i, a = node.concl, node.i, node.a
        inner = proofcore.qd(insert(s, a, s[i]), a, kid)
        return proofcore.qc(s, i, a, inner)
    if node.kind == "fp":
        kid = _to_mell(node.kids[0])
        s = node.concl
        p = node.i
        seq = list(proofcore.strip_promotion(s, p))
        cur = kid
        for kpos in sorted(j for j in range(len(s)) if j != p):
            seq[kpos] = s[kpos]
            cur = proofcore.qd(tuple(seq), kpos, cur)
        return proofcore.bp(s, cur)
    if not node.kids:
        return node
    return node.with_kids(tuple(_to_mell(k) for k in node.kids))


# ---------------------------------------------------------------------------
# MELL reduction

def mell_redexes(d):
    """Every applicable step everywhere: all cut steps (not only the one the
    deterministic strategy would take) plus the dereliction-lowering
    permutation redexes."""
    out = []
    for addr, n in iter_nodes(d):
        if n.kind == "cut":
            for kind, orient in cutelim.classify_all(n):
                out.append(Redex(addr, kind, orient))
        elif n.kind == "qc" and n.kids[0].kind == "qd":
            u = n.kids[0]
            copies = {n.i if n.i < n.a else n.i + 1, n.a}
            if u.i not in copies:
                out.append(Redex(addr, "qc-qd", "L"))
    out.sort(key=lambda r: (len(r.addr), r.addr))
    return out


def mell_step(d, r):
    """Apply one standard or additional MELL step."""
    if r.kind != "qc-qd":
        return cutelim.apply_step(d, r)
    node = proofcore.at(d, r.addr)
    if node.kind != "qc" or node.kids[0].kind != "qd":
        raise cutelim.StaleRedex(f"{r} does not match the tree")
    u = node.kids[0]
    s, i, a = node.concl, node.i, node.a
    jd = u.i if u.i < a else u.i - 1  # the derelicted position down in s
    inner_concl = replace(s, jd, u.kids[0].concl[u.i])
    inner = proofcore.qc(inner_concl, i, a, u.kids[0])
    return proofcore.replace_at(d, r.addr, proofcore.qd(s, jd, inner))


def measure_mell(d):
    """Lexicographic MELL measure: (box-vs-contraction mass, boxes, size,
    cut mass) then the total height of dereliction rules.

    The first component makes box duplication by contraction decrease; the
    last separates the additional permutation steps, which only lower
    derelictions.
    """
    qcw = nbp = hcut = 0
    dsum = 0
    for addr, n in iter_nodes(d):
        if n.kind == "bp":
            nbp += 1
        elif n.kind == "qd":
            dsum += len(addr)
        elif n.kind == "cut":
            hcut += n.size
            kinds = {n.kids[0].kind, n.kids[1].kind}
            if kinds == {"bp", "qc"}:
                box = n.kids[0] if n.kids[0].kind == "bp" else n.kids[1]
                qcw += box.size
    return ((qcw, nbp, d.size, hcut), dsum)


def simulate_square(d, r, max_steps=50, max_states=200_000):
    """Replay one PLL promotion step as a MELL reduction trace.

    Searches breadth-first from the translation of ``d`` for the translation
    of the reduced derivation, using only :func:`mell_step`.
    """
    if not r.kind.startswith("fp"):
        raise ValueError("simulate_square expects an fp-based redex")
    source = pll_to_mell(d)
    target = pll_to_mell(cutelim.apply_step(d, r))
    if source == target:
        return Trace(source, ())
    limit = max(source.size, target.size) + 10
    seen = {source: None}
    frontier = deque([source])
    states = 0
    while frontier:
        cur = frontier.popleft()
        depth = _depth_of(seen, cur)
        if depth >= max_steps:
            continue
        for rx in mell_redexes(cur):
            try:
                nxt = mell_step(cur, rx)
            except ProofError:
                continue
            if nxt.size > limit or nxt in seen:
                continue
            seen[nxt] = (cur, rx)
            if nxt == target:
                return _trace_from(seen, source, nxt)
            states += 1
            if states > max_states:
                raise SimulationFailed("state budget exhausted",
                                       divergence=cur)
            frontier.append(nxt)
    raise SimulationFailed("target unreachable", divergence=source)


def _depth_of(seen, node):
    depth = 0
    cur = node
    while seen[cur] is not None:
        cur = seen[cur][0]
        depth += 1
    return depth


def _trace_from(seen, source, end):
    steps = []
    cur = end
    while seen[cur] is not None:
        prev, rx = seen[cur]
        steps.append((rx, cur))
        cur = prev
    steps.reverse()
    return Trace(source, tuple(steps))
