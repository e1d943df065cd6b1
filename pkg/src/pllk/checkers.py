"""Global criteria on coderivation specs: weak progressing, progressing,
finite expandability, regularity and weak regularity.

All criteria are decided on the finite spec graph.  An infinite branch of
the described coderivation eventually lives inside one strongly connected
part of the graph, so branch conditions reduce to conditions on elementary
cycles: weak progressing means every cycle crosses a right premise of a
conditional promotion, finite expandability means no cycle touches a cut or
absorption node (both are exact).  Progressing falls back to a thread-lift
analysis around cycles when the input is not finitely expandable; when the
cycle structure can interleave (threads merging cycles) the checker returns
``unknown`` rather than guess.
"""

from __future__ import annotations

from dataclasses import dataclass

from pllk import proofcore, specs
from pllk.formula import OfCourse, WhyNot
from pllk.proofcore import parents
from pllk.selector import Oracle


@dataclass
class CriterionReport:
    verdict: str  # "holds" | "fails" | "unknown"
    witness: object = None
    bound: int = None

    @property
    def holds(self):
        return self.verdict == "holds"

    @property
    def fails(self):
        return self.verdict == "fails"

    def __repr__(self):
        if self.verdict == "unknown":
            return f"unknown({self.bound})"
        return self.verdict


def holds():
    return CriterionReport("holds")


def fails(witness):
    return CriterionReport("fails", witness=witness)


def unknown(bound):
    return CriterionReport("unknown", bound=bound)


def _cycle_witness(nodes, cyc):
    """A replayable description of an offending cycle."""
    return tuple((nodes[gid].node.kind, lab) for gid, lab, _ in cyc)


def check_weak_progressing(spec):
    """Every infinite branch crosses infinitely many cp right premises."""
    nodes, root = specs.spec_graph(spec)
    for cyc in specs.elementary_cycles(nodes, root):
        if not any(specs.is_tail_edge(nodes, gid, lab) for gid, lab, _ in cyc):
            return fails(_cycle_witness(nodes, cyc))
    return holds()


def check_finitely_expandable(spec):
    """Every branch contains finitely many cut and absorption rules."""
    nodes, root = specs.spec_graph(spec)
    for cyc in specs.elementary_cycles(nodes, root):
        if any(nodes[gid].node.kind in ("cut", "qb") for gid, lab, _ in cyc):
            return fails(_cycle_witness(nodes, cyc))
    return holds()


def _follow(nodes, gid, lab, pos):
    """Track an occurrence along one branch edge; None when the thread dies."""
    node = nodes[gid].node
    if specs.is_box(node):
        # virtual cp: every conclusion occurrence has its parent in the tail
        return pos if lab == ("tail",) else None
    kid = lab[1]
    hits = [p for (j, p) in parents(node, pos) if j == kid]
    return hits[0] if hits else None


def _principal_of(node):
    if node.kind == "cp" or specs.is_box(node):
        return node.i if node.i is not None else proofcore.promotion_shape(node.concl)
    return None


def _cycle_thread(nodes, cyc):
    """Is there a progressing !-thread running once around this cycle?"""
    start = cyc[0][0]
    concl = nodes[start].node.concl
    for p0, f in enumerate(concl):
        if not isinstance(f, OfCourse):
            continue
        pos = p0
        progress = 0
        alive = True
        for gid, lab, _ in cyc:
            node = nodes[gid].node
            pr = _principal_of(node)
            if pr is not None and pos == pr:
                progress += 1
            pos = _follow(nodes, gid, lab, pos)
            if pos is None:
                alive = False
                break
        if alive and pos == p0 and progress >= 1:
            return True
    return False


def _simple_cycle_sccs(nodes, root):
    """True when no reachable node can choose between two in-SCC successors.

    In that case infinite branches cannot interleave distinct cycles, so the
    per-cycle thread test is complete.
    """
    comps = specs._sccs(nodes, root)
    for gid in specs.reachable(nodes, root):
        succs = [t for _, t in nodes[gid].edges if comps[t] == comps[gid]]
        if len(set(succs)) > 1:
            return False
    return True


def check_progressing(spec, bound=64):
    """Every infinite branch carries a progressing !-thread.

    Exact whenever the spec is finitely expandable (there progressing and
    weak progressing coincide); otherwise exact failure detection via the
    cycle thread test, with ``unknown`` when cycles can interleave.
    """
    if check_finitely_expandable(spec).holds:
        return check_weak_progressing(spec)
    wp = check_weak_progressing(spec)
    if wp.fails:
        return wp
    nodes, root = specs.spec_graph(spec)
    for cyc in specs.elementary_cycles(nodes, root):
        if not _cycle_thread(nodes, cyc):
            return fails(_cycle_witness(nodes, cyc))
    if _simple_cycle_sccs(nodes, root):
        return holds()
    return unknown(bound)


def _spec_nodes(spec):
    stack = [spec]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(n.kids)


def check_regularity(spec):
    """(regular, weakly regular) on the spec representation.

    Regular means every box is periodic: eventually periodic selectors and
    periodic families only.  Weakly regular means every box has finite
    support: automatic for listed calls, declared by family entries.
    """
    from pllk import families

    reg = holds()
    wreg = holds()
    for n in _spec_nodes(spec):
        if n.kind == "nwb" and isinstance(n.selector, Oracle):
            status = n.selector.ep_status
            if status == "aperiodic":
                reg = fails(("oracle-selector", n.selector.name))
            elif reg.holds:
                reg = unknown(0)
        if n.kind == "family":
            fam = families.get(n.name)
            if not fam.periodic:
                reg = fails(("family", n.name))
            if not fam.finite_support:
                wreg = fails(("family", n.name))
    return reg, wreg


# ---------------------------------------------------------------------------
# threads

@dataclass
class Thread:
    steps: tuple  # ((address, position), ...)
    polarity: str  # "!" or "?"
    progress: tuple  # indices into steps at cp-principal occurrences


def threads_from(subject, start, bound=64):
    """The unique maximal upward thread from an occurrence, truncated.

    ``subject`` may be an open derivation or a spec (which is unfolded far
    enough to contain the requested stretch).
    """
    addr, pos = tuple(start[0]), start[1]
    if proofcore.is_open_derivation(subject):
        d = subject
    else:
        d = specs.unfold(subject, len(addr) + bound + 2)
    node = proofcore.at(d, addr)
    f = node.concl[pos]
    if isinstance(f, OfCourse):
        polarity = "!"
    elif isinstance(f, WhyNot):
        polarity = "?"
    else:
        raise proofcore.ProofError("thread start must be a modal formula")
    want = OfCourse if polarity == "!" else WhyNot
    steps = [(addr, pos)]
    progress = []
    while len(steps) <= bound:
        node = proofcore.at(d, addr)
        if polarity == "!" and node.kind == "cp" and pos == node.i:
            progress.append(len(steps) - 1)
        ups = parents(node, pos)
        if not ups:
            break
        j, newpos = ups[0]
        newaddr = addr + (j + 1,)
        newnode = proofcore.at(d, newaddr)
        if not isinstance(newnode.concl[newpos], want):
            break
        addr, pos = newaddr, newpos
        steps.append((addr, pos))
    return Thread(tuple(steps), polarity, tuple(progress))
