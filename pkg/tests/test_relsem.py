import json
import pathlib
import random

import pytest

from pllk import corpus, cutelim, proofcore, randgen, relsem, specs
from pllk.formula import OfCourse, Par, Tensor, Var, WhyNot, dual
from pllk.relsem import (
    RMSet,
    RPair,
    STAR,
    Web,
    interp,
    interp_spec,
    interp_trunc,
    mset,
    sort_key,
    weight,
)

W1 = Web({"X": ("a",)})
W2 = Web({"X": ("a", "b")})

GOLDEN = pathlib.Path(__file__).resolve().parent / "golden"


def elements(s):
    return sorted(s, key=lambda t: tuple(sort_key(v) for v in t))


def test_ax_clause():
    d = proofcore.ax(Var("X"))
    got = interp_trunc(d, 1, W2)
    atoms = W2.atoms("X")
    assert got == frozenset({(a, a) for a in atoms})
    assert interp_trunc(d, 0, W2) == frozenset()


def test_hyp_is_empty_at_every_level():
    d = proofcore.hyp((Var("X"), corpus.N))
    for n in range(5):
        assert interp_trunc(d, n, W2) == frozenset()


def test_zero_interpretation():
    got = interp(corpus.zero(), W2)
    expected = frozenset(
        {(RPair(RMSet(()), RPair(a, a)),) for a in W2.atoms("X")})
    assert got == expected


def test_one_interpretation():
    got = interp(corpus.one_deriv(), W2)
    expected = set()
    for x in W2.atoms("X"):
        for y in W2.atoms("X"):
            expected.add((RPair(mset([RPair(x, y)]), RPair(x, y)),))
    assert got == frozenset(expected)


def test_lightning_approximations_empty():
    for k in range(9):
        u = specs.unfold(corpus.dlightning(), k)
        assert interp(u, W2) == frozenset()


def test_stream_interpretation_contents():
    s8 = interp_spec(corpus.stream01(), 8, W1, 8)
    x0 = next(iter(interp(corpus.zero(), W1)))[0]
    x1 = next(iter(interp(corpus.one_deriv(), W1)))[0]
    assert (RMSet(()),) in s8
    assert (mset([x0]),) in s8
    assert (mset([x0, x1]),) in s8
    assert (mset([x0, x1, x0]),) in s8
    assert (mset([x1]),) not in s8
    assert (mset([x0, x0]),) not in s8


def test_trunc_monotone_in_level_and_depth():
    for name in ("stream01", "stream_der_cut", "nested_tower"):
        s = corpus.build(name)
        prev = frozenset()
        for n in range(0, 8, 2):
            cur = interp_spec(s, n, W1, 6)
            assert prev <= cur
            prev = cur
        prev = frozenset()
        for k in range(0, 8, 2):
            cur = interp_spec(s, 6, W1, k)
            assert prev <= cur
            prev = cur


def test_monotone_under_approximation_order():
    rng = random.Random(19)
    web = Web({"X": ("a", "b"), "Y": ("u",)})
    for _ in range(60):
        d = randgen.rand_open_derivation(rng, max_nodes=10)
        addrs = [a for a, _ in proofcore.iter_nodes(d)]
        pruned = proofcore.prune(d, rng.sample(addrs, min(2, len(addrs))))
        for n in (2, 4):
            assert interp_trunc(pruned, n, web) <= interp_trunc(d, n, web)


def test_cp_base_clause():
    u = specs.unfold(corpus.stream01(), 2)
    got = interp_trunc(u, 1, W1)
    assert (RMSet(()),) in got


def test_digging_separates_at_both_cardinalities():
    # one atom suffices; two atoms separate as well
    from pllk.selector import EventuallyPeriodic

    inners = [EventuallyPeriodic((), lp) for lp in [(0,), (1,), (0, 1), (1, 0)]]
    cand = corpus.digging_candidate(EventuallyPeriodic((), (0,)), inners)
    for web, caps in ((W1, (12, 10, 6)), (W2, (10, 8, 4))):
        rep = relsem.digging_counterexample(cand, web, caps=caps)
        assert rep["differ"], (web.bases, rep)


def test_exchange_permutes_components():
    from pllk.formula import ONE

    d0 = proofcore.qw((WhyNot(Var("X")), ONE), 0, proofcore.one())
    e = proofcore.ex((ONE, WhyNot(Var("X"))), 0, d0)
    assert interp(d0, W1) == frozenset({(RMSet(()), STAR)})
    assert interp(e, W1) == frozenset({(STAR, RMSet(()))})


def test_step_invariance_simple_steps():
    y = Var("Y")
    web = Web({"X": ("a", "b"), "Y": ("u", "v")})
    d = proofcore.mk_cut((dual(y), y), y, proofcore.ax(y), proofcore.ax(dual(y)))
    assert relsem.check_step_invariance(d, cutelim.redexes(d)[0], web) == "equal"
    botnode = proofcore.bot((proofcore.BOT, proofcore.ONE), 0, proofcore.one())
    d2 = proofcore.mk_cut((proofcore.ONE,), proofcore.ONE, proofcore.one(), botnode)
    assert relsem.check_step_invariance(d2, cutelim.redexes(d2)[0], web) == "equal"


def test_step_invariance_cp_qb_capped():
    d = specs.unfold(corpus.stream_der_cut(), 8)
    r = cutelim.redexes(d)[0]
    assert r.kind == "cp-qb"
    assert relsem.check_step_invariance(d, r, W2, n=9, mset_cap=8) == "equal"


def test_interp_requires_stabilization():
    # a promotion axiom denotes an infinite web: interp refuses rather than
    # silently truncating
    d = proofcore.ax(OfCourse(Var("X")))
    with pytest.raises(proofcore.ProofError):
        interp(d, W1)
    assert len(interp_trunc(d, 3, W1)) > 0


def test_dabs_golden():
    got = interp_trunc(corpus.dabs(), 8, W1, mset_cap=4)
    path = GOLDEN / "dabs_interp.json"
    payload = [[_json(v) for v in t] for t in elements(got)]
    expected = json.loads(path.read_text())
    assert payload == expected


def test_dabs_golden_matches_naive_oracle():
    got = interp_trunc(corpus.dabs(), 8, W1, mset_cap=4)
    naive = naive_interp(corpus.dabs(), 8, W1, 4)
    assert got == naive


def _json(v):
    if isinstance(v, relsem.RAtom):
        return v.name
    if isinstance(v, relsem.RStar):
        return "*"
    if isinstance(v, RPair):
        return ["pair", _json(v.left), _json(v.right)]
    if isinstance(v, RMSet):
        return ["mset"] + [_json(x) for x in v.items]
    raise TypeError(v)


# -- independent brute-force evaluator (kept deliberately naive) -------------

def naive_values(f, web, cap):
    from pllk.formula import DualVar, _Bot, _One

    if isinstance(f, (Var, DualVar)):
        return [relsem.RAtom(str(v)) for v in web.bases[f.name]]
    if isinstance(f, (_One, _Bot)):
        return [STAR]
    if isinstance(f, (Tensor, Par)):
        return [RPair(a, b) for a in naive_values(f.left, web, cap)
                for b in naive_values(f.right, web, cap)
                if weight(a) + weight(b) <= cap]
    base = naive_values(f.body, web, cap)
    out = [[]]
    for _ in range(cap):
        out = out + [xs + [e] for xs in out for e in base
                     if len(xs) + 1 + sum(map(weight, xs)) + weight(e) <= cap]
    return sorted({mset(xs) for xs in out}, key=sort_key)


def naive_interp(d, n, web, cap):
    if n <= 0 or d.kind == "hyp":
        return frozenset()
    prem = [naive_interp(k, n - 1, web, cap) for k in d.kids]
    out = set()
    k = d.kind
    if k == "ax":
        out = {(x, x) for x in naive_values(d.f, web, cap)}
    elif k == "one":
        out = {(STAR,)}
    elif k == "bot":
        out = {t[:d.i] + (STAR,) + t[d.i:] for t in prem[0]}
    elif k == "qw":
        out = {t[:d.i] + (RMSet(()),) + t[d.i:] for t in prem[0]}
    elif k == "par":
        out = {t[:d.i] + (RPair(t[d.i], t[d.i + 1]),) + t[d.i + 2:]
               for t in prem[0]}
    elif k == "qb":
        ip = d.i if d.i < d.a else d.i + 1
        for t in prem[0]:
            grown = mset((t[d.a],) + t[ip].items)
            if weight(grown) <= cap:
                rest = t[:d.a] + t[d.a + 1:]
                out.add(rest[:d.i] + (grown,) + rest[d.i + 1:])
    elif k == "tens":
        for u in prem[0]:
            for v in prem[1]:
                t = []
                for e in d.src:
                    if e is None:
                        t.append(RPair(u[d.a], v[d.b]))
                    else:
                        t.append(u[e[1]] if e[0] == 0 else v[e[1]])
                out.add(tuple(t))
    elif k == "cut":
        for u in prem[0]:
            for v in prem[1]:
                if u[d.ell] == v[d.r]:
                    out.add(tuple(u[j] if s == 0 else v[j] for s, j in d.src))
    else:
        raise AssertionError(k)
    return frozenset(out)
