import random

import pytest

from pllk import corpus, cutelim, proofcore, randgen, specs
from pllk.cutelim import (
    FuelExhausted,
    Redex,
    apply_step,
    cf,
    hbh_step,
    measure,
    normalize_finite,
    redexes,
    reduce_stream,
    run_trace,
)
from pllk.formula import BOT, ONE, Var, dual
from pllk.proofcore import at, hyp, hypfree_bar_height, iter_nodes, validate


def one_bot_cut():
    botnode = proofcore.bot((BOT, ONE), 0, proofcore.one())
    return proofcore.mk_cut((ONE,), ONE, proofcore.one(), botnode)


def test_measure_examples():
    assert measure(corpus.zero()).as_tuple() == (0, 4, 0)
    assert measure(hyp((Var("X"),))).as_tuple() == (0, 1, 0)
    assert measure(one_bot_cut()).as_tuple() == (0, 4, 4)


def test_redexes_examples():
    y = Var("Y")
    d = proofcore.mk_cut((dual(y), y), y, proofcore.ax(y), proofcore.ax(dual(y)))
    rs = redexes(d)
    assert len(rs) == 1 and rs[0].kind == "ax"

    blocked = proofcore.mk_cut((dual(y), y), y, hyp((y, dual(y))),
                               proofcore.ax(dual(y)))
    assert redexes(blocked) == []

    u = specs.unfold(corpus.stream_der_cut(), 3)
    rs = redexes(u)
    assert rs[0].kind == "cp-qb" and rs[0].addr == ()


def test_redex_order_is_height_then_address():
    rng = random.Random(2)
    for _ in range(50):
        d = randgen.rand_open_derivation(rng, max_nodes=12)
        rs = redexes(d)
        keys = [(len(r.addr), r.addr) for r in rs]
        assert keys == sorted(keys)


def test_apply_ax_step_returns_other_premise():
    y = Var("Y")
    d = proofcore.mk_cut((dual(y), y), y, proofcore.ax(y), proofcore.ax(dual(y)))
    out = apply_step(d, redexes(d)[0])
    assert out == proofcore.ax(dual(y))


def test_apply_one_bot():
    d = one_bot_cut()
    nxt, r = hbh_step(d)
    assert r.kind == "one-bot"
    assert nxt == proofcore.one()


def test_apply_preserves_conclusion_and_validity():
    rng = random.Random(13)
    for _ in range(200):
        d = randgen.rand_open_derivation(rng, max_nodes=12)
        for r in redexes(d):
            out = apply_step(d, r)
            assert out.concl == d.concl
            assert validate(out, "opllinf"), r


def test_stale_redex():
    d = one_bot_cut()
    with pytest.raises(cutelim.StaleRedex):
        apply_step(d, Redex((), "ax", "L"))


def test_hbh_picks_minimal_height():
    rng = random.Random(23)
    seen_multi = 0
    for _ in range(200):
        d = randgen.rand_open_derivation(rng, max_nodes=12)
        rs = redexes(d)
        if len(rs) > 1:
            seen_multi += 1
            step = hbh_step(d)
            assert step[1] == rs[0]
            assert (len(rs[0].addr), rs[0].addr) == min(
                (len(r.addr), r.addr) for r in rs)
    assert seen_multi > 10


def test_normalize_examples():
    assert normalize_finite(one_bot_cut()) == proofcore.one()
    y = Var("Y")
    d = proofcore.mk_cut((dual(y), y), y, proofcore.ax(y), proofcore.ax(dual(y)))
    assert normalize_finite(d) == proofcore.ax(dual(y))


def test_normalize_der_cut_grafts_zero():
    # popping the head of the 0/1 stream against dereliction gives exactly
    # the zero proof
    u = specs.unfold(corpus.stream_der_cut(), 6)
    nf = normalize_finite(u)
    assert cf(nf) == corpus.zero()


def test_normal_means_hyp_blocked():
    # every cut of a normal form is blocked by a hyp premise, possibly
    # through a spine of cuts that are themselves blocked
    def blocked(n):
        return any(k.kind == "hyp" or (k.kind == "cut" and blocked(k))
                   for k in n.kids)

    rng = random.Random(31)
    direct = nested = 0
    for _ in range(150):
        d = randgen.rand_open_derivation(rng, max_nodes=11)
        nf = normalize_finite(d)
        for _, n in iter_nodes(nf):
            if n.kind == "cut":
                assert blocked(n)
                if any(k.kind == "hyp" for k in n.kids):
                    direct += 1
                else:
                    nested += 1
    assert direct > 20


def test_cf_examples():
    d = one_bot_cut()
    assert cf(d) == hyp((ONE,))
    assert cf(corpus.zero()) == corpus.zero()
    y = Var("Y")
    inner = proofcore.mk_cut((dual(y), y), y, proofcore.ax(y),
                             proofcore.ax(dual(y)))
    wrapped = proofcore.par((proofcore.Par(dual(y), y),), 0, inner)
    assert cf(wrapped) == proofcore.par((proofcore.Par(dual(y), y),), 0,
                                        hyp((dual(y), y)))


def test_cf_greatest_cutfree_approximation():
    rng = random.Random(41)
    for _ in range(150):
        d = randgen.rand_open_derivation(rng, max_nodes=11)
        c = cf(d)
        assert proofcore.approx_leq(c, d)
        assert all(n.kind != "cut" for _, n in iter_nodes(c))
        # pruning at every cut plus random extra nodes is a cut-free
        # approximation, hence below the greatest one
        addrs = [a for a, n in iter_nodes(d) if n.kind == "cut"]
        extra = [a for a, _ in iter_nodes(d)]
        addrs += rng.sample(extra, min(2, len(extra)))
        other = proofcore.prune(d, addrs)
        if all(n.kind != "cut" for _, n in iter_nodes(other)):
            assert proofcore.approx_leq(other, c)


def test_reduce_stream_lightning_exhausts():
    with pytest.raises(FuelExhausted) as err:
        reduce_stream(corpus.dlightning(), 1)
    assert err.value.best == hyp((Var("X"),))


def test_reduce_stream_cutfree_box():
    out = reduce_stream(corpus.stream01(), 3)
    assert proofcore.approx_leq(out, specs.unfold(corpus.stream01(), 12))
    assert hypfree_bar_height(out) > 3


def test_reduce_stream_abs_cut_grafts_head():
    out = reduce_stream(corpus.stream_abs_cut(), 4)
    assert hypfree_bar_height(out) > 4
    assert all(n.kind != "cut" for _, n in iter_nodes(out))
    # the popped zero call appears inside the prefix
    assert any(n == corpus.zero() for _, n in iter_nodes(out))


def test_reduce_stream_monotone_in_height():
    for name in corpus.STREAM_CUTS:
        s = corpus.build(name)
        prev = None
        for h in (1, 2, 4, 8):
            out = reduce_stream(s, h)
            if prev is not None:
                assert proofcore.approx_leq(prev, out)
            prev = out


def test_run_trace_examples():
    from pllk.formula import OfCourse, WhyNot

    assert len(run_trace(corpus.zero(), 5)) == 0
    tr = run_trace(one_bot_cut(), 5)
    assert len(tr) == 1 and tr.end == proofcore.one()
    qw_body = proofcore.qw((WhyNot(corpus.DN), ONE), 0, proofcore.one())
    d = proofcore.mk_cut((ONE,), OfCourse(corpus.N), corpus.stream01(), qw_body)
    tr = run_trace(d, 3)
    assert [r.kind for r, _ in tr.steps][0] == "cp-qw"
    assert len(tr) == 1  # then normal


def test_trace_measure_catalog():
    # commutative steps keep (promotions, size) and shrink the cut mass;
    # multiplicative steps keep promotions and shrink size; exponential
    # steps shrink the promotion count; exchange absorption sits with the
    # multiplicative class
    rng = random.Random(77)
    checked = 0
    for _ in range(400):
        d = randgen.rand_open_derivation(rng, max_nodes=12)
        tr = run_trace(d, 50)
        cur = tr.start
        for r, nxt in tr.steps:
            checked += 1
            assert catalog_ok(cur, r, nxt), (r, measure(cur), measure(nxt))
            cur = nxt
    assert checked > 300


def catalog_ok(prev, r, nxt):
    m0, m1 = measure(prev), measure(nxt)
    kind = r.kind
    if kind in ("cp-cp", "cp-qw", "cp-qb", "fp-fp", "fp-qw"):
        return m1.ncp < m0.ncp
    if kind in ("ax", "one-bot", "tens-par"):
        return m1.ncp == m0.ncp and m1.size < m0.size
    if kind.startswith("comm"):
        node = at(prev, r.addr)
        u = node.kids[0 if r.orient == "L" else 1]
        if u.kind == "ex":
            return m1.ncp == m0.ncp and m1.size < m0.size
        return (m1.ncp, m1.size) == (m0.ncp, m0.size) and m1.hcut < m0.hcut
    return m1.as_tuple() < m0.as_tuple()


def test_mirrored_promotion_steps():
    # the principal promotion may sit on either premise of the cut
    from pllk.formula import OfCourse, WhyNot

    fpax = corpus.fp_ax()
    DX = corpus.DX
    m = proofcore.mk_cut((WhyNot(DX), OfCourse(corpus.X)), WhyNot(DX),
                         fpax, fpax)
    r = redexes(m)[0]
    assert (r.kind, r.orient) == ("fp-fp", "R")
    assert validate(apply_step(m, r), "pll")

    qwn = proofcore.qw((ONE, WhyNot(DX)), 1, proofcore.one())
    m2 = proofcore.mk_cut((ONE, WhyNot(DX)), WhyNot(DX), qwn, fpax)
    r2 = redexes(m2)[0]
    assert (r2.kind, r2.orient) == ("fp-qw", "R")
    out2 = apply_step(m2, r2)
    assert validate(out2, "pll") and out2.concl == m2.concl

    m3 = proofcore.mk_cut((corpus.X, WhyNot(DX)), WhyNot(DX),
                          corpus.dder_body(corpus.X), fpax)
    r3 = redexes(m3)[0]
    assert (r3.kind, r3.orient) == ("fp-qb", "R")
    out3 = apply_step(m3, r3)
    assert validate(out3, "pll") and out3.concl == m3.concl


def test_exhaustive_confluence_height_respecting():
    rng = random.Random(1717)
    for _ in range(300):
        d = randgen.rand_open_derivation(rng, max_nodes=10)
        seen = {d}
        frontier = [d]
        normals = set()
        while frontier:
            cur = frontier.pop()
            rs = cutelim.minimal_redexes(cur)
            if not rs:
                normals.add(cur)
                continue
            for r in rs:
                nxt = apply_step(cur, r)
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        assert len(normals) == 1
