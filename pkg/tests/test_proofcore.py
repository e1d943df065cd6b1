import random

import pytest

from pllk import corpus, proofcore, randgen, specs
from pllk.formula import OfCourse, Var, dual
from pllk.proofcore import (
    ProofError,
    approx_leq,
    at,
    hyp,
    hypfree_bar_height,
    prune,
    subderivation_at,
    validate,
)


def test_corpus_validates_in_its_system():
    for name in corpus.CORPUS:
        d = corpus.build(name)
        rep = validate(d, corpus.system_of(name))
        assert rep, (name, repr(rep))


def test_validate_rejects_wrong_system():
    assert not validate(corpus.fp_ax(), "pllinf")
    assert not validate(corpus.stream01(), "pll")
    assert validate(corpus.dlightning(), "pllinf")
    assert not validate(specs.unfold(corpus.stream01(), 2), "pllinf")  # hyp
    assert validate(specs.unfold(corpus.stream01(), 2), "opllinf")


def test_validate_reports_offending_address():
    # rebuild the weakening node of zero over the wrong axiom: its own
    # schema no longer matches and the report points at its address
    z = corpus.zero()
    old = at(z, (1, 1))
    broken = proofcore.Node("qw", old.concl, (proofcore.ax(Var("X")),), i=0)
    bad = proofcore.replace_at(z, (1, 1), broken)
    rep = validate(bad, "pll")
    assert not rep
    assert rep.address == (1, 1)


def test_unfold_zero_depth():
    for name in ("dlightning", "stream01"):
        s = corpus.build(name)
        u = specs.unfold(s, 0)
        assert u.kind == "hyp" and u.concl == s.concl


def test_unfold_lightning_shape():
    u = specs.unfold(corpus.dlightning(), 2)
    assert u.kind == "cut"
    assert u.kids[0].kind == "ax"
    assert u.kids[1].kind == "cut"
    assert at(u, (2, 2)).kind == "hyp"


def test_unfold_stream_truncation():
    u = specs.unfold(corpus.stream01(), 1)
    assert u.kind == "cp"
    assert u.kids[0] == hyp((corpus.N,))
    assert u.kids[1] == hyp((OfCourse(corpus.N),))


def test_unfold_monotone():
    rng = random.Random(5)
    for name in ("dlightning", "stream01", "stream_abs_cut", "nested_tower"):
        s = corpus.build(name)
        for h in range(4):
            assert approx_leq(specs.unfold(s, h), specs.unfold(s, h + 1))


def test_prune_examples():
    z = corpus.zero()
    assert prune(z, [()]) == hyp((corpus.N,))
    assert prune(z, []) == z
    u = specs.unfold(corpus.dlightning(), 3)
    pruned = prune(u, [(1,)])
    assert at(pruned, (1,)) == hyp(at(u, (1,)).concl)
    with pytest.raises(ProofError):
        prune(z, [(9, 9)])


def test_prune_conclusion_and_order():
    u = specs.unfold(corpus.stream01(), 3)
    p = prune(u, [(2,), (2, 1)])
    assert p.concl == u.concl
    assert approx_leq(p, u)


def test_approx_leq_basics():
    z = corpus.zero()
    assert approx_leq(hyp(z.concl), z)
    s = corpus.stream01()
    assert specs.approx_leq(specs.unfold(s, 3), s)
    assert not approx_leq(hyp((Var("X"),)), z)


def test_approx_partial_order():
    rng = random.Random(11)
    for _ in range(60):
        d = randgen.rand_open_derivation(rng, max_nodes=9)
        assert approx_leq(d, d)
        cuts = [a for a, n in proofcore.iter_nodes(d) if len(a) >= 1]
        if cuts:
            p = prune(d, [cuts[0]])
            assert approx_leq(p, d)
            if p != d:
                assert not approx_leq(d, p)


def test_subderivation_examples():
    z = corpus.zero()
    assert subderivation_at(z, ()) == z
    assert subderivation_at(z, (1, 1, 1)).kind == "ax"
    u3 = specs.unfold(corpus.dlightning(), 3)
    assert subderivation_at(u3, (2,)) == specs.unfold(corpus.dlightning(), 2)


def test_hypfree_bar_height():
    assert hypfree_bar_height(hyp((Var("X"),))) == 0
    assert hypfree_bar_height(specs.unfold(corpus.dlightning(), 5)) == 5
    assert hypfree_bar_height(corpus.zero()) == 5  # height + 2 when hyp-free


def test_depth_examples():
    assert specs.depth(corpus.zero()) == 0
    assert specs.depth(corpus.stream01()) == 1
    assert specs.depth(corpus.nested_tower()) == 2
    assert specs.depth(corpus.dlightning()) == 0


def test_depth_infinite_on_left_cycle():
    # a graph cycle back into the call of a box nests boxes forever
    import math

    from pllk.formula import WhyNot
    from pllk.proofcore import cp, cut, defn, hyp, mk_cut, ref

    X = Var("X")
    DX = dual(X)
    s = (WhyNot(DX), OfCourse(X))
    inner1 = mk_cut((DX, X, OfCourse(X)), WhyNot(DX), ref("L", s),
                    hyp((OfCourse(X), DX, X)))
    left = mk_cut((DX, X), OfCourse(X), inner1, hyp((WhyNot(DX),)))
    spec = defn("L", cp(s, left, ref("L", s)))
    assert validate(spec, "opllinf")
    assert specs.depth(spec) == math.inf


def test_decompose_stream_is_root_box():
    base, boxes = specs.decompose(corpus.stream01())
    assert base == hyp((OfCourse(corpus.N),))
    assert len(boxes) == 1 and boxes[0][0] == ()
    assert boxes[0][1] == corpus.stream01()


def test_decompose_finite_is_trivial():
    base, boxes = specs.decompose(corpus.zero())
    assert base == corpus.zero() and boxes == []


def test_decompose_cut_of_box():
    s = corpus.stream_der_cut()
    base, boxes = specs.decompose(s)
    assert [a for a, _ in boxes] == [(1,)]
    assert at(base, (1,)).kind == "hyp"
    assert base.kids[1] == s.kids[1]  # the finite body survives


def test_decompose_regraft_roundtrip():
    for name in ("stream01", "stream_der_cut", "stream_id_cut", "exprog"):
        s = corpus.build(name)
        if name == "exprog":
            with pytest.raises(specs.NotDecomposable):
                specs.decompose(s)  # not finitely expandable
            continue
        base, boxes = specs.decompose(s)
        back = specs.regraft(base, boxes)
        for h in (0, 1, 2, 3, 5):
            assert specs.unfold(back, h) == specs.unfold(s, h)


def test_decompose_graph_coded_box():
    # a box written as a cp-cycle folds back into an nwb
    from pllk.proofcore import cp, defn, ref

    s = (OfCourse(corpus.N),)
    g = defn("B", cp(s, corpus.zero(), ref("B", s)))
    base, boxes = specs.decompose(g)
    assert base == hyp(s)
    (addr, box) = boxes[0]
    assert addr == () and box.kind == "nwb"
    for h in (1, 2, 4):
        assert specs.unfold(box, h) == specs.unfold(g, h)


def test_reorder_is_inverse_permutation():
    rng = random.Random(3)
    for _ in range(80):
        d = randgen.rand_open_derivation(rng, max_nodes=9, want_cuts=False)
        n = len(d.concl)
        if n < 2:
            continue
        pi = list(range(n))
        rng.shuffle(pi)
        r = proofcore.reorder(d, pi)
        assert r.concl == tuple(d.concl[j] for j in pi)
        assert r.size == d.size
        assert validate(r, "opllinf")
