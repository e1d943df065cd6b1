from pllk import checkers, corpus, proofcore, specs
from pllk.formula import OfCourse, WhyNot
from pllk.selector import EventuallyPeriodic, Oracle

MATRIX = {
    # name: (wp, p, fe, reg, wreg)
    "dlightning": ("fails", "fails", "fails", "holds", "holds"),
    "dquest": ("fails", "fails", "fails", "holds", "holds"),
    "exprog": ("holds", "fails", "fails", "holds", "holds"),
    "stream01": ("holds", "holds", "holds", "holds", "holds"),
    "stream01_oracle": ("holds", "holds", "holds", "fails", "holds"),
    "nested_tower": ("holds", "holds", "holds", "fails", "fails"),
}


def verdicts(spec):
    wp = checkers.check_weak_progressing(spec)
    p = checkers.check_progressing(spec)
    fe = checkers.check_finitely_expandable(spec)
    reg, wreg = checkers.check_regularity(spec)
    return wp, p, fe, reg, wreg


def test_criterion_matrix():
    for name, expected in MATRIX.items():
        got = tuple(r.verdict for r in verdicts(corpus.build(name)))
        assert got == expected, (name, got, expected)


def test_progressing_implies_weak_progressing_on_corpus():
    for name in corpus.CORPUS:
        s = corpus.build(name)
        if corpus.system_of(name) not in ("pllinf", "opllinf", "mellinf"):
            continue
        wp, p, *_ = verdicts(s)
        if p.holds:
            assert wp.holds, name


def test_regular_implies_weakly_regular_on_corpus():
    for name in corpus.CORPUS:
        s = corpus.build(name)
        reg, wreg = checkers.check_regularity(s)
        if reg.holds:
            assert wreg.holds, name


def test_progressing_equals_wp_under_finite_expandability():
    for name in ("stream01", "stream01_oracle", "nested_tower", "zero", "abs"):
        s = corpus.build(name)
        if checkers.check_finitely_expandable(s).holds:
            assert (checkers.check_progressing(s).verdict
                    == checkers.check_weak_progressing(s).verdict)


def test_unknown_regularity_for_unflagged_oracle():
    s = corpus.stream01(Oracle("collatz-parity"))
    reg, wreg = checkers.check_regularity(s)
    assert reg.verdict == "unknown"
    assert wreg.holds


def test_wp_witness_replays():
    # the offending cycle, unfolded three times, shows a stretch of branch
    # with no cp right premise at all
    for name in ("dlightning", "dquest"):
        rep = checkers.check_weak_progressing(corpus.build(name))
        assert rep.fails
        kinds = [k for k, _ in rep.witness]
        assert "cp" not in kinds and "nwb" not in kinds
        u = specs.unfold(corpus.build(name), 3 * len(rep.witness) + 2)
        # the single infinite branch of these loops has no cp anywhere
        assert all(n.kind != "cp" for _, n in proofcore.iter_nodes(u))


def test_fe_witness_replays():
    rep = checkers.check_finitely_expandable(corpus.example_prog())
    assert rep.fails
    assert any(k == "cut" for k, _ in rep.witness)
    u = specs.unfold(corpus.example_prog(), 12)
    cuts = sum(1 for _, n in proofcore.iter_nodes(u) if n.kind == "cut")
    assert cuts >= 3  # repeats along the unfolded cycle


def test_wp_holds_bounded_form():
    # every depth-32 branch of the unfolding crosses a cp right premise
    # within every window of 16 steps
    for name in ("stream01", "nested_tower"):
        u = specs.unfold(corpus.build(name), 32)

        def branches(node, addr):
            if not node.kids:
                yield addr, node
            for j, kid in enumerate(node.kids):
                yield from branches(kid, addr + (j + 1,))

        for addr, leaf in branches(u, ()):
            if len(addr) < 32 or leaf.kind != "hyp":
                continue
            for start in range(0, 32 - 16 + 1):
                hit = any(
                    proofcore.at(u, addr[:start + j]).kind == "cp"
                    and addr[start + j] == 2
                    for j in range(16))
                assert hit, f"branch {addr} window {start} lacks cp right premises"


def test_thread_progress_on_stream():
    s = corpus.stream01()
    t = checkers.threads_from(s, ((), 0), bound=6)
    assert t.polarity == "!"
    assert len(t.progress) >= 3  # the main branch promotes at every step
    assert all(addr == (2,) * i for i, (addr, _) in enumerate(t.steps))


def test_thread_dies_at_cut_formula():
    # the promoted !X of the weakly-progressing loop is consumed by a cut:
    # following it upward ends at the axiom above the cut
    t = checkers.threads_from(corpus.example_prog(), ((), 1), bound=6)
    assert t.polarity == "!"
    assert len(t.steps) == 3
    assert t.steps[-1][0] == (2, 2)


def test_thread_from_cut_formula_goes_up_only():
    # the promoted formula at the loop's inner cp is a cut formula: a thread
    # started there never sees anything below, only the stretch above
    u = specs.unfold(corpus.example_prog(), 8)
    node = proofcore.at(u, (2, 1))
    assert node.kind == "cp"
    t = checkers.threads_from(u, ((2, 1), 1), bound=8)
    assert t.steps[0] == ((2, 1), 1)
    assert all(len(a) >= 2 for a, _ in t.steps)


def test_thread_requires_modal_start():
    import pytest

    with pytest.raises(proofcore.ProofError):
        checkers.threads_from(corpus.zero(), ((), 0), bound=2)
