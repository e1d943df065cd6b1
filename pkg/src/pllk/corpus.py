"""Named derivations and specs used throughout the tests and the shipped
corpus files.

The recurring formula is N = ?(X (x) ~X) par (~X par X), which has the two
distinct cut-free proofs ``zero`` and ``one_deriv``.  Around it we build the
stream boxes, the non-progressing loops, the digging cut, and the promotion
redex sources for the MELL simulation.
"""

from __future__ import annotations

from pllk import proofcore
from pllk.formula import DualVar, OfCourse, ONE, Par, Tensor, Var, WhyNot, dual
from pllk.proofcore import (
    ax,
    cp,
    defn,
    fp,
    mk_cut,
    mk_tens,
    nup,
    nwb,
    one,
    par,
    qb,
    qqd,
    qw,
    ref,
)
from pllk.selector import EventuallyPeriodic, Oracle

X = Var("X")
DX = DualVar("X")

# N = !(X -o X) -o (X -o X), in negation normal form
N = Par(WhyNot(Tensor(X, DX)), Par(DX, X))
DN = dual(N)
QTX = WhyNot(Tensor(X, DX))


def zero():
    """Proof of N that weakens the !(X -o X) assumption."""
    body = qw((QTX, DX, X), 0, ax(DX))
    return par((N,), 0, par((QTX, Par(DX, X)), 1, body))


def one_deriv():
    """Proof of N that absorbs one copy of the assumption."""
    t = mk_tens((Tensor(X, DX), DX, X), 0, ax(X), ax(DX))
    body = qb((QTX, DX, X), 0, 1, qw((QTX, Tensor(X, DX), DX, X), 0, t))
    return par((N,), 0, par((QTX, Par(DX, X)), 1, body))


def dabs(a=X):
    """The absorption law  !A -o A (x) !A."""
    return par((Par(WhyNot(dual(a)), Tensor(a, OfCourse(a))),), 0, dabs_body(a))


def dabs_body(a=X):
    da = dual(a)
    t = mk_tens((da, WhyNot(da), Tensor(a, OfCourse(a))), 2, ax(da), ax(WhyNot(da)))
    return qb((WhyNot(da), Tensor(a, OfCourse(a))), 0, 0, t)


def dder(a=X):
    """The dereliction law  !A -o A."""
    return par((Par(WhyNot(dual(a)), a),), 0, dder_body(a))


def dder_body(a=X):
    da = dual(a)
    return qb((WhyNot(da), a), 0, 0, qw((da, WhyNot(da), a), 1, ax(da)))


def dlightning(a=X):
    """The non-progressing cut loop proving any formula."""
    return defn("L", mk_cut((a,), dual(a), ax(dual(a)), ref("L", (a,))))


def dquest():
    """A regular stand-in for the pure-absorption loop.

    Absorbing forever grows the sequent, which no label-exact back-edge can
    express; this variant pops and immediately weakens, giving the same
    criterion profile (weak progressing fails, finite expandability fails).
    """
    s = (WhyNot(WhyNot(X)),)
    inner = qw((WhyNot(X), s[0]), 0, ref("W", s))
    return defn("W", qb(s, 0, 0, inner))


def example_prog():
    """Regular, weakly progressing but not progressing: the promoted !X is
    consumed as a cut formula around the loop."""
    s = (WhyNot(DX), OfCourse(X))
    loop = mk_cut(s, OfCourse(X), ref("R", s), ax(WhyNot(DX)))
    return defn("R", cp(s, ax(DX), loop))


def stream01(sel=None):
    """The box <zero, one, ...> of !N; alternating selector by default."""
    return nwb((OfCourse(N),), (zero(), one_deriv()),
               sel or EventuallyPeriodic((), (0, 1)))


def stream01_oracle():
    return stream01(Oracle("prime-indicator"))


def nested_tower():
    """The box of boxes without finite support (calls <1,...,1,0,0,...>)."""
    return proofcore.family((OfCourse(OfCourse(N)),), "prepend-tower",
                            (one_deriv(), zero()))


def nup01(sel=None):
    return nup((OfCourse(N),), (zero(), one_deriv()),
               sel or EventuallyPeriodic((), (0, 1)))


def nup_oracle():
    return nup01(Oracle("prime-indicator"))


def digging_cut():
    """The digging derivation: the 0/1 stream cut against ??d over ax."""
    s2 = (WhyNot(DN), OfCourse(OfCourse(N)))
    right = qqd(s2, 0, ax(WhyNot(WhyNot(DN))))
    return mk_cut((OfCourse(OfCourse(N)),), OfCourse(N), stream01(), right)


def digging_candidate(outer_sel, inner_sels):
    """A cut-free candidate: an nwb of 0/1 streams."""
    calls = tuple(stream01(s) for s in inner_sels)
    return nwb((OfCourse(OfCourse(N)),), calls, outer_sel)


def stream_id_cut():
    """The 0/1 stream cut against the identity stream transformer."""
    body = nwb((WhyNot(DN), OfCourse(N)), (ax(DN),), EventuallyPeriodic((), (0,)))
    return mk_cut((OfCourse(N),), OfCourse(N), stream01(), body)


def stream_der_cut():
    """The 0/1 stream cut against dereliction: pops the head, yields zero."""
    return mk_cut((N,), OfCourse(N), stream01(), dder_body(N))


def stream_abs_cut():
    """The 0/1 stream cut against absorption: exposes head and tail."""
    return mk_cut((Tensor(N, OfCourse(N)),), OfCourse(N), stream01(),
                  dabs_body(N))


def fp_ax():
    """Functorial promotion over an axiom (PLL)."""
    return fp((WhyNot(DX), OfCourse(X)), ax(DX))


def fp_nested():
    return fp((WhyNot(WhyNot(DX)), OfCourse(OfCourse(X))), fp_ax())


def pll_fpfp():
    """PLL cut whose redex is promotion against promotion."""
    return mk_cut((WhyNot(DX), OfCourse(X)), OfCourse(X), fp_ax(), fp_ax())


def pll_fpqw():
    """PLL cut whose redex is promotion against weakening."""
    body = qw((WhyNot(DX), ONE), 0, one())
    return mk_cut((WhyNot(DX), ONE), OfCourse(X), fp_ax(), body)


def pll_fpqb():
    """PLL cut whose redex is promotion against absorption."""
    return mk_cut((WhyNot(DX), X), OfCourse(X), fp_ax(), dder_body(X))


# name -> (builder, system for validation)
CORPUS = {
    "zero": (zero, "pll"),
    "one": (one_deriv, "pll"),
    "abs": (dabs, "pll"),
    "der": (dder, "pll"),
    "dlightning": (dlightning, "opllinf"),
    "dquest": (dquest, "opllinf"),
    "exprog": (example_prog, "pllinf"),
    "stream01": (stream01, "pllinf"),
    "stream01_oracle": (stream01_oracle, "pllinf"),
    "nested_tower": (nested_tower, "pllinf"),
    "nup01": (nup01, "nupll"),
    "nup_oracle": (nup_oracle, "nupll"),
    "digging_cut": (digging_cut, "mellinf"),
    "stream_id_cut": (stream_id_cut, "pllinf"),
    "stream_der_cut": (stream_der_cut, "pllinf"),
    "stream_abs_cut": (stream_abs_cut, "pllinf"),
    "fp_ax": (fp_ax, "pll"),
    "fp_nested": (fp_nested, "pll"),
    "pll_fpfp": (pll_fpfp, "pll"),
    "pll_fpqw": (pll_fpqw, "pll"),
    "pll_fpqb": (pll_fpqb, "pll"),
}

PLL_CORPUS = [n for n, (_, sys) in CORPUS.items() if sys == "pll"]

# weakly progressing specs with cuts (productivity suite)
STREAM_CUTS = ["stream_id_cut", "stream_der_cut", "stream_abs_cut"]


def build(name):
    return CORPUS[name][0]()


def system_of(name):
    return CORPUS[name][1]
