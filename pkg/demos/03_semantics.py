"""Walkthrough: relational interpretations and the digging experiment.

Run with  python demos/03_semantics.py
"""

from pllk import corpus, relsem, specs
from pllk.relsem import Web, interp, interp_spec
from pllk.selector import EventuallyPeriodic

w = Web({"X": ("a", "b")})
print("With a two-point base set, the two proofs of N denote:")
print("  zero:", sorted(interp(corpus.zero(), w), key=str))
print("  one: ", len(interp(corpus.one_deriv(), w)), "elements")
print()

w1 = Web({"X": ("a",)})
print("The 0/1 stream denotes prefix multisets (one element per call):")
s = interp_spec(corpus.stream01(), 8, w1, 8)
for t in sorted(s, key=str):
    print("  ", t[0])
print()

print("Cut-elimination leaves interpretations alone; the lightning loop's")
print("approximations all denote the empty relation:")
print("  ", [len(interp(specs.unfold(corpus.dlightning(), k), w1))
             for k in range(6)])
print()

print("Digging has no semantics-preserving cut-elimination: every cut-free")
print("candidate differs from the digging derivation. One candidate:")
inners = [EventuallyPeriodic((), lp) for lp in [(0,), (1,), (0, 1), (1, 0)]]
cand = corpus.digging_candidate(EventuallyPeriodic((), (2,)), inners)
rep = relsem.digging_counterexample(cand, w1)
print("  differ:", rep["differ"], "via", rep["witness_via"])
print("  witness:", rep["witness"][0])
print("  in candidate:", rep["witness_in_candidate"],
      "/ in digging:", rep["witness_in_digging"])
