"""Walkthrough: building proofs, validating them, and the global criteria.

Run with  python demos/01_checking_proofs.py
"""

from pllk import checkers, corpus, proofio, specs
from pllk.proofcore import validate

print("The formula N has two cut-free proofs, zero and one:")
print(" ", proofio.print_proof(corpus.zero()))
print(" ", proofio.print_proof(corpus.one_deriv()))
print("Both validate against the finitary system:",
      bool(validate(corpus.zero(), "pll")),
      bool(validate(corpus.one_deriv(), "pll")))
print()

print("Infinite proofs get finite descriptions. The lightning loop proves")
print("any formula with an endless chain of cuts:")
print(" ", proofio.print_proof(corpus.dlightning()))
print("Its depth-3 approximation (the frontier becomes hyp):")
print(" ", proofio.print_proof(specs.unfold(corpus.dlightning(), 3)))
print()

print("Global criteria separate good loops from bad ones:")
for name in ("dlightning", "exprog", "stream01", "stream01_oracle",
             "nested_tower"):
    s = corpus.build(name)
    wp = checkers.check_weak_progressing(s)
    p = checkers.check_progressing(s)
    fe = checkers.check_finitely_expandable(s)
    reg, wreg = checkers.check_regularity(s)
    print(f"  {name:16s} wp={wp!r:6} p={p!r:6} fe={fe!r:6} "
          f"reg={reg!r:18} wreg={wreg!r}")
print()

print("Thread tracking explains the verdicts. Following the promoted !X of")
print("the weakly-progressing loop upward, the thread dies at a cut:")
t = checkers.threads_from(corpus.example_prog(), ((), 1), bound=6)
print("  steps:", t.steps, "progress points:", t.progress)
