"""Walkthrough: the four translations and the MELL simulation.

Run with  python demos/04_translations.py
"""

from pllk import corpus, cutelim, proofio, translate

print("Finitary promotion unpacks into a one-call box:")
print("  fp:", proofio.print_proof(corpus.fp_ax()))
box = translate.pll_to_pllinf(corpus.fp_ax())
print("  box:", proofio.print_proof(box))
print("  and finitization folds it back:",
      translate.finitize(box) == corpus.fp_ax())
print()

print("A weakly progressing stream collapses to its first call:")
fin = translate.finitize(corpus.stream01())
print("  ", proofio.print_proof(fin))
print()

print("The MELL image of absorption is contraction over dereliction:")
print("  ", proofio.print_proof(translate.pll_to_mell(corpus.dabs())))
print()

print("Each promotion step of the finitary system replays in MELL; the")
print("measure (m, d) decreases along the trace:")
for name in ("pll_fpfp", "pll_fpqw", "pll_fpqb"):
    d = corpus.build(name)
    r = [r for r in cutelim.redexes(d) if r.kind.startswith("fp")][0]
    tr = translate.simulate_square(d, r)
    kinds = [rr.kind for rr, _ in tr.steps]
    print(f"  {name}: {r.kind} replays as {kinds}")
