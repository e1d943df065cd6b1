"""Walkthrough: finite normalization and the productive stream normalizer.

Run with  python demos/02_cut_elimination.py
"""

from pllk import corpus, cutelim, proofio, specs
from pllk.proofcore import hypfree_bar_height

print("A stream of proofs cut against dereliction pops its head.")
print("The height-by-height strategy on a finite approximation:")
tr = cutelim.run_trace(corpus.stream_der_cut(), 10)
for i, (r, d) in enumerate(tr.steps):
    m = cutelim.measure(d)
    print(f"  step {i}: {r.kind:18s} measure=({m.ncp},{m.size},{m.hcut})")
print("  normal form:", proofio.print_proof(cutelim.cf(tr.end)))
print("  (that is exactly the zero proof: the head of the stream)")
print()

print("reduce_stream approximates the infinitary normal form to a height:")
for h in (1, 2, 4, 8):
    out = cutelim.reduce_stream(corpus.stream_abs_cut(), h)
    print(f"  height {h}: size {out.size:3d}, hyp-free bar height "
          f"{hypfree_bar_height(out)}")
print("Successive outputs form a chain in the approximation order.")
print()

print("On a non-weakly-progressing input the normalizer runs out of fuel")
print("and the best approximation is just hyp:")
try:
    cutelim.reduce_stream(corpus.dlightning(), 1)
except cutelim.FuelExhausted as e:
    print("  fuel exhausted; best =", proofio.print_proof(e.best))
