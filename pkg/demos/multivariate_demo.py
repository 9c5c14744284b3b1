"""Multivariate reconstruction through an evaluation oracle.

The planted circuit is only ever evaluated; the result is checked by full
expansion.  Uses the fast profile, which shrinks set sizes below the proof's
constants and verifies everything exactly.  Takes a few seconds.
"""
import time

from powcirc import PowCircuitMulti, PrimeField, SparsePoly, circuit_oracle, format_poly, reconstruct_multivariate
from powcirc.reconstruct import FAST, MultiStats

F = PrimeField(1481)
x1, x2 = SparsePoly.variable(F, 2, 0), SparsePoly.variable(F, 2, 1)
planted = PowCircuitMulti(F, 2, 82, [(7, x1 + x2.scale(3)), (100, x1.scale(5) + SparsePoly.constant(F, 2, 2))])

oracle = circuit_oracle(planted)
stats = MultiStats()
t0 = time.perf_counter()
found = reconstruct_multivariate(oracle, F, 2, 2, 2, 1, 82, profile=FAST, stats=stats)
print(f"recovered {len(found)} terms in {time.perf_counter() - t0:.1f}s with {oracle.calls} oracle calls")
for c, f in found.terms:
    print(f"  {c} * ({format_poly(f)})^82")
print("expansion matches" if found.expand() == planted.expand() else "MISMATCH")
