"""Recovering a sparse polynomial after a quarter of its evaluations are lost.

The robust set is listed block by block; the adversary here deletes whole
blocks, which is the hardest shape for the decoder.
"""
import random

from powcirc import PrimeField, SparsePoly, format_poly, build_robust_set, robust_decode

F = PrimeField(10007)
rs = build_robust_set(F, 2, 2, 1, "1/4")
secret = SparsePoly(F, 2, {(1, 0): 17, (0, 1): 4242})
print(f"robust set: {len(rs)} points, q={rs.q}, {rs.a_size} abscissae per block")

rng = random.Random(0)
budget = len(rs) // 4
erased, used = set(), 0
for k in rng.sample(range(1, rs.q), rs.q - 1):
    if used + rs.a_size > budget:
        break
    erased.add((k, rng.randrange(rs.n + 1)))
    used += rs.a_size


class Survivors:
    def get(self, tag, default=None):
        blk = 0 if tag.__class__.__name__ == "Plain" else tag.j
        if (tag.k, blk) in erased:
            return default
        return secret.evaluate(rs.point(tag)).value


print(f"erased {used} points ({len(erased)} whole blocks, one per k)")
found = robust_decode(rs, Survivors())
print(f"decoded: {format_poly(found)}")
print("match" if found == secret else "MISMATCH")
