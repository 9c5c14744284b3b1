"""Black-box identity testing with the deterministic hitting set.

Builds the hitting set for two-variable circuits with two terms, then asks it
about a circuit that cancels and one that does not.
"""
from powcirc import PrimeField, PowCircuitMulti, SparsePoly, build_hitting_set, circuit_oracle, pit_test
from powcirc.hitting import hitting_set_sizes

n, r, s, d, delta = 2, 2, 2, 3, 1
q, t, m, min_p = hitting_set_sizes(n, r, s, d, delta, "1/2")
F = PrimeField(min_p)
hs = build_hitting_set(F, n, r, s, d, delta)
print(f"field F_{F.p}: {len(hs)} points (q={q}, t={t}, m={m})")

x1, x2 = SparsePoly.variable(F, n, 0), SparsePoly.variable(F, n, 1)
# 8*(x1 + x2)^3 - (2*x1 + 2*x2)^3 is identically zero
cancelling = PowCircuitMulti(F, n, d, [(8, x1 + x2), (F.p - 1, (x1 + x2).scale(2))])
live = PowCircuitMulti(F, n, d, [(2, x1 + x2), (3, x1 + x2.scale(2))])

for name, c in [("cancelling", cancelling), ("live", live)]:
    oracle = circuit_oracle(c)
    print(f"{name:>10}: {pit_test(oracle, hs)}  ({oracle.calls} oracle calls)")
