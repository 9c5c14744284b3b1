"""Univariate reconstruction: annihilating operator, its kernel, then the powers.

A planted sum of three 257th powers over F_1543 is handed over as an expanded
polynomial; the pipeline recovers the bases and coefficients.
"""
from powcirc import (
    PowCircuitUni,
    PrimeField,
    UniPoly,
    irreducible_factors,
    kernel_basis,
    reconstruct_univariate,
    solve_annihilator,
)

F = PrimeField(1543)
x = UniPoly.x(F)
d = 257
planted = PowCircuitUni(F, d, [(5, x + 1), (11, x + 40), (900, x + 1000)])
f = planted.expand()
print(f"input: degree {f.degree}, {sum(1 for c in f.coeffs if c)} nonzero coefficients")

order, L = solve_annihilator(f, 3, 1)
print(f"annihilator order {order}; leading coefficient factors:",
      ", ".join(str(phi) for phi in irreducible_factors(L.top, 1)))
print(f"kernel dimension on degree <= {d}: {kernel_basis(L, d).dim}")

found = reconstruct_univariate(f, 3, d, 1)
for a, h in found.terms:
    print(f"  {a.value} * ({h})^{d}")
print("match" if found == planted else "MISMATCH")
