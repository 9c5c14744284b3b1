"""Deterministic factorisation of univariate polynomials over F_p.

Pipeline: Yun squarefree decomposition, distinct-degree splitting with the
Frobenius map, then equal-degree splitting by a deterministic scan over
shifts c = 0, 1, 2, ...  Nothing here draws random numbers, which costs
time polynomial in p in the worst case.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, UnsupportedParametersError
from .field import FpElem
from .linalg import nullspace
from .poly import UniPoly, derivative, gcd_monic

# shifts tried with (x + c)^((p^i - 1)/2) - 1 before falling back to Berlekamp
_SHIFT_SCAN = 64


@dataclass(frozen=True)
class Factorization:
    unit: FpElem
    factors: tuple  # ((monic irreducible UniPoly, multiplicity), ...)

    def expand(self) -> UniPoly:
        g = UniPoly(self.unit.field, [self.unit.value])
        for phi, m in self.factors:
            g = g * phi ** m
        return g

    @property
    def degree(self):
        return sum(m * phi.degree for phi, m in self.factors)


def _require_char(g: UniPoly):
    if g.is_zero():
        raise DomainError("cannot factor the zero polynomial")
    if g.field.p <= g.degree:
        raise UnsupportedParametersError(
            f"need p > deg(g); got p={g.field.p}, deg={g.degree}"
        )


def squarefree_decomposition(g: UniPoly):
    """[(part, multiplicity), ...] by ascending multiplicity; product of part^mult is monic(g)."""
    _require_char(g)
    f = g.monic()
    if f.degree == 0:
        return []
    one = UniPoly(g.field, [1])
    df = derivative(f)
    a = gcd_monic(f, df)
    b = f.exact_div(a)
    c = df.exact_div(a)
    dd = c - derivative(b)
    out = []
    i = 1
    while b != one:
        a = gcd_monic(b, dd) if not dd.is_zero() else b
        if a.degree > 0:
            out.append((a, i))
        b = b.exact_div(a)
        c = dd.exact_div(a)
        dd = c - derivative(b)
        i += 1
    return out


def _powmod(base: UniPoly, e: int, m: UniPoly) -> UniPoly:
    result = UniPoly(base.field, [1]) % m
    base = base % m
    while e:
        if e & 1:
            result = result * base % m
        e >>= 1
        if e:
            base = base * base % m
    return result


def _distinct_degree(f: UniPoly):
    """Split squarefree monic f into [(product of all degree-i factors, i), ...]."""
    F = f.field
    x = UniPoly.x(F)
    out = []
    h = x % f
    i = 0
    while f.degree >= 2 * (i + 1):
        i += 1
        h = _powmod(h, F.p, f)
        gi = gcd_monic(f, h - x)
        if gi.degree > 0:
            out.append((gi, i))
            f = f.exact_div(gi)
            h = h % f
    if f.degree > 0:
        out.append((f, f.degree))
    return out


def _berlekamp_basis(f: UniPoly):
    """Basis of {v : v^p = v mod f} (as UniPoly) via the Petr-Berlekamp matrix."""
    F = f.field
    n = f.degree
    xp = _powmod(UniPoly.x(F), F.p, f)
    rows = []
    cur = UniPoly(F, [1])
    for _ in range(n):
        col = cur.padded(n)
        rows.append(col)
        cur = cur * xp % f
    # rows[i] = x^{ip} mod f; want v with sum_i v_i (x^{ip} - x^i) = 0
    M = [[(rows[i][j] - (1 if i == j else 0)) for i in range(n)] for j in range(n)]
    return [UniPoly(F, [int(c) for c in v]) for v in nullspace(M, F.p)]


def _split_once(f: UniPoly, i: int):
    """Nontrivial monic factor of f (squarefree, all irreducible factors of degree i)."""
    F = f.field
    p = F.p
    e = (p ** i - 1) // 2
    for c in range(min(p, _SHIFT_SCAN)):
        w = _powmod(UniPoly(F, [c, 1]), e, f) - 1
        if w.is_zero():
            continue
        g = gcd_monic(f, w)
        if 0 < g.degree < f.degree:
            return g
    half = (p - 1) // 2
    for v in _berlekamp_basis(f):
        if v.degree <= 0:
            continue
        for c in range(p):
            vc = v + c
            g = gcd_monic(f, vc)
            if 0 < g.degree < f.degree:
                return g
            w = _powmod(vc, half, f) - 1
            if not w.is_zero():
                g = gcd_monic(f, w)
                if 0 < g.degree < f.degree:
                    return g
    raise DomainError("equal-degree splitting failed; input was not squarefree of uniform degree")


def _equal_degree(f: UniPoly, i: int):
    if f.degree == i:
        return [f]
    g = _split_once(f, i)
    return _equal_degree(g, i) + _equal_degree(f.exact_div(g), i)


def factor_key(phi: UniPoly):
    return (phi.degree, phi.coeffs)


def factor_univariate(g: UniPoly) -> Factorization:
    """Complete factorisation into monic irreducibles, canonically ordered."""
    _require_char(g)
    unit = g.coeff(g.degree)
    found = []
    for part, mult in squarefree_decomposition(g):
        for block, i in _distinct_degree(part):
            for phi in _equal_degree(block, i):
                found.append((phi, mult))
    found.sort(key=lambda t: factor_key(t[0]))
    return Factorization(unit, tuple(found))


def irreducible_factors(g: UniPoly, max_degree=None):
    """Distinct monic irreducible factors of g, canonically ordered, optionally degree-capped."""
    fs = [phi for phi, _ in factor_univariate(g).factors]
    if max_degree is not None:
        fs = [phi for phi in fs if phi.degree <= max_degree]
    return fs


def is_irreducible(g: UniPoly) -> bool:
    if g.degree <= 0:
        return False
    fac = factor_univariate(g)
    return len(fac.factors) == 1 and fac.factors[0][1] == 1
