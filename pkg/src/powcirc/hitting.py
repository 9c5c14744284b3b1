"""Explicit hitting set for sums of powers of sparse polynomials, and a PIT driver.

For k = 1..t the set contains the points Psi_{k,q}[alpha] for the first m
residues alpha = 0..m-1.  Points are ordered k-major, alpha ascending.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ParameterError, UnsupportedFieldError, UnsupportedParametersError
from .field import PrimeField, find_prime_in_range, next_prime
from .ks import as_fraction, psi_image, psi_powers
from .linalg import dtype_for
from .poly import UniPoly


@dataclass(frozen=True)
class HittingSetSpec:
    field: PrimeField
    n: int
    r: int
    s: int
    d: int
    delta: int
    eps: Fraction
    q: int
    t: int
    m: int
    clipped: bool = False

    def __len__(self):
        return self.t * self.m

    def exponents(self, k: int) -> tuple:
        return psi_powers(k, self.q, self.n)

    def block(self, k: int) -> np.ndarray:
        """The m points for this k as an (m, n) array of residues."""
        p = self.field.p
        w = self.exponents(k)
        return np.array([[pow(a, wi, p) for wi in w] for a in range(self.m)],
                        dtype=dtype_for(p)).reshape(self.m, self.n)

    def point(self, index: int) -> tuple:
        k, a = divmod(index, self.m)
        p = self.field.p
        return tuple(pow(a, wi, p) for wi in self.exponents(k + 1))

    def __iter__(self):
        for k in range(1, self.t + 1):
            for row in self.block(k):
                yield tuple(int(x) for x in row)

    def header(self) -> str:
        return (f"hittingset n={self.n} r={self.r} s={self.s} d={self.d} delta={self.delta} "
                f"eps_num={self.eps.numerator} eps_den={self.eps.denominator} "
                f"p={self.field.p} q={self.q} t={self.t} mk={self.m}")

    def serialize(self) -> str:
        lines = [self.header()]
        for k in range(1, self.t + 1):
            lines.extend(f"point k={k} alpha={a}" for a in range(self.m))
        return "\n".join(lines) + "\n"


def hitting_set_sizes(n, r, s, d, delta, eps):
    """(q, t, m, minimum viable p)."""
    eps = as_fraction(eps)
    base = r * r * s * s * n
    q = find_prime_in_range(base + delta + 1, 2 * base + 2 * delta)
    t = 2 * base + 2 * delta + 1
    m = math.ceil(Fraction(delta * q * d) / eps)
    min_p = next_prime(max(r * d * delta * (s * s * n + delta), m, 3))
    return q, t, m, min_p


def build_hitting_set(field: PrimeField, n: int, r: int, s: int, d: int, delta: int,
                      eps=Fraction(1, 2), *, clip_to_field: bool = False) -> HittingSetSpec:
    """Deterministic hitting set; ``clip_to_field`` drops the field-size checks.

    With clipping, m is capped at p and the density guarantee no longer applies.
    """
    if min(n, r, s, d, delta) < 1:
        raise ParameterError("n, r, s, d, delta must all be positive")
    eps = as_fraction(eps)
    if eps > Fraction(1, 2):
        raise UnsupportedParametersError(f"need 0 < eps <= 1/2, got {eps}")
    if (r - 1) ** 2 > d + 1:
        raise UnsupportedParametersError(
            f"hypothesis (r-1)^2 <= d+1 fails: ({r}-1)^2 = {(r - 1) ** 2} > {d + 1}"
        )
    q, t, m, min_p = hitting_set_sizes(n, r, s, d, delta, eps)
    p = field.p
    clipped = False
    if clip_to_field:
        if m > p:
            m, clipped = p, True
    else:
        bound = r * d * delta * (s * s * n + delta)
        if p < bound:
            raise UnsupportedFieldError(
                f"hypothesis p >= r*d*delta*(s^2*n+delta) = {bound} fails for p={p}", min_p=min_p)
        if p < m:
            raise UnsupportedFieldError(
                f"need p >= m = {m} distinct abscissae, got p={p}", min_p=min_p)
    return HittingSetSpec(field, n, r, s, d, delta, eps, q, t, m, clipped)


@dataclass(frozen=True)
class Zero:
    def __str__(self):
        return "ZERO"


@dataclass(frozen=True)
class NonZero:
    point: tuple
    value: int
    index: int

    def __str__(self):
        return f"NONZERO at=({','.join(map(str, self.point))}) value={self.value}"


def _block_values(oracle, pts: np.ndarray, p: int) -> list:
    batch = getattr(oracle, "evaluate_batch", None)
    if batch is not None:
        return [int(v) % p for v in batch(pts)]
    return [int(oracle(tuple(int(x) for x in row))) % p for row in pts]


def pit_test(oracle, hs: HittingSetSpec):
    """``NonZero`` at the first non-vanishing point in canonical order, else ``Zero``."""
    p = hs.field.p
    for k in range(1, hs.t + 1):
        pts = hs.block(k)
        vals = _block_values(oracle, pts, p)
        for a, v in enumerate(vals):
            if v:
                point = tuple(int(x) for x in pts[a])
                # soundness: re-query the witness on its own
                w = int(oracle(point)) % p
                if w == 0:
                    raise ParameterError("oracle is not deterministic at the witness point")
                return NonZero(point, w, (k - 1) * hs.m + a)
    return Zero()


def nonvanishing_count(oracle, hs: HittingSetSpec) -> int:
    p = hs.field.p
    return sum(1 for k in range(1, hs.t + 1)
               for v in _block_values(oracle, hs.block(k), p) if v)


def psi_circuit(circuit, k: int, q: int) -> UniPoly:
    """Univariate image sum_i c_i * Psi_{k,q}(f_i)^d of a power circuit."""
    acc = UniPoly(circuit.field, [])
    for c, base in circuit.terms:
        acc = acc + psi_image(base, k, q) ** circuit.d * int(c)
    return acc


def count_bad_k(circuit, hs: HittingSetSpec) -> int:
    """Number of k in [1, t] whose substitution annihilates the circuit."""
    return sum(1 for k in range(1, hs.t + 1) if psi_circuit(circuit, k, hs.q).is_zero())
