"""Wronskians, annihilating differential operators and their polynomial kernels.

An operator is L = sum_i Q_i(x) * (d/dx)^i with polynomial coefficients.
For f = sum_i alpha_i f_i^d the minimal-order operator with low-degree
coefficients annihilating f has kernel spanned by the powers f_i^d, which
is what reconstruction exploits.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NotInClassError, ParameterError
from .linalg import as_matrix, nullspace, rref
from .poly import UniPoly, gcd_monic, nth_derivative


@dataclass(frozen=True)
class DiffOperator:
    field: object
    coeffs: tuple  # Q_0, ..., Q_order

    def __post_init__(self):
        if not self.coeffs or self.coeffs[-1].is_zero():
            raise ParameterError("the top coefficient of an operator must be nonzero")

    @property
    def order(self):
        return len(self.coeffs) - 1

    @property
    def top(self) -> UniPoly:
        return self.coeffs[-1]

    def __call__(self, g: UniPoly) -> UniPoly:
        return apply_operator(self, g)


@dataclass(frozen=True)
class KernelBasis:
    basis: tuple  # UniPoly, canonical echelon form
    D: int

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    @property
    def dim(self):
        return len(self.basis)


def apply_operator(L: DiffOperator, g: UniPoly) -> UniPoly:
    acc = UniPoly(g.field, [])
    for i, Q in enumerate(L.coeffs):
        if not Q.is_zero():
            acc = acc + Q * nth_derivative(g, i)
    return acc


def wronskian(gs) -> UniPoly:
    """det[(d/dx)^i g_j] by fraction-free (Bareiss) elimination over F_p[x]."""
    gs = list(gs)
    if not gs:
        raise ParameterError("the Wronskian of an empty family is undefined")
    F = gs[0].field
    n = len(gs)
    M = [[nth_derivative(g, i) for g in gs] for i in range(n)]
    sign = 1
    prev = UniPoly(F, [1])
    for k in range(n - 1):
        if M[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not M[i][k].is_zero()), None)
            if swap is None:
                return UniPoly(F, [])
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[k][k] * M[i][j] - M[i][k] * M[k][j]).exact_div(prev)
        prev = M[k][k]
    det = M[n - 1][n - 1]
    return det if sign == 1 else -det


def _canonical_rows(vectors: np.ndarray, p: int):
    """RREF rows (nonzero only) of a matrix whose columns are in descending exponent order."""
    if vectors.shape[0] == 0:
        return vectors
    R, piv = rref(vectors, p)
    return R[: len(piv)]


def _rows_to_polys(rows, D: int, field) -> tuple:
    # column c holds the coefficient of x^(D - c)
    return tuple(UniPoly(field, [int(x) for x in row[::-1]]) for row in rows)


def _polys_to_rows(polys, D: int, p: int) -> np.ndarray:
    return as_matrix([g.padded(D + 1)[::-1] for g in polys], p, D + 1)


def canonical_basis(polys, D: int, field) -> KernelBasis:
    """Canonical echelon basis of span(polys) inside polynomials of degree <= D."""
    rows = _canonical_rows(_polys_to_rows(list(polys), D, field.p), field.p)
    return KernelBasis(_rows_to_polys(rows, D, field), D)


def in_span(kb: KernelBasis, g: UniPoly, field) -> bool:
    if g.degree > kb.D:
        return False
    if not kb.basis:
        return g.is_zero()
    p = field.p
    B = _polys_to_rows(list(kb.basis) + [g], kb.D, p)
    return len(rref(B, p)[1]) == len(kb.basis)


def _annihilator_system(f: UniPoly, order: int, delta: int) -> np.ndarray:
    """Columns are unknowns gamma_{i,j}; top block (i = order, j descending) first."""
    p = f.field.p
    B = order * order * delta
    derivs = [nth_derivative(f, i) for i in range(order + 1)]
    rows_n = B + len(f.coeffs)
    cols = []
    for i in range(order, -1, -1):
        for j in range(B, -1, -1):
            col = [0] * rows_n
            for m, c in enumerate(derivs[i].coeffs):
                col[m + j] = c
            cols.append(col)
    return as_matrix(list(zip(*cols)), p)


def _solve_for_order(f: UniPoly, order: int, delta: int, perm=None):
    F = f.field
    p = F.p
    B = order * order * delta
    M = _annihilator_system(f, order, delta)
    if perm is not None:
        M = M[list(perm)]
    N = nullspace(M, p)
    if N.shape[0] == 0:
        return None
    R, piv = rref(N, p)
    top = [i for i, c in enumerate(piv) if c <= B]
    if not top:
        return None
    vec = R[top[-1]]
    coeffs = []
    for idx in range(order + 1):
        i = order - idx
        block = vec[idx * (B + 1):(idx + 1) * (B + 1)]
        coeffs.append((i, UniPoly(F, [int(x) for x in block[::-1]])))
    coeffs = [Q for _, Q in sorted(coeffs, key=lambda t: t[0])]
    g = None
    for Q in coeffs:
        if not Q.is_zero():
            g = Q.monic() if g is None else gcd_monic(g, Q)
    coeffs = [Q.exact_div(g) for Q in coeffs]
    lead = pow(coeffs[-1].leading, -1, p)
    return DiffOperator(F, tuple(Q.scale(lead) for Q in coeffs))


def solve_annihilator(f: UniPoly, r: int, delta: int):
    """Minimal order r' <= r and the normalised operator of that order annihilating f.

    Coefficient degrees are bounded by r'^2 * delta; among solutions with a
    nonzero top coefficient the one of least top degree is returned, with
    content removed and the top coefficient monic.
    """
    if f.is_zero():
        raise DomainError("every operator annihilates the zero polynomial")
    for order in range(1, r + 1):
        L = _solve_for_order(f, order, delta)
        if L is not None:
            return order, L
    raise NotInClassError(f"no operator of order <= {r} with coefficient degree bound annihilates f")


def kernel_basis(L: DiffOperator, D: int) -> KernelBasis:
    """Canonical basis of {g : deg g <= D, L(g) = 0}."""
    F = L.field
    p = F.p
    if p <= D:
        raise ParameterError(f"kernel computation needs p > D; got p={p}, D={D}")
    top = max((Q.degree for Q in L.coeffs if not Q.is_zero()), default=0)
    rows_n = D + top + 1
    cols = []
    for e in range(D, -1, -1):
        img = apply_operator(L, UniPoly.monomial(F, e))
        cols.append(img.padded(rows_n))
    M = as_matrix(list(zip(*cols)), p)
    N = nullspace(M, p)
    rows = _canonical_rows(N, p)
    return KernelBasis(_rows_to_polys(rows, D, F), D)


def subspace_with_factor(kb: KernelBasis, phi: UniPoly, e: int) -> KernelBasis:
    """Canonical basis of {g in span(kb) : phi^e divides g}.

    Solves phi^e * a(x) = sum_i b_i h_i for the unknowns (a, b).
    """
    D = kb.D
    F = phi.field
    p = F.p
    if e == 0:
        return canonical_basis(kb.basis, D, F)
    if not kb.basis or e * phi.degree > D:
        return KernelBasis((), D)
    pe = phi ** e
    free = D - pe.degree  # a has degree <= free
    cols = []
    for i in range(free + 1):
        cols.append((pe * UniPoly.monomial(F, i)).padded(D + 1))
    for h in kb.basis:
        cols.append((-h).padded(D + 1))
    M = as_matrix(list(zip(*cols)), p)
    N = nullspace(M, p)
    polys = []
    for row in N:
        b = [int(x) for x in row[free + 1:]]
        g = UniPoly(F, [])
        for bi, h in zip(b, kb.basis):
            if bi:
                g = g + h.scale(bi)
        polys.append(g)
    return canonical_basis(polys, D, F)
