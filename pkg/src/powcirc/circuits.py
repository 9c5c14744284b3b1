"""Sum-of-powers circuit values: univariate and multivariate."""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import ParameterError
from .field import FpElem, PrimeField
from .linalg import dtype_for
from .poly import SparsePoly, UniPoly


class PowerTermUni(NamedTuple):
    alpha: FpElem
    base: UniPoly


class PowCircuitUni:
    """sum_i alpha_i * base_i^d with monic, pairwise distinct bases."""

    def __init__(self, field: PrimeField, d: int, terms=()):
        self.field = field
        self.d = d
        ts = []
        for a, b in terms:
            a = FpElem(int(a), field)
            if a.value == 0:
                raise ParameterError("term coefficients must be nonzero")
            if not b.is_monic():
                raise ParameterError("bases must be monic")
            ts.append(PowerTermUni(a, b))
        ts.sort(key=lambda t: (t.base.sort_key(), t.alpha.value))
        if len({t.base for t in ts}) != len(ts):
            raise ParameterError("bases must be pairwise distinct")
        self.terms = tuple(ts)

    def __len__(self):
        return len(self.terms)

    def expand(self) -> UniPoly:
        acc = UniPoly(self.field, [])
        for a, b in self.terms:
            acc = acc + (b ** self.d).scale(a.value)
        return acc

    def __call__(self, x):
        return sum((a * b(x) ** self.d for a, b in self.terms), FpElem(0, self.field))

    def key(self):
        return tuple((t.alpha.value, t.base.coeffs) for t in self.terms)

    def __eq__(self, other):
        if not isinstance(other, PowCircuitUni):
            return NotImplemented
        return self.field == other.field and self.d == other.d and self.key() == other.key()

    def __repr__(self):
        inner = ", ".join(f"({a.value}, {b})" for a, b in self.terms)
        return f"PowCircuitUni(p={self.field.p}, d={self.d}, [{inner}])"


class PowCircuitMulti:
    """sum_i c_i * f_i^d for sparse n-variate bases f_i, canonically ordered."""

    def __init__(self, field: PrimeField, n: int, d: int, terms=()):
        self.field = field
        self.n = n
        self.d = d
        ts = []
        for c, f in terms:
            if f.n != n or f.field.p != field.p:
                raise ParameterError("base polynomial does not match the circuit's ring")
            ts.append((int(c) % field.p, f))
        ts.sort(key=lambda t: (t[1].sort_key(), t[0]))
        self.terms = tuple(ts)

    def __len__(self):
        return len(self.terms)

    @property
    def max_sparsity(self):
        return max((f.sparsity for _, f in self.terms), default=0)

    @property
    def max_degree(self):
        return max((f.degree for _, f in self.terms), default=0)

    def normalized(self) -> PowCircuitMulti:
        """Rescale each base to grlex-leading coefficient 1, absorbing c^d into the coefficient."""
        p = self.field.p
        out = []
        for c, f in self.terms:
            lc = f.leading
            out.append((c * pow(lc, self.d, p) % p, f.normalized()))
        return PowCircuitMulti(self.field, self.n, self.d, out)

    def associate_pair(self):
        """Indices (i, j) of the first pair of associate bases, or None."""
        norms = [f.normalized() for _, f in self.terms]
        for i in range(len(norms)):
            for j in range(i + 1, len(norms)):
                if norms[i] == norms[j]:
                    return i, j
        return None

    def evaluate(self, point) -> FpElem:
        p = self.field.p
        if len(point) != self.n:
            raise ParameterError(f"point has {len(point)} coordinates, expected {self.n}")
        acc = 0
        for c, f in self.terms:
            acc += c * pow(f.evaluate(point).value, self.d, p)
        return FpElem(acc, self.field)

    __call__ = evaluate

    def evaluate_batch(self, points) -> np.ndarray:
        p = self.field.p
        P = np.asarray(points)
        if P.ndim != 2 or P.shape[1] != self.n:
            raise ParameterError(f"expected an (m, {self.n}) array of points")
        acc = np.zeros(P.shape[0], dtype=dtype_for(p))
        for c, f in self.terms:
            v = f.evaluate_many(P)
            pw = np.ones_like(v)
            e = self.d
            while e:
                if e & 1:
                    pw = pw * v % p
                e >>= 1
                if e:
                    v = v * v % p
            acc = (acc + pw * c) % p
        return acc

    def expand(self) -> SparsePoly:
        acc = SparsePoly(self.field, self.n, {})
        for c, f in self.terms:
            acc = acc + (f ** self.d).scale(c)
        return acc

    def key(self):
        return tuple((c, f.sort_key()) for c, f in self.terms)

    def __eq__(self, other):
        if not isinstance(other, PowCircuitMulti):
            return NotImplemented
        return (self.field == other.field and self.n == other.n and self.d == other.d
                and self.key() == other.key())

    def __repr__(self):
        return f"PowCircuitMulti(p={self.field.p}, n={self.n}, d={self.d}, terms={list(self.terms)})"
