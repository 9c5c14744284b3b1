"""Dense univariate and sparse multivariate polynomials over F_p.

Coefficients are stored as canonical residues (plain ints in ``[0, p)``);
``coeff(i)`` hands back an ``FpElem`` when a field-tagged scalar is wanted.
"""
from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DomainError, FieldMismatchError, InconsistentInputError, ParameterError
from .field import FpElem, PrimeField

NEG_INF = float("-inf")

_SPLIT = 1 << 16
_NUMPY_MIN = 24


def _strip(cs: list) -> tuple:
    n = len(cs)
    while n and cs[n - 1] == 0:
        n -= 1
    return tuple(cs[:n])


def _mul_coeffs(a: Sequence[int], b: Sequence[int], p: int) -> list:
    if not a or not b:
        return []
    if len(a) < len(b):
        a, b = b, a
    if len(b) >= _NUMPY_MIN and p < (1 << 31) and len(a) < _SPLIT:
        # limb split keeps every partial sum of the int64 convolution below 2**63
        A = np.asarray(a, dtype=np.int64)
        B = np.asarray(b, dtype=np.int64)
        lo = np.convolve(A & (_SPLIT - 1), B) % p
        hi = np.convolve(A >> 16, B) % p
        return ((hi * _SPLIT + lo) % p).tolist()
    out = [0] * (len(a) + len(b) - 1)
    for j, y in enumerate(b):
        if y:
            for i, x in enumerate(a):
                out[i + j] += x * y
    return [c % p for c in out]


class UniPoly:
    """Dense univariate polynomial; ``coeffs[i]`` is the coefficient of x^i."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: PrimeField, coeffs: Iterable = ()):
        p = field.p
        self.field = field
        cs = []
        for c in coeffs:
            if isinstance(c, FpElem) and c.field.p != p:
                raise FieldMismatchError(f"coefficient from F_{c.field.p} in F_{p} polynomial")
            cs.append(int(c) % p)
        self.coeffs = _strip(cs)

    @classmethod
    def _raw(cls, field, coeffs):
        obj = cls.__new__(cls)
        obj.field = field
        obj.coeffs = _strip(list(coeffs))
        return obj

    @classmethod
    def x(cls, field):
        return cls._raw(field, [0, 1])

    @classmethod
    def constant(cls, field, c):
        return cls(field, [c])

    @classmethod
    def monomial(cls, field, k: int, c=1):
        return cls(field, [0] * k + [c])

    @classmethod
    def from_roots(cls, field, roots):
        g = cls._raw(field, [1])
        for a in roots:
            g = g * cls(field, [-int(a), 1])
        return g

    @property
    def p(self):
        return self.field.p

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self):
        return not self.coeffs

    def is_constant(self):
        return len(self.coeffs) <= 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def coeff(self, i: int) -> FpElem:
        return FpElem(self.coeffs[i] if 0 <= i < len(self.coeffs) else 0, self.field)

    def padded(self, length: int) -> list:
        """Coefficient list zero-padded (or checked) to exactly ``length`` entries."""
        if len(self.coeffs) > length:
            raise ParameterError(f"degree {self.degree} does not fit in {length} coefficients")
        return list(self.coeffs) + [0] * (length - len(self.coeffs))

    def _check(self, other):
        if other.field.p != self.field.p:
            raise FieldMismatchError(f"F_{self.field.p} vs F_{other.field.p}")

    def _lift(self, other):
        if isinstance(other, UniPoly):
            self._check(other)
            return other
        if isinstance(other, FpElem):
            if other.field.p != self.field.p:
                raise FieldMismatchError(f"F_{self.field.p} vs F_{other.field.p}")
            return UniPoly._raw(self.field, [other.value])
        if isinstance(other, int):
            return UniPoly._raw(self.field, [other % self.field.p])
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        p = self.field.p
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % p
        return UniPoly._raw(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return UniPoly._raw(self.field, [(-c) % p for c in self.coeffs])

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, c) -> UniPoly:
        p = self.field.p
        c = int(c) % p
        return UniPoly._raw(self.field, [x * c % p for x in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, FpElem)):
            if isinstance(other, FpElem) and other.field.p != self.field.p:
                raise FieldMismatchError(f"F_{self.field.p} vs F_{other.field.p}")
            return self.scale(other)
        if not isinstance(other, UniPoly):
            return NotImplemented
        self._check(other)
        return UniPoly._raw(self.field, _mul_coeffs(self.coeffs, other.coeffs, self.field.p))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise DomainError("negative polynomial power")
        result = UniPoly._raw(self.field, [1])
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __divmod__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise DomainError("division by the zero polynomial")
        p = self.field.p
        rem = list(self.coeffs)
        db = len(o.coeffs) - 1
        inv = pow(o.coeffs[-1], -1, p)
        if len(rem) <= db:
            return UniPoly._raw(self.field, []), self
        quot = [0] * (len(rem) - db)
        bc = o.coeffs
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i] % p
            if c == 0:
                continue
            c = c * inv % p
            quot[i - db] = c
            off = i - db
            for j in range(db):
                rem[off + j] -= c * bc[j]
            rem[i] = 0
        return UniPoly._raw(self.field, quot), UniPoly._raw(self.field, [x % p for x in rem[:db]])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> UniPoly:
        q, r = divmod(self, other)
        if not r.is_zero():
            raise DomainError("division is not exact")
        return q

    def __call__(self, x):
        p = self.field.p
        if isinstance(x, FpElem):
            if x.field.p != p:
                raise FieldMismatchError(f"F_{p} polynomial evaluated at F_{x.field.p} point")
            x = x.value
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % p
        return FpElem(acc, self.field)

    def evaluate_many(self, xs) -> np.ndarray:
        """Vectorised Horner evaluation at an array of residues."""
        p = self.field.p
        dt = np.int64 if p < (1 << 31) else object
        xs = np.asarray(xs, dtype=dt) % p
        acc = np.zeros(xs.shape, dtype=dt)
        for c in reversed(self.coeffs):
            acc = (acc * xs + c) % p
        return acc

    def monic(self) -> UniPoly:
        if self.is_zero():
            raise DomainError("the zero polynomial has no monic associate")
        return self.scale(pow(self.coeffs[-1], -1, self.field.p))

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def shift(self, c) -> UniPoly:
        """g(x + c), by repeated synthetic division (Taylor shift)."""
        p = self.field.p
        c = int(c) % p
        a = list(self.coeffs)
        n = len(a)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                a[j] = (a[j] + c * a[j + 1]) % p
        return UniPoly._raw(self.field, a)

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.field.p == other.field.p and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == _strip([other % self.field.p])
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.coeffs))

    def sort_key(self):
        return (len(self.coeffs), self.coeffs)

    def __repr__(self):
        return f"UniPoly({self.field.p}, {list(self.coeffs)})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                mono = "x" if i == 1 else f"x^{i}"
                parts.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(parts)


def derivative(g: UniPoly) -> UniPoly:
    p = g.field.p
    return UniPoly._raw(g.field, [i * c % p for i, c in enumerate(g.coeffs)][1:])


def nth_derivative(g: UniPoly, k: int) -> UniPoly:
    """k-th formal derivative in one pass (falling-factorial weights)."""
    if k == 0:
        return g
    p = g.field.p
    out = []
    for i in range(k, len(g.coeffs)):
        w = 1
        for t in range(i - k + 1, i + 1):
            w = w * t % p
        out.append(g.coeffs[i] * w % p)
    return UniPoly._raw(g.field, out)


def gcd_monic(a: UniPoly, b: UniPoly) -> UniPoly:
    if a.field.p != b.field.p:
        raise FieldMismatchError(f"F_{a.field.p} vs F_{b.field.p}")
    if a.is_zero() and b.is_zero():
        raise DomainError("gcd(0, 0) is undefined")
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def _field_of(points, field):
    if field is not None:
        return field
    for x, y in points:
        for v in (x, y):
            if isinstance(v, FpElem):
                return v.field
    raise ParameterError("cannot infer the field; pass field=")


def interpolate_univariate(points: Sequence, degree_bound: int, field: PrimeField | None = None) -> UniPoly:
    """Unique polynomial of degree <= degree_bound through the first degree_bound+1 points.

    Extra points are checked against the result.
    """
    points = list(points)
    F = _field_of(points, field)
    p = F.p
    D = degree_bound
    if D < 0:
        raise ParameterError("degree_bound must be >= 0")
    if len(points) < D + 1:
        raise ParameterError(f"need {D + 1} points, got {len(points)}")
    xs = [int(x) % p for x, _ in points]
    if len(set(xs)) != len(xs):
        raise ParameterError("duplicate abscissae")
    ys = [int(y) % p for _, y in points]
    if p < (1 << 31):
        coeffs = _newton_numpy(xs[: D + 1], ys[: D + 1], p)
    else:
        coeffs = _newton_python(xs[: D + 1], ys[: D + 1], p)
    g = UniPoly._raw(F, coeffs)
    if len(xs) > D + 1:
        got = g.evaluate_many(xs[D + 1:])
        for x, y, v in zip(xs[D + 1:], ys[D + 1:], got):
            if int(v) != y:
                raise InconsistentInputError(f"point ({x}, {y}) is off the interpolant")
    return g


def _newton_python(X, Y, p):
    D = len(X) - 1
    dd = list(Y)
    inv_cache: dict = {}
    for k in range(1, D + 1):
        for i in range(D, k - 1, -1):
            diff = (X[i] - X[i - k]) % p
            inv = inv_cache.get(diff)
            if inv is None:
                inv = inv_cache[diff] = pow(diff, -1, p)
            dd[i] = (dd[i] - dd[i - 1]) * inv % p
    coeffs = [dd[D]]
    for k in range(D - 1, -1, -1):
        # coeffs <- coeffs * (x - X[k]) + dd[k]
        nxt = [0] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] += c
            nxt[i] -= c * X[k]
        nxt[0] += dd[k]
        coeffs = [c % p for c in nxt]
    return coeffs


def _batch_inverse(vals: np.ndarray, p: int) -> np.ndarray:
    uniq, where = np.unique(vals, return_inverse=True)
    inv = np.array([pow(int(u), -1, p) for u in uniq], dtype=np.int64)
    return inv[where]


def _newton_numpy(X, Y, p):
    """Same divided-difference scheme as ``_newton_python`` on int64 vectors."""
    D = len(X) - 1
    Xa = np.asarray(X, dtype=np.int64)
    dd = np.asarray(Y, dtype=np.int64)
    for k in range(1, D + 1):
        inv = _batch_inverse((Xa[k:] - Xa[:-k]) % p, p)
        dd[k:] = (dd[k:] - dd[k - 1:-1]) % p * inv % p
    c = dd[D:D + 1].copy()
    for k in range(D - 1, -1, -1):
        nxt = np.zeros(len(c) + 1, dtype=np.int64)
        nxt[1:] = c
        nxt[:-1] -= Xa[k] * c % p
        nxt[0] += dd[k]
        c = nxt % p
    return c.tolist()


class SparsePoly:
    """Sparse n-variate polynomial: exponent tuple -> nonzero residue."""

    __slots__ = ("field", "n", "terms")

    def __init__(self, field: PrimeField, n: int, terms: Mapping | Iterable = ()):
        if n < 1:
            raise ParameterError("a sparse polynomial needs n >= 1 variables")
        p = field.p
        self.field = field
        self.n = n
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for e, c in items:
            e = tuple(int(x) for x in e)
            if len(e) != n or any(x < 0 for x in e):
                raise ParameterError(f"bad exponent vector {e} for n={n}")
            if isinstance(c, FpElem) and c.field.p != p:
                raise FieldMismatchError(f"coefficient from F_{c.field.p} in F_{p} polynomial")
            acc[e] = (acc.get(e, 0) + int(c)) % p
        self.terms = {e: c for e, c in acc.items() if c}

    @classmethod
    def variable(cls, field, n, i):
        e = [0] * n
        e[i] = 1
        return cls(field, n, {tuple(e): 1})

    @classmethod
    def constant(cls, field, n, c):
        return cls(field, n, {(0,) * n: c})

    @property
    def sparsity(self):
        return len(self.terms)

    @property
    def degree(self):
        return max((sum(e) for e in self.terms), default=NEG_INF)

    def is_zero(self):
        return not self.terms

    def sorted_terms(self):
        """Terms in graded-lexicographic descending order of exponent vectors."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    @property
    def leading(self) -> int:
        return self.sorted_terms()[0][1] if self.terms else 0

    def scale(self, c) -> SparsePoly:
        c = int(c) % self.field.p
        return SparsePoly(self.field, self.n, {e: v * c for e, v in self.terms.items()})

    def normalized(self) -> SparsePoly:
        """Scalar multiple with grlex-leading coefficient 1."""
        if not self.terms:
            raise DomainError("the zero polynomial cannot be normalized")
        return self.scale(pow(self.leading, -1, self.field.p))

    def _check(self, other):
        if other.field.p != self.field.p:
            raise FieldMismatchError(f"F_{self.field.p} vs F_{other.field.p}")
        if other.n != self.n:
            raise ParameterError(f"variable counts differ: {self.n} vs {other.n}")

    def __add__(self, other):
        if not isinstance(other, SparsePoly):
            return NotImplemented
        self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return SparsePoly(self.field, self.n, t)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, FpElem)):
            return self.scale(other)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return SparsePoly(self.field, self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = SparsePoly.constant(self.field, self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def evaluate(self, point) -> FpElem:
        p = self.field.p
        pt = [int(x) % p for x in point]
        if len(pt) != self.n:
            raise ParameterError(f"point has {len(pt)} coordinates, expected {self.n}")
        acc = 0
        for e, c in self.terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v = v * pow(x, k, p) % p
            acc += v
        return FpElem(acc, self.field)

    __call__ = evaluate

    def evaluate_many(self, points) -> np.ndarray:
        """Evaluate at each row of an (m, n) array of residues."""
        p = self.field.p
        dt = np.int64 if p < (1 << 31) else object
        P = np.asarray(points, dtype=dt) % p
        acc = np.zeros(P.shape[0], dtype=dt)
        for e, c in self.terms.items():
            v = np.full(P.shape[0], c, dtype=dt)
            for i, k in enumerate(e):
                for _ in range(k):
                    v = v * P[:, i] % p
            acc = (acc + v) % p
        return acc

    def is_associate(self, other) -> bool:
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        return self.normalized() == other.normalized()

    def __eq__(self, other):
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.field.p == other.field.p and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.field.p, self.n, frozenset(self.terms.items())))

    def sort_key(self):
        return tuple((sum(e), e, c) for e, c in self.sorted_terms())

    def __repr__(self):
        return f"SparsePoly({self.field.p}, n={self.n}, {dict(self.sorted_terms())})"


def restrict_to_line(f: SparsePoly, u, v) -> UniPoly:
    """The univariate polynomial t -> f(u + t(v - u))."""
    p = f.field.p
    u = [int(x) % p for x in u]
    v = [int(x) % p for x in v]
    if len(u) != f.n or len(v) != f.n:
        raise ParameterError(f"points must have {f.n} coordinates")
    lines = [UniPoly._raw(f.field, [ui, (vi - ui) % p]) for ui, vi in zip(u, v)]
    powers: dict = {}
    total = UniPoly._raw(f.field, [])
    for e, c in f.terms.items():
        term = UniPoly._raw(f.field, [c])
        for i, k in enumerate(e):
            if k:
                key = (i, k)
                if key not in powers:
                    powers[key] = lines[i] ** k
                term = term * powers[key]
        total = total + term
    return total


def perfect_dth_root(g: UniPoly, d: int):
    """``(alpha, h)`` with h monic and g = alpha*h^d, or ``None``."""
    from .factor import squarefree_decomposition

    if d < 1:
        raise ParameterError("d must be >= 1")
    if g.is_zero():
        return None
    alpha = g.coeff(len(g.coeffs) - 1)
    if g.degree == 0:
        return alpha, UniPoly._raw(g.field, [1])
    if g.degree % d:
        return None
    h = UniPoly._raw(g.field, [1])
    for part, mult in squarefree_decomposition(g):
        if mult % d:
            return None
        h = h * part ** (mult // d)
    return alpha, h


def ord_factor(g: UniPoly, phi: UniPoly) -> int:
    """Largest e with phi^e dividing g."""
    if g.is_zero():
        raise DomainError("ord of the zero polynomial is unbounded")
    if phi.is_zero() or phi.is_constant():
        raise DomainError("ord needs a non-constant factor")
    e = 0
    while True:
        q, r = divmod(g, phi)
        if not r.is_zero():
            return e
        g = q
        e += 1
