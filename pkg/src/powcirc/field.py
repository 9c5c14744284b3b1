"""Prime fields F_p, primality, prime search and multiplicative orders.

Everything here is deterministic.  Moduli are restricted to ``3 <= p < 2**62``.
"""
from __future__ import annotations

from functools import lru_cache

from .errors import (
    DomainError,
    FieldMismatchError,
    InfeasibleError,
    NotFoundError,
    ParameterError,
)

MAX_MODULUS = 1 << 62

# Deterministic for every n < 3.3e24 (Sorenson & Webster), so complete below 2**62.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(m: int) -> bool:
    """Deterministic primality test for ``2 <= m < 2**62``."""
    if not isinstance(m, int) or m < 2 or m >= MAX_MODULUS:
        raise ParameterError(f"is_prime expects 2 <= m < 2**62, got {m!r}")
    for b in _MR_BASES:
        if m % b == 0:
            return m == b
    d, s = m - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, m)
        if x == 1 or x == m - 1:
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


def find_prime_in_range(lo: int, hi: int) -> int:
    """Smallest prime q with ``lo <= q <= hi``."""
    if lo < 2 or lo > hi:
        raise ParameterError(f"need 2 <= lo <= hi, got [{lo}, {hi}]")
    for q in range(lo, hi + 1):
        if is_prime(q):
            return q
    raise NotFoundError(f"no prime in [{lo}, {hi}]")


def next_prime(m: int) -> int:
    """Smallest prime >= m (m >= 2)."""
    q = max(m, 2)
    while not is_prime(q):
        q += 1
    return q


@lru_cache(maxsize=256)
def factor_integer(m: int) -> tuple[tuple[int, int], ...]:
    """Prime factorisation of ``m >= 1`` by trial division, as ((prime, exp), ...)."""
    out = []
    n = m
    f = 2
    while f * f <= n:
        if n % f == 0:
            e = 0
            while n % f == 0:
                n //= f
                e += 1
            out.append((f, e))
            if n > 1 and n < MAX_MODULUS and is_prime(n):
                break
        f += 1 if f == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


class PrimeField:
    """The field F_p for a verified prime ``3 <= p < 2**62``."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not isinstance(p, int) or p < 3 or p >= MAX_MODULUS:
            raise ParameterError(f"modulus must satisfy 3 <= p < 2**62, got {p!r}")
        if not is_prime(p):
            raise ParameterError(f"modulus {p} is not prime")
        self.p = p

    def __call__(self, value) -> FpElem:
        return FpElem(int(value), self)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise DomainError("0 has no multiplicative inverse")
        return pow(a, -1, self.p)

    def elements(self):
        return (FpElem(v, self) for v in range(self.p))


def _coerce(a: FpElem, b) -> int:
    if isinstance(b, FpElem):
        if b.field.p != a.field.p:
            raise FieldMismatchError(f"F_{a.field.p} vs F_{b.field.p}")
        return b.value
    if isinstance(b, int):
        return b
    return NotImplemented


class FpElem:
    """A canonical residue ``0 <= value < p`` of a specific prime field."""

    __slots__ = ("value", "field")

    def __init__(self, value: int, field: PrimeField):
        self.field = field
        self.value = int(value) % field.p

    def _new(self, v):
        return FpElem(v, self.field)

    def __add__(self, other):
        o = _coerce(self, other)
        return NotImplemented if o is NotImplemented else self._new(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(self, other)
        return NotImplemented if o is NotImplemented else self._new(self.value - o)

    def __rsub__(self, other):
        o = _coerce(self, other)
        return NotImplemented if o is NotImplemented else self._new(o - self.value)

    def __mul__(self, other):
        o = _coerce(self, other)
        return NotImplemented if o is NotImplemented else self._new(self.value * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(self, other)
        if o is NotImplemented:
            return NotImplemented
        return self._new(self.value * self.field.inv(o))

    def __rtruediv__(self, other):
        o = _coerce(self, other)
        if o is NotImplemented:
            return NotImplemented
        return self._new(o * self.field.inv(self.value))

    def __neg__(self):
        return self._new(-self.value)

    def __pow__(self, e: int):
        if e < 0:
            return self._new(pow(self.field.inv(self.value), -e, self.field.p))
        return self._new(pow(self.value, e, self.field.p))

    def inverse(self) -> FpElem:
        return self._new(self.field.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, FpElem):
            return self.field.p == other.field.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field.p))

    def __int__(self):
        return self.value

    __index__ = __int__

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FpElem({self.value}, p={self.field.p})"

    def __str__(self):
        return str(self.value)


def element_order(a: FpElem) -> int:
    """Multiplicative order of a nonzero element, by stripping prime factors of p-1."""
    if a.value == 0:
        raise DomainError("0 has no multiplicative order")
    p = a.field.p
    order = p - 1
    for prime, _ in factor_integer(p - 1):
        while order % prime == 0 and pow(a.value, order // prime, p) == 1:
            order //= prime
    return order


def find_high_order_element(field: PrimeField, min_order: int) -> FpElem:
    """Smallest residue ``a >= 2`` whose multiplicative order exceeds ``min_order``."""
    p = field.p
    if min_order >= p - 1:
        raise InfeasibleError(
            f"F_{p}^* has order {p - 1}; no element of order > {min_order}",
            min_p=next_prime(min_order + 2),
        )
    for a in range(2, p):
        el = FpElem(a, field)
        if element_order(el) > min_order:
            return el
    # a generator always exists, so the loop above returns
    raise InfeasibleError(f"no element of order > {min_order} in F_{p}")
