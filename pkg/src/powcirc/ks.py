"""Klivans-Spielman substitutions, the robust interpolating set, and its decoder.

``Psi_{k,q}`` sends x_i to y^(k^(i-1) mod q).  The robust set evaluates an
n-variate polynomial along these curves (plain blocks) and along the same
curves with coordinate j scaled by a high-order element lambda (scaled
blocks).  From the two images of one monomial the ratio lambda^(e_j)
reveals the exponent of x_j, and interpolation per k-block tolerates
erasures as long as enough points of some good block survive.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, NamedTuple

import numpy as np

from .errors import (
    DecodeFailure,
    InconsistentInputError,
    ParameterError,
    UnsupportedFieldError,
)
from .field import PrimeField, find_high_order_element, find_prime_in_range, next_prime
from .poly import SparsePoly, UniPoly, interpolate_univariate


def as_fraction(eps) -> Fraction:
    if isinstance(eps, str):
        eps = Fraction(eps)
    eps = Fraction(eps)
    if eps <= 0:
        raise ParameterError(f"epsilon must be positive, got {eps}")
    return eps


def psi_powers(k: int, q: int, n: int) -> tuple:
    """Exponents (k^(i-1) mod q) for i = 1..n."""
    return tuple(pow(k, i, q) for i in range(n))


def psi_exponent(e, k: int, q: int) -> int:
    if not 1 <= k <= q - 1:
        raise ParameterError(f"k must lie in [1, q-1], got k={k}, q={q}")
    return sum(ei * w for ei, w in zip(e, psi_powers(k, q, len(e))))


def psi_image(f: SparsePoly, k: int, q: int, scale_var=None, lam=None) -> UniPoly:
    """Univariate image of f under Psi_{k,q}; optionally x_j is also scaled by lam.

    Unlike ``psi_apply`` this accepts any k >= 1 (the hitting set uses k > q).
    """
    p = f.field.p
    w = psi_powers(k, q, f.n)
    out: dict = {}
    for e, c in f.terms.items():
        m = sum(ei * wi for ei, wi in zip(e, w))
        if scale_var is not None:
            c = c * pow(int(lam), e[scale_var], p) % p
        out[m] = (out.get(m, 0) + c) % p
    if not out:
        return UniPoly(f.field, [])
    cs = [0] * (max(out) + 1)
    for m, c in out.items():
        cs[m] = c
    return UniPoly(f.field, cs)


def psi_apply(f: SparsePoly, k: int, q: int) -> UniPoly:
    if not 1 <= k <= q - 1:
        raise ParameterError(f"k must lie in [1, q-1], got k={k}, q={q}")
    return psi_image(f, k, q)


class Plain(NamedTuple):
    k: int
    alpha: int


class Scaled(NamedTuple):
    j: int
    k: int
    alpha: int


class RobustSet:
    """Robust interpolating set; points are recomputed from their tags on demand.

    Canonical order is k-major: for each k the plain block, then scaled
    blocks j = 1..n, each with alpha = 1..|A| ascending.
    """

    def __init__(self, field: PrimeField, n, s, delta, eps, q, lam, a_size):
        self.field = field
        self.n = n
        self.s = s
        self.delta = delta
        self.eps = eps
        self.q = q
        self.lam = lam
        self.a_size = a_size

    @property
    def alphas(self):
        return range(1, self.a_size + 1)

    @property
    def blocks_per_k(self):
        return self.n + 1

    def __len__(self):
        return (self.n + 1) * (self.q - 1) * self.a_size

    def tag_at(self, index: int):
        if not 0 <= index < len(self):
            raise IndexError(index)
        a = self.a_size
        k, rest = divmod(index, (self.n + 1) * a)
        blk, ai = divmod(rest, a)
        if blk == 0:
            return Plain(k + 1, ai + 1)
        return Scaled(blk, k + 1, ai + 1)

    def index_of(self, tag) -> int:
        a = self.a_size
        blk = 0 if isinstance(tag, Plain) else tag.j
        return ((tag.k - 1) * (self.n + 1) + blk) * a + tag.alpha - 1

    def tags(self):
        for k in range(1, self.q):
            for a in self.alphas:
                yield Plain(k, a)
            for j in range(1, self.n + 1):
                for a in self.alphas:
                    yield Scaled(j, k, a)

    def point(self, tag) -> tuple:
        p = self.field.p
        w = psi_powers(tag.k, self.q, self.n)
        pt = [pow(tag.alpha, wi, p) for wi in w]
        if isinstance(tag, Scaled):
            pt[tag.j - 1] = pt[tag.j - 1] * int(self.lam) % p
        return tuple(pt)

    def block_points(self, k: int, j: int = 0) -> np.ndarray:
        """All points of one block (j = 0 is the plain block) as an (|A|, n) array."""
        return np.array([self.point(Plain(k, a) if j == 0 else Scaled(j, k, a))
                         for a in self.alphas], dtype=object)

    def __iter__(self):
        for t in self.tags():
            yield t, self.point(t)

    def header(self) -> str:
        return (f"robustset n={self.n} s={self.s} delta={self.delta} "
                f"eps_num={self.eps.numerator} eps_den={self.eps.denominator} "
                f"p={self.field.p} q={self.q} lambda={int(self.lam)}")

    def serialize(self) -> str:
        lines = [self.header()]
        for t in self.tags():
            if isinstance(t, Plain):
                lines.append(f"plain k={t.k} alpha={t.alpha}")
            else:
                lines.append(f"scaled j={t.j} k={t.k} alpha={t.alpha}")
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"RobustSet({self.header()}, |S|={len(self)})"


def robust_set_sizes(n, s, delta, eps):
    """(q, |A|, minimum viable p) for the given parameters."""
    eps = as_fraction(eps)
    lo_bound = Fraction(2 * delta * s * s * n * n) / eps
    hi_bound = Fraction(4 * delta * s * s * n * n) / eps
    lo = math.floor(lo_bound) + 1
    hi = math.ceil(hi_bound) - 1
    q = find_prime_in_range(max(lo, 2), hi)
    a_size = math.ceil(Fraction(2 * n * delta * q) / eps)
    min_p = next_prime(max(a_size + 1, delta * q + 2, 3))
    return q, a_size, min_p


def build_robust_set(field: PrimeField, n: int, s: int, delta: int, eps) -> RobustSet:
    if n < 1 or s < 1 or delta < 1:
        raise ParameterError("n, s, delta must be positive")
    eps = as_fraction(eps)
    q, a_size, min_p = robust_set_sizes(n, s, delta, eps)
    if field.p < min_p:
        raise UnsupportedFieldError(
            f"robust set needs p >= {min_p} (|A|={a_size}, lambda of order > {delta * q}); "
            f"got p={field.p}",
            min_p=min_p,
        )
    lam = find_high_order_element(field, delta * q)
    return RobustSet(field, n, s, delta, eps, q, lam, a_size)


def parse_robust_set(text: str) -> RobustSet:
    """Rebuild a serialised robust set and check every point line against it."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = dict(tok.split("=", 1) for tok in lines[0].split()[1:])
    F = PrimeField(int(head["p"]))
    rs = build_robust_set(F, int(head["n"]), int(head["s"]), int(head["delta"]),
                          Fraction(int(head["eps_num"]), int(head["eps_den"])))
    if rs.q != int(head["q"]) or int(rs.lam) != int(head["lambda"]):
        raise InconsistentInputError("header does not match the rebuilt set")
    for ln, tag in zip(lines[1:], rs.tags()):
        kv = dict(tok.split("=", 1) for tok in ln.split()[1:])
        want = Plain(int(kv["k"]), int(kv["alpha"])) if ln.startswith("plain") else \
            Scaled(int(kv["j"]), int(kv["k"]), int(kv["alpha"]))
        if want != tag:
            raise InconsistentInputError(f"unexpected point line {ln!r}")
    if len(lines) - 1 != len(rs):
        raise InconsistentInputError("point count does not match")
    return rs


def _survivors(rs: RobustSet, evals: Mapping, make_tag, need: int):
    pts = []
    for a in rs.alphas:
        v = evals.get(make_tag(a))
        if v is not None:
            pts.append((a, int(v)))
            if len(pts) == need:
                break
    return pts


def robust_decode(rs: RobustSet, evals: Mapping) -> SparsePoly:
    """Recover the s-sparse, degree <= delta polynomial behind partial evaluations.

    ``evals`` maps tags (``Plain`` / ``Scaled``) to values; missing tags are
    erasures.  Only ``evals.get`` is used, so a lazily computed mapping works.
    """
    F = rs.field
    p = F.p
    n, q, delta, s = rs.n, rs.q, rs.delta, rs.s
    need = delta * q + 1
    deg_bound = delta * (q - 1)
    lam = int(rs.lam)
    lam_pow = {pow(lam, e, p): e for e in range(delta + 1)}
    quorum = (2 * s - 1) * (n - 1) + 1
    saw_ratio_mismatch = False

    for k in range(1, q):
        blocks = []
        ok = True
        for j in range(n + 1):
            mk = (lambda a, k=k: Plain(k, a)) if j == 0 else \
                (lambda a, j=j, k=k: Scaled(j, k, a))
            pts = _survivors(rs, evals, mk, need)
            if len(pts) < need:
                ok = False
                break
            blocks.append(pts)
        if not ok:
            continue
        try:
            images = [interpolate_univariate(pts, deg_bound, field=F) for pts in blocks]
        except InconsistentInputError:
            saw_ratio_mismatch = True
            continue
        base = images[0]
        support = [m for m, c in enumerate(base.coeffs) if c]
        if any([m for m, c in enumerate(im.coeffs) if c] != support for im in images[1:]):
            continue
        if len(support) > s:
            continue
        terms = {}
        good = True
        for m in support:
            c = base.coeffs[m]
            inv_c = pow(c, -1, p)
            e = []
            for im in images[1:]:
                ej = lam_pow.get(im.coeffs[m] * inv_c % p)
                if ej is None:
                    saw_ratio_mismatch = True
                    good = False
                    break
                e.append(ej)
            if not good:
                break
            if sum(e) > delta or psi_exponent(e, k, q) != m:
                good = False
                break
            terms[tuple(e)] = c
        if not good:
            continue
        cand = SparsePoly(F, n, terms)
        if _verify(rs, evals, cand, k, quorum):
            return cand
    if saw_ratio_mismatch:
        raise InconsistentInputError("coefficient ratios are not powers lambda^e with e <= delta")
    raise DecodeFailure("no k-block yields a consistent decoding")


def _verify(rs: RobustSet, evals: Mapping, cand: SparsePoly, k0: int, quorum: int) -> bool:
    """Check cand on plain blocks of ``quorum`` other k with enough survivors.

    f - cand is 2s-sparse, so at most (2s-1)(n-1) blocks can miss a nonzero
    difference; a block with more survivors than its degree cannot.
    """
    need = rs.delta * (rs.q - 1) + 1
    checked = 0
    for k in range(1, rs.q):
        if k == k0:
            continue
        pts = _survivors(rs, evals, lambda a, k=k: Plain(k, a), need)
        if len(pts) < need:
            continue
        img = psi_image(cand, k, rs.q)
        xs = np.array([a for a, _ in pts], dtype=object)
        got = img.evaluate_many(xs)
        if any(int(g) != v for g, (_, v) in zip(got, pts)):
            return False
        checked += 1
        if checked == quorum:
            return True
    return False
