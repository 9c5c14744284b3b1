import random
from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, strategies as st

from corpus import LazyEvals, block_index, monomials, random_sparse
from powcirc.errors import DecodeFailure, InconsistentInputError, ParameterError, UnsupportedFieldError
from powcirc.field import PrimeField, element_order, is_prime
from powcirc.ks import (
    Scaled,
    build_robust_set,
    parse_robust_set,
    psi_apply,
    psi_exponent,
    robust_decode,
    robust_set_sizes,
)
from powcirc.linalg import rank
from powcirc.poly import SparsePoly, UniPoly


def test_psi_exponent_examples():
    assert psi_exponent((0, 0, 1), 2, 5) == 4
    assert psi_exponent((1, 0, 1), 2, 5) == 5
    assert psi_exponent((0, 0, 0), 3, 5) == 0
    with pytest.raises(ParameterError):
        psi_exponent((1,), 5, 5)


@given(st.lists(st.integers(0, 9), min_size=1, max_size=4), st.sampled_from([5, 7, 11, 13]), st.data())
def test_psi_exponent_degree_bound(e, q, data):
    k = data.draw(st.integers(1, q - 1))
    assert psi_exponent(e, k, q) <= (q - 1) * sum(e)


def test_psi_apply_examples():
    F = PrimeField(101)
    x1, x2 = SparsePoly.variable(F, 2, 0), SparsePoly.variable(F, 2, 1)
    assert psi_apply(x1 + x2, 2, 5) == UniPoly(F, [0, 1, 1])
    assert psi_apply(SparsePoly(F, 2, {}), 2, 5).is_zero()
    assert psi_apply(x1 - x2, 1, 5).is_zero()


def test_psi_apply_matches_substitution():
    F = PrimeField(101)
    rng = random.Random(2)
    for _ in range(20):
        f = random_sparse(rng, F, 3, 3, 3)
        k = rng.randrange(1, 7)
        img = psi_apply(f, k, 7)
        for y in (2, 3, 50):
            pt = tuple(pow(y, pow(k, i, 7), 101) for i in range(3))
            assert img(y) == f.evaluate(pt)


def test_robust_set_small_example():
    F = PrimeField(101)
    rs = build_robust_set(F, 1, 1, 1, Fraction(1, 2))
    assert (rs.q, rs.a_size, len(rs)) == (5, 20, 160)
    assert len(list(rs.tags())) == 160
    assert element_order(rs.lam) > rs.delta * rs.q


def test_robust_set_q_follows_construction_window():
    q, a_size, _ = robust_set_sizes(2, 2, 1, Fraction(1, 100))
    lo, hi = Fraction(2 * 1 * 4 * 4, 1) * 100, Fraction(4 * 1 * 4 * 4, 1) * 100
    assert lo < q < hi and is_prime(q)
    assert not any(is_prime(m) for m in range(int(lo) + 1, q))
    assert q == 3203
    assert a_size == 2 * 2 * 1 * q * 100


def test_robust_set_too_small_field():
    _, _, min_p = robust_set_sizes(1, 1, 1, Fraction(1, 2))
    with pytest.raises(UnsupportedFieldError) as exc:
        build_robust_set(PrimeField(13), 1, 1, 1, Fraction(1, 2))
    assert exc.value.min_p == min_p
    build_robust_set(PrimeField(min_p), 1, 1, 1, Fraction(1, 2))


def test_robust_set_point_formula_and_order():
    F = PrimeField(1009)
    rs = build_robust_set(F, 2, 1, 1, Fraction(1, 2))
    lam = int(rs.lam)
    tags = list(rs.tags())
    assert [rs.tag_at(i) for i in range(len(tags))] == tags
    assert all(rs.index_of(t) == i for i, t in enumerate(tags))
    for t in tags[:: len(tags) // 50]:
        pt = rs.point(t)
        for i in range(2):
            want = pow(t.alpha, pow(t.k, i, rs.q), 1009)
            if isinstance(t, Scaled) and t.j == i + 1:
                want = want * lam % 1009
            assert pt[i] == want


def test_robust_set_serialization_round_trip():
    F = PrimeField(101)
    rs = build_robust_set(F, 1, 1, 1, Fraction(1, 2))
    text = rs.serialize()
    assert text.splitlines()[0] == f"robustset n=1 s=1 delta=1 eps_num=1 eps_den=2 p=101 q=5 lambda={int(rs.lam)}"
    assert text.splitlines()[1] == "plain k=1 alpha=1"
    back = parse_robust_set(text)
    assert back.serialize() == text


@pytest.mark.parametrize("seed", range(10))
def test_monomial_count_preservation(seed):
    rng = random.Random(seed)
    F = PrimeField(101)
    n, s, q = 3, 3, 11
    f = random_sparse(rng, F, n, s, 4)
    losses = sum(1 for k in range(1, q)
                 if sum(1 for c in psi_apply(f, k, q).coeffs if c) < f.sparsity)
    assert losses <= comb(f.sparsity, 2) * (n - 1)


@pytest.mark.parametrize("seed", range(10))
def test_pairwise_independence_preservation(seed):
    rng = random.Random(100 + seed)
    F = PrimeField(101)
    n, s, q = 2, 2, 11
    f = random_sparse(rng, F, n, s, 3)
    g = random_sparse(rng, F, n, s, 3)
    if f.is_associate(g):
        return
    bad = 0
    for k in range(1, q):
        a, b = psi_apply(f, k, q), psi_apply(g, k, q)
        L = max(len(a.coeffs), len(b.coeffs))
        if rank([a.padded(L), b.padded(L)], 101) < 2:
            bad += 1
    assert bad <= s * (s - 1) * (n - 1)


def test_hitting_rate_of_robust_set():
    F = PrimeField(1009)
    n, s, delta, eps = 2, 1, 1, Fraction(1, 2)
    rs = build_robust_set(F, n, s, delta, eps)
    pts = np.array([rs.point(t) for t in rs.tags()], dtype=np.int64)
    rng = random.Random(9)
    for _ in range(12):
        g = random_sparse(rng, F, n, 2 * s, delta)
        zeros = int((g.evaluate_many(pts) == 0).sum())
        assert zeros <= eps / n * len(rs)


def test_decode_without_erasures():
    F = PrimeField(1009)
    rs = build_robust_set(F, 2, 2, 1, Fraction(1, 2))
    x1, x2 = SparsePoly.variable(F, 2, 0), SparsePoly.variable(F, 2, 1)
    assert robust_decode(rs, LazyEvals(rs, x1 + x2)) == x1 + x2
    assert robust_decode(rs, LazyEvals(rs, SparsePoly(F, 2, {}))).is_zero()


def test_decode_example_with_adversarial_erasures():
    F = PrimeField(10007)
    rs = build_robust_set(F, 2, 1, 3, Fraction(1, 4))
    f = SparsePoly(F, 2, {(2, 1): 3})
    budget = len(rs) // 4
    assert robust_decode(rs, LazyEvals(rs, f, [(0, budget)])) == f
    assert robust_decode(rs, LazyEvals(rs, f, [(len(rs) - budget, len(rs))])) == f


def one_block_per_k(rs, rng, budget):
    ranges, used = [], 0
    for k in rng.sample(range(1, rs.q), rs.q - 1):
        if used + rs.a_size > budget:
            break
        lo = block_index(rs, k, rng.randrange(rs.n + 1))
        ranges.append((lo, lo + rs.a_size))
        used += rs.a_size
    return ranges


@pytest.mark.parametrize("seed", range(4))
def test_decode_erasing_whole_blocks(seed):
    F = PrimeField(10007)
    rng = random.Random(seed)
    rs = build_robust_set(F, 2, 2, 1, Fraction(1, 4))
    f = random_sparse(rng, F, 2, 2, 1)
    ranges = one_block_per_k(rs, rng, len(rs) // 4)
    assert robust_decode(rs, LazyEvals(rs, f, ranges)) == f


def test_half_erasure_can_block_every_k():
    # with eps*(n+1) >= 1 an adversary removes one block from every k
    F = PrimeField(1009)
    rs = build_robust_set(F, 2, 2, 1, Fraction(1, 2))
    f = SparsePoly.variable(F, 2, 0)
    ranges = one_block_per_k(rs, random.Random(0), len(rs) // 2)
    assert len(ranges) == rs.q - 1
    with pytest.raises(DecodeFailure):
        robust_decode(rs, LazyEvals(rs, f, ranges))


def test_decode_fails_when_everything_is_erased():
    F = PrimeField(1009)
    rs = build_robust_set(F, 1, 1, 1, Fraction(1, 2))
    f = SparsePoly(F, 1, {(1,): 1})
    with pytest.raises(DecodeFailure):
        robust_decode(rs, LazyEvals(rs, f, [(0, len(rs))]))


def test_decode_rejects_dense_input():
    F = PrimeField(1009)
    rs = build_robust_set(F, 2, 1, 1, Fraction(1, 2))
    dense = SparsePoly(F, 2, {e: 1 for e in monomials(2, 1)})
    with pytest.raises((DecodeFailure, InconsistentInputError)):
        robust_decode(rs, LazyEvals(rs, dense))


def test_decode_rejects_ratio_outside_lambda_powers():
    F = PrimeField(1009)
    rs = build_robust_set(F, 1, 1, 1, Fraction(1, 2))
    x = SparsePoly.variable(F, 1, 0)

    class Twisted(LazyEvals):
        def get(self, tag, default=None):
            v = super().get(tag, default)
            if isinstance(tag, Scaled):
                v = v * 5 % 1009  # ratio lambda*5 is not lambda^0 or lambda^1
            return v

    with pytest.raises(InconsistentInputError):
        robust_decode(rs, Twisted(rs, x))
