import random
from fractions import Fraction

import pytest

from corpus import random_circuit
from powcirc.circuit_io import circuit_oracle
from powcirc.circuits import PowCircuitMulti
from powcirc.errors import UnsupportedFieldError, UnsupportedParametersError
from powcirc.field import PrimeField, is_prime
from powcirc.hitting import (
    NonZero,
    Zero,
    build_hitting_set,
    count_bad_k,
    hitting_set_sizes,
    nonvanishing_count,
    pit_test,
    psi_circuit,
)
from powcirc.poly import SparsePoly


def test_size_example():
    q, t, m, _ = hitting_set_sizes(2, 2, 1, 2, 1, Fraction(1, 2))
    assert (q, t, m, t * m) == (11, 19, 44, 836)
    hs = build_hitting_set(PrimeField(47), 2, 2, 1, 2, 1, Fraction(1, 2))
    assert len(hs) == 836 and len(list(hs)) == 836


def test_q_is_smallest_prime_in_window():
    for n, r, s, delta in [(1, 1, 1, 1), (2, 3, 2, 2), (3, 2, 2, 1)]:
        base = r * r * s * s * n
        q, t, _, _ = hitting_set_sizes(n, r, s, 5, delta, Fraction(1, 2))
        assert base + delta + 1 <= q <= 2 * base + 2 * delta and is_prime(q)
        assert not any(is_prime(x) for x in range(base + delta + 1, q))
        assert t == 2 * base + 2 * delta + 1


def test_single_power_always_valid():
    for d in (1, 2, 3):
        _, _, _, min_p = hitting_set_sizes(1, 1, 1, d, 1, Fraction(1, 2))
        build_hitting_set(PrimeField(min_p), 1, 1, 1, d, 1)


def test_hypothesis_gate():
    with pytest.raises(UnsupportedParametersError, match=r"\(r-1\)\^2 <= d\+1"):
        build_hitting_set(PrimeField(10007), 2, 4, 1, 7, 1)
    build_hitting_set(PrimeField(10007), 2, 4, 1, 8, 1)


def test_field_and_eps_gates():
    with pytest.raises(UnsupportedFieldError):
        build_hitting_set(PrimeField(11), 2, 2, 1, 2, 1)
    with pytest.raises(UnsupportedParametersError):
        build_hitting_set(PrimeField(10007), 2, 2, 1, 2, 1, Fraction(3, 4))
    hs = build_hitting_set(PrimeField(11), 2, 2, 1, 2, 1, clip_to_field=True)
    assert hs.m == 11 and hs.clipped


def test_point_order_and_coordinates():
    F = PrimeField(47)
    hs = build_hitting_set(F, 2, 2, 1, 2, 1)
    pts = list(hs)
    for idx in (0, 1, 43, 44, 835):
        k, a = divmod(idx, hs.m)
        assert pts[idx] == hs.point(idx)
        assert pts[idx] == tuple(pow(a, pow(k + 1, i, hs.q), 47) for i in range(2))


def test_serialization_header():
    hs = build_hitting_set(PrimeField(47), 2, 2, 1, 2, 1)
    lines = hs.serialize().splitlines()
    assert lines[0] == "hittingset n=2 r=2 s=1 d=2 delta=1 eps_num=1 eps_den=2 p=47 q=11 t=19 mk=44"
    assert lines[1] == "point k=1 alpha=0" and len(lines) == 837


def test_pit_examples():
    F = PrimeField(47)
    hs = build_hitting_set(F, 2, 2, 1, 2, 1)
    x1 = SparsePoly.variable(F, 2, 0)
    assert pit_test(circuit_oracle(PowCircuitMulti(F, 2, 2, [])), hs) == Zero()
    v = pit_test(circuit_oracle(PowCircuitMulti(F, 2, 2, [(1, x1)])), hs)
    assert isinstance(v, NonZero)
    first = next(i for i, pt in enumerate(hs) if pt[0] != 0)
    assert v.index == first and v.point[0] != 0
    assert str(v) == f"NONZERO at=({v.point[0]},{v.point[1]}) value={v.value}"

    def cancelling(pt):
        a = (pt[0] + pt[1]) % 47
        b = (pt[1] + pt[0]) % 47
        return (pow(a, 2, 47) - pow(b, 2, 47)) % 47

    assert str(pit_test(cancelling, hs)) == "ZERO"


def test_nonzero_witness_is_verified():
    F = PrimeField(47)
    hs = build_hitting_set(F, 2, 2, 1, 2, 1)
    calls = []

    def oracle(pt):
        calls.append(pt)
        return (pt[0] * pt[1]) % 47

    v = pit_test(oracle, hs)
    assert isinstance(v, NonZero) and oracle(v.point) == v.value != 0
    assert calls.count(v.point) >= 2


def test_psi_circuit_matches_per_term_images():
    F = PrimeField(1009)
    rng = random.Random(4)
    c = random_circuit(rng, F, 2, 2, 2, 2, 3)
    q = 7
    for k in (1, 2, 9):
        img = psi_circuit(c, k, q)
        for y in (2, 5):
            pt = tuple(pow(y, pow(k, i, q), 1009) for i in range(2))
            assert img(y) == c.evaluate(pt)


@pytest.mark.parametrize("seed", range(8))
def test_completeness_and_bad_k_on_small_corpus(seed):
    rng = random.Random(seed)
    n, r, s, delta = 2, 2, 2, 1
    d = 3
    q, t, m, min_p = hitting_set_sizes(n, r, s, d, delta, Fraction(1, 2))
    F = PrimeField(min_p)
    c = random_circuit(rng, F, n, r, s, delta, d)
    if c.expand().is_zero():
        pytest.skip("planted circuit cancels")
    hs = build_hitting_set(F, n, r, s, d, delta)
    assert isinstance(pit_test(circuit_oracle(c), hs), NonZero)
    assert nonvanishing_count(circuit_oracle(c), hs) >= (1 - hs.eps) * len(hs)
    assert count_bad_k(c, hs) <= r * r * s * s * n
