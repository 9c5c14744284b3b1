import random

import pytest

from corpus import random_monic_uni
from powcirc.circuit_io import circuit_oracle, interpolate_dense, sample_points
from powcirc.circuits import PowCircuitMulti, PowCircuitUni
from powcirc.diffop import canonical_basis, kernel_basis, solve_annihilator
from powcirc.errors import AlignmentError, RegimeError, UnsupportedFieldError
from powcirc.factor import irreducible_factors
from powcirc.field import PrimeField
from powcirc.poly import SparsePoly, UniPoly, restrict_to_line
from powcirc.reconstruct import (
    FAST,
    THEOREM,
    DFSStats,
    LabeledUniOutput,
    MultiStats,
    align_by_labels,
    brute_force_recover,
    dfs_recover,
    reconstruct_multivariate,
    reconstruct_univariate,
)

F37, F331, F1543 = PrimeField(37), PrimeField(331), PrimeField(1543)


def x_of(F):
    return UniPoly.x(F)


def planted_kernel(F, bases, alphas, d, r, delta=1):
    f = UniPoly(F, [])
    for a, h in zip(alphas, bases):
        f = f + (h ** d).scale(a)
    _, L = solve_annihilator(f, r, delta)
    return f, L, kernel_basis(L, d * delta)


# ---- brute force and DFS -------------------------------------------------------

def test_brute_force_examples():
    x = x_of(F37)
    kb = canonical_basis([x ** 17], 17, F37)
    assert brute_force_recover(kb, [x], 17, 1) == [x]
    y = x_of(F331)
    kb2 = canonical_basis([y ** 82, (y + 1) ** 82], 82, F331)
    assert brute_force_recover(kb2, [y, y + 1], 82, 1) == [y, y + 1]
    with_one = canonical_basis([UniPoly(F37, [1]), x ** 3], 17, F37)
    assert brute_force_recover(with_one, [], 17, 1) == [UniPoly(F37, [1])]
    assert brute_force_recover(kb, [], 17, 1) == []


def test_dfs_examples():
    x = x_of(F37)
    kb = canonical_basis([x ** 17], 17, F37)
    assert dfs_recover(kb, [x], 17, 1) == [x ** 17]
    y = x_of(F331)
    kb2 = canonical_basis([y ** 82, (y + 1) ** 82], 82, F331)
    assert dfs_recover(kb2, [y, y + 1], 82, 1) == [y ** 82, (y + 1) ** 82]
    z = x_of(F1543)
    f, L, kb3 = planted_kernel(F1543, [z, z + 1, z + 2], [1, 1, 1], 257, 3)
    factors = irreducible_factors(L.top, 1)
    stats = DFSStats()
    got = dfs_recover(kb3, factors, 257, 1, stats)
    assert got == sorted([g ** 257 for g in brute_force_recover(kb3, factors, 257, 1)], key=lambda g: g.sort_key())
    assert got == sorted([z ** 257, (z + 1) ** 257, (z + 2) ** 257], key=lambda g: g.sort_key())
    assert stats.interior <= 3


@pytest.mark.parametrize("seed", range(6))
def test_dfs_matches_brute_force_degree_two(seed):
    rng = random.Random(seed)
    # r = 2, delta = 2: d > 81*2, p > 2*r*d*delta
    d, F = 163, PrimeField(1307)
    hs = []
    while len(hs) < 2:
        h = random_monic_uni(rng, F, 2, exact=False)
        if h not in hs:
            hs.append(h)
    f, L, kb = planted_kernel(F, hs, [rng.randrange(1, F.p) for _ in hs], d, 2, 2)
    factors = irreducible_factors(L.top, 2)
    stats = DFSStats()
    got = dfs_recover(kb, factors, d, 2, stats)
    want = sorted([g ** d for g in brute_force_recover(kb, factors, d, 2)], key=lambda g: g.sort_key())
    assert got == want == sorted([h ** d for h in hs], key=lambda g: g.sort_key())
    assert stats.interior <= 2 * 2


# ---- univariate reconstruction ----------------------------------------------------

def test_univariate_examples():
    F = PrimeField(211)
    x = x_of(F)
    c = reconstruct_univariate(((x + 3) ** 20).scale(5), 1, 20, 1)
    assert c == PowCircuitUni(F, 20, [(5, x + 3)])
    y = x_of(F331)
    f = (y ** 82).scale(2) + ((y + 1) ** 82).scale(3)
    c = reconstruct_univariate(f, 2, 82, 1)
    assert c == PowCircuitUni(F331, 82, [(2, y), (3, y + 1)])
    assert c.expand() == f


def test_univariate_regime_gate():
    y = x_of(F331)
    f = y ** 82 + (y + 1) ** 82 + (y + 2) ** 82
    with pytest.raises(RegimeError):
        reconstruct_univariate(f, 3, 82, 1)
    with pytest.raises(RegimeError):
        reconstruct_univariate(x_of(PrimeField(307)) ** 82, 2, 82, 1)


def test_univariate_black_box_source():
    y = x_of(F331)
    planted = PowCircuitUni(F331, 82, [(7, y + 10), (300, y + 200)])
    calls = []

    def oracle(t):
        calls.append(int(t))
        return planted(t)

    assert reconstruct_univariate(oracle, 2, 82, 1, field=F331) == planted
    assert sorted(calls) == list(range(83))


def test_univariate_zero_and_overestimated_r():
    z = x_of(F1543)
    assert len(reconstruct_univariate(UniPoly(F1543, []), 3, 257, 1)) == 0
    planted = PowCircuitUni(F1543, 257, [(4, z + 9)])
    assert reconstruct_univariate(planted.expand(), 3, 257, 1) == planted


# ---- labels ---------------------------------------------------------------------------

def labeled(F, pairs, d=82):
    return LabeledUniOutput.from_circuit(PowCircuitUni(F, d, pairs))


def test_align_examples():
    y = x_of(F331)
    a = labeled(F331, [(2, y + 1), (3, y + 5)])
    single = align_by_labels({"v": a})
    assert list(single["v"].labels) == sorted(a.labels)
    b = LabeledUniOutput(tuple(reversed(a.pairs)), tuple(reversed(a.labels)))
    both = align_by_labels({"v": a, "w": b})
    assert both["v"] == both["w"]
    c = labeled(F331, [(2, y + 1), (4, y + 5)])
    with pytest.raises(AlignmentError):
        align_by_labels({"v": a, "w": c})
    dup = LabeledUniOutput(a.pairs, (a.labels[0], a.labels[0]))
    with pytest.raises(AlignmentError):
        align_by_labels({"v": dup})


def test_labels_and_ratios_on_planted_lines():
    F = F331
    x1, x2 = SparsePoly.variable(F, 2, 0), SparsePoly.variable(F, 2, 1)
    fs = [x1 + x2, x1 + x2.scale(2)]
    cs = [2, 3]
    circ = PowCircuitMulti(F, 2, 82, list(zip(cs, fs)))
    rng = random.Random(1)
    for _ in range(10):
        u = (rng.randrange(331), rng.randrange(331))
        v = (rng.randrange(331), rng.randrange(331))
        fu = [f.evaluate(u).value for f in fs]
        fv = [f.evaluate(v).value for f in fs]
        if 0 in fu or fu[0] * fv[1] % 331 == fu[1] * fv[0] % 331 or fu[0] == fv[0] or fu[1] == fv[1]:
            continue
        g = restrict_to_line(circ.expand(), u, v)
        out = LabeledUniOutput.from_circuit(reconstruct_univariate(g, 2, 82, 1))
        assert out.valid(2)
        want = {c * pow(a, 82, 331) % 331: b * pow(a, -1, 331) % 331 for c, a, b in zip(cs, fu, fv)}
        for (lam, h), lab in zip(out.pairs, out.labels):
            assert h.coeffs[0] != 0
            assert h(1).value * pow(h.coeffs[0], -1, 331) % 331 == want[lab]


# ---- multivariate ------------------------------------------------------------------------

def test_multivariate_zero_oracle():
    F = PrimeField(1481)
    zero = PowCircuitMulti(F, 2, 82, [])
    assert len(reconstruct_multivariate(circuit_oracle(zero), F, 2, 2, 2, 1, 82, profile=FAST)) == 0


def test_multivariate_single_power():
    F = PrimeField(53)
    x1 = SparsePoly.variable(F, 2, 0)
    planted = PowCircuitMulti(F, 2, 17, [(7, x1)])
    got = reconstruct_multivariate(circuit_oracle(planted), F, 2, 1, 1, 1, 17, profile=FAST)
    assert got == planted


def test_multivariate_theorem_profile_field_gate():
    F = PrimeField(331)
    with pytest.raises(UnsupportedFieldError) as exc:
        reconstruct_multivariate(lambda pt: 0, F, 2, 2, 2, 1, 82, profile=THEOREM)
    assert exc.value.min_p == 1481


def test_multivariate_two_term_331_fast_profile():
    F = F331
    x1, x2 = SparsePoly.variable(F, 2, 0), SparsePoly.variable(F, 2, 1)
    planted = PowCircuitMulti(F, 2, 82, [(2, x1 + x2), (3, x1 + x2.scale(2))])
    oracle = circuit_oracle(planted)
    stats = MultiStats()
    got = reconstruct_multivariate(oracle, F, 2, 2, 2, 1, 82, profile=FAST, stats=stats)
    assert got == planted.normalized()
    # the PIT pre-check queries the oracle outside the line cache
    assert stats.r == 2 and 0 < stats.oracle_points < oracle.calls
    for pt in sample_points(F, 2, 200, seed=11):
        assert got.evaluate(pt) == planted.evaluate(pt)
    assert interpolate_dense(circuit_oracle(got), F, 2, 82) == planted.expand()


def test_multivariate_exhaustive_scan_small():
    F = PrimeField(37)
    x1 = SparsePoly.variable(F, 1, 0)
    planted = PowCircuitMulti(F, 1, 17, [(5, x1 + SparsePoly.constant(F, 1, 3))])
    stats = MultiStats()
    got = reconstruct_multivariate(circuit_oracle(planted), F, 1, 1, 2, 1, 17, profile=FAST,
                                   scan="exhaustive", max_anchors=2, stats=stats)
    assert got == planted.normalized()
    assert stats.anchors_tried == 2
