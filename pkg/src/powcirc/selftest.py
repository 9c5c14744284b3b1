"""Small invariant corpus run by ``powcirc selftest``; finishes in a few seconds."""
from __future__ import annotations

import random
import sys

from .circuits import PowCircuitMulti, PowCircuitUni
from .diffop import in_span, kernel_basis, solve_annihilator, wronskian
from .factor import factor_univariate
from .field import PrimeField
from .hitting import NonZero, Zero, build_hitting_set, pit_test
from .circuit_io import circuit_oracle, parse_circuit, serialize_circuit
from .ks import build_robust_set, robust_decode
from .poly import SparsePoly, UniPoly, interpolate_univariate
from .reconstruct import reconstruct_univariate


def _field_inverses():
    F = PrimeField(101)
    return all(F(a) * F(a).inverse() == 1 for a in range(1, 101))


def _factor_round_trip():
    F = PrimeField(7)
    rng = random.Random(1)
    for _ in range(20):
        g = UniPoly(F, [rng.randrange(7) for _ in range(5)] + [1])
        if factor_univariate(g).expand() != g:
            return False
    return True


def _interpolation():
    F = PrimeField(101)
    g = UniPoly(F, [3, 0, 5, 7])
    return interpolate_univariate([(t, g(t).value) for t in range(4)], 3, field=F) == g


def _wronskian_detects_dependence():
    F = PrimeField(101)
    x = UniPoly.x(F)
    indep = wronskian([x ** 2, x ** 3])
    dep = wronskian([x ** 2 + x, (x ** 2 + x).scale(5)])
    return indep == x ** 4 and dep.is_zero()


def _operator_kernel():
    F = PrimeField(331)
    x = UniPoly.x(F)
    f = (x ** 82).scale(2) + ((x + 1) ** 82).scale(3)
    order, L = solve_annihilator(f, 2, 1)
    kb = kernel_basis(L, 82)
    return order == 2 and kb.dim == 2 and in_span(kb, x ** 82, F) and in_span(kb, (x + 1) ** 82, F)


def _univariate_reconstruction():
    F = PrimeField(331)
    x = UniPoly.x(F)
    planted = PowCircuitUni(F, 82, [(2, x + 5), (3, x + 7)])
    return reconstruct_univariate(planted.expand(), 2, 82, 1) == planted


def _pit_verdicts():
    F = PrimeField(101)
    hs = build_hitting_set(F, 2, 1, 1, 3, 1, clip_to_field=True)
    zero = PowCircuitMulti(F, 2, 3, [])
    one = PowCircuitMulti(F, 2, 3, [(7, SparsePoly.variable(F, 2, 0))])
    return isinstance(pit_test(circuit_oracle(zero), hs), Zero) and \
        isinstance(pit_test(circuit_oracle(one), hs), NonZero)


class _ErasedEvals:
    """Lazy tag -> value map with the first quarter of the set erased."""

    def __init__(self, rs, f):
        self.rs, self.f = rs, f
        self.cut = len(rs) // 4

    def get(self, tag, default=None):
        if self.rs.index_of(tag) < self.cut:
            return default
        return self.f.evaluate(self.rs.point(tag)).value


def _robust_decoding():
    F = PrimeField(10007)
    rs = build_robust_set(F, 2, 1, 3, "1/4")
    f = SparsePoly(F, 2, {(2, 1): 3})
    return robust_decode(rs, _ErasedEvals(rs, f)) == f


def _format_round_trip():
    text = ("field p=331\nparams n=2 d=82 r=2 s=2 delta=1\n"
            "term coeff=2 poly=1*x1+1*x2\nterm coeff=3 poly=1*x1+2*x2\n")
    return serialize_circuit(parse_circuit(text)) == text


CHECKS = [
    ("field inverses", _field_inverses),
    ("factor round trip", _factor_round_trip),
    ("interpolation", _interpolation),
    ("wronskian dependence", _wronskian_detects_dependence),
    ("operator kernel", _operator_kernel),
    ("univariate reconstruction", _univariate_reconstruction),
    ("pit verdicts", _pit_verdicts),
    ("robust decoding", _robust_decoding),
    ("format round trip", _format_round_trip),
]


def run(verbose: bool = True) -> bool:
    ok = True
    for name, check in CHECKS:
        try:
            passed = bool(check())
        except Exception as exc:  # report, keep going
            passed = False
            name = f"{name} ({type(exc).__name__}: {exc})"
        ok &= passed
        if verbose:
            print(f"{'PASS' if passed else 'FAIL'} {name}")
    if verbose:
        print("selftest OK" if ok else "selftest FAILED", file=sys.stdout if ok else sys.stderr)
    return ok
