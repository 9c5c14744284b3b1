"""Reconstruction of sums of powers: univariate (annihilator + DFS) and multivariate.

Univariate pipeline for f = sum alpha_i f_i^d:

1. find the minimal-order operator L annihilating f,
2. factor its top coefficient; every factor of every f_i is among the factors,
3. compute ker L (spanned by the f_i^d) and walk a pruned tree of
   multiplicity vectors to isolate each f_i^d,
4. solve for the alpha_i.

The multivariate reconstruction restricts the black box to lines u + t(v - u),
reconstructs each restriction, and decodes every hidden base from the ratios
h(1)/h(0) = f_i(v)/f_i(u) over a robust interpolating set.
"""
from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .circuits import PowCircuitMulti, PowCircuitUni
from .diffop import (
    KernelBasis,
    canonical_basis,
    in_span,
    kernel_basis,
    solve_annihilator,
    subspace_with_factor,
)
from .errors import (
    AlignmentError,
    DecodeFailure,
    InconsistentInputError,
    InternalInvariantError,
    NotInClassError,
    ParameterError,
    PowCircError,
    ReconstructionFailure,
    RegimeError,
    UnsupportedFieldError,
)
from .factor import irreducible_factors
from .field import FpElem, PrimeField, next_prime
from .hitting import Zero, build_hitting_set, pit_test
from .ks import build_robust_set, robust_set_sizes
from .linalg import as_matrix, rank, solve
from .poly import UniPoly, interpolate_univariate, perfect_dth_root

THEOREM = "theorem"
FAST = "fast"

# robust-set epsilons tried in order by the fast profile until the set fits in F_p
_FAST_ROBUST_EPS = (Fraction(1, 2), Fraction(2, 3), Fraction(3, 4), Fraction(1))
_PROBES = 16
_PROBE_QUORUM = 12


def _field_of_basis(kb: KernelBasis, factors):
    for g in list(kb.basis) + list(factors):
        return g.field
    return None


def _monomial_products(factors, delta):
    """Multiplicity vectors with sum e_j deg(phi_j) <= delta, in lexicographic order."""
    m = len(factors)

    def rec(j, budget):
        if j == m:
            yield ()
            return
        for e in range(budget // factors[j].degree + 1):
            for rest in rec(j + 1, budget - e * factors[j].degree):
                yield (e,) + rest

    return rec(0, delta)


def brute_force_recover(kb: KernelBasis, factors, d: int, delta: int):
    """All monic products g of the factors with deg g <= delta and g^d in span(kb)."""
    F = _field_of_basis(kb, factors)
    if F is None:
        return []
    found = []
    for e in _monomial_products(list(factors), delta):
        g = UniPoly(F, [1])
        for phi, k in zip(factors, e):
            if k:
                g = g * phi ** k
        if d * max(g.degree, 0) <= kb.D and in_span(kb, g ** d, F):
            found.append(g)
    return sorted(found, key=lambda g: g.sort_key())


@dataclass
class DFSStats:
    interior: int = 0
    nodes: int = 0


def dfs_recover(kb: KernelBasis, factors, d: int, delta: int, stats: DFSStats | None = None):
    """The monic powers f_i^d spanning ker L, found by pruned depth-first search."""
    stats = stats if stats is not None else DFSStats()
    F = _field_of_basis(kb, factors)
    if F is None or kb.dim == 0:
        return []
    D = kb.D
    budget = kb.dim * delta
    factors = list(factors)
    phi_d = [phi ** d for phi in factors]
    one = UniPoly(F, [1])
    found: list = []

    def prefix(e):
        P = one
        for pd, k in zip(phi_d, e):
            if k:
                P = P * pd ** k
        return P

    def reduced_found(P):
        out = []
        for g in found:
            q, r = divmod(g, P)
            if r.is_zero():
                out.append(q)
        return canonical_basis(out, D, F)

    def add(g):
        if g not in found:
            found.append(g)

    def visit(e, B: KernelBasis):
        stats.nodes += 1
        P = prefix(e)
        if B.dim == 1:
            add(P * B.basis[0].monic())
            return
        for j, phi in enumerate(factors):
            A = subspace_with_factor(B, phi, d)
            if A.dim == 0:
                continue
            Ue = reduced_found(P)
            if all(in_span(Ue, a, F) for a in A.basis):
                continue
            stats.interior += 1
            if stats.interior > budget:
                raise InternalInvariantError(
                    f"DFS exceeded its node budget of {budget}; input is outside the class")
            child = canonical_basis([a.exact_div(phi_d[j]) for a in A.basis], D, F)
            e2 = list(e)
            e2[j] += 1
            visit(tuple(e2), child)
        # a base equal to the current prefix leaves the constant 1 behind
        if in_span(B, one, F) and not in_span(reduced_found(P), one, F):
            add(P)

    visit((0,) * len(factors), kb)
    return sorted(found, key=lambda g: g.sort_key())


def _check_regime(p, r, d, delta):
    if not d > (r + 1) ** 4 * delta:
        raise RegimeError(f"need d > (r+1)^4*delta = {(r + 1) ** 4 * delta}; got d={d}")
    if not p > 2 * r * d * delta:
        raise RegimeError(f"need p > 2*r*d*delta = {2 * r * d * delta}; got p={p}")


def reconstruct_univariate(source, r: int, d: int, delta: int, field: PrimeField | None = None,
                           stats: DFSStats | None = None) -> PowCircuitUni:
    """The unique representation sum alpha_i f_i^d (f_i monic, deg <= delta, at most r terms).

    ``source`` is a UniPoly or a callable t -> value (queried at t = 0..d*delta).
    """
    if isinstance(source, UniPoly):
        f = source
        F = f.field
    else:
        if field is None:
            raise ParameterError("a black-box source needs field=")
        F = field
        D = d * delta
        f = interpolate_univariate([(t, int(source(FpElem(t, F)))) for t in range(D + 1)], D, field=F)
    p = F.p
    _check_regime(p, r, d, delta)
    D = d * delta
    if f.is_zero():
        return PowCircuitUni(F, d, [])
    if f.degree > D:
        raise NotInClassError(f"degree {f.degree} exceeds d*delta = {D}")
    pp = perfect_dth_root(f, d)
    if pp is not None and pp[1].degree <= delta:
        return PowCircuitUni(F, d, [pp])
    _, L = solve_annihilator(f, r, delta)
    Q = L.top
    factors = irreducible_factors(Q, delta) if Q.degree > 0 else []
    kb = kernel_basis(L, D)
    powers = dfs_recover(kb, factors, d, delta, stats)
    bases = []
    for P in powers:
        rt = perfect_dth_root(P, d)
        if rt is None or rt[1].degree > delta:
            raise NotInClassError("a recovered kernel element is not a d-th power of low degree")
        bases.append(rt[1])
    if not bases:
        raise NotInClassError("no powers found in the kernel")
    cols = [(h ** d).padded(D + 1) for h in bases]
    A = as_matrix(list(zip(*cols)), p)
    if rank(A, p) != len(bases):
        raise NotInClassError("recovered powers are linearly dependent")
    sol = solve(A, f.padded(D + 1), p)
    if sol is None:
        raise NotInClassError("f is not in the span of the recovered powers")
    terms = [(int(a), h) for a, h in zip(sol, bases) if int(a)]
    if len(terms) > r:
        raise NotInClassError(f"found {len(terms)} > r = {r} terms")
    return PowCircuitUni(F, d, terms)


class LabeledUniOutput(NamedTuple):
    """Univariate output on one line with its labels lambda * h(0)^d."""

    pairs: tuple  # ((lambda, h), ...)
    labels: tuple

    @classmethod
    def from_circuit(cls, c: PowCircuitUni):
        p = c.field.p
        pairs = tuple((t.alpha.value, t.base) for t in c.terms)
        labels = tuple(a * pow(h.coeffs[0] if h.coeffs else 0, c.d, p) % p for a, h in pairs)
        return cls(pairs, labels)

    def valid(self, r: int) -> bool:
        """r terms, distinct nonzero labels, every h(0) nonzero."""
        return (len(self.pairs) == r and all(self.labels) and len(set(self.labels)) == r
                and all(h.coeffs and h.coeffs[0] for _, h in self.pairs))


def align_by_labels(outputs: dict) -> dict:
    """Reorder every output so position i carries the i-th smallest label."""
    ref = None
    out = {}
    for v, o in outputs.items():
        if len(set(o.labels)) != len(o.labels):
            raise AlignmentError(f"duplicate labels at {v}")
        order = sorted(range(len(o.labels)), key=lambda i: o.labels[i])
        labels = tuple(o.labels[i] for i in order)
        if ref is None:
            ref = labels
        elif labels != ref:
            raise AlignmentError(f"label set at {v} differs from the reference")
        out[v] = LabeledUniOutput(tuple(o.pairs[i] for i in order), labels)
    return out


@dataclass
class MultiStats:
    oracle_points: int = 0
    lines: int = 0
    failed_lines: int = 0
    anchors_tried: int = 0
    anchor_index: int = -1
    r: int = 0
    anchor_eps: Fraction | None = None
    robust_eps: Fraction | None = None
    notes: list = dc_field(default_factory=list)


def _recon_line_worker(args):
    coeffs, p, r, d, delta = args
    F = PrimeField(p)
    try:
        c = reconstruct_univariate(UniPoly(F, coeffs), r, d, delta)
    except PowCircError:
        return None
    return [(t.alpha.value, t.base.coeffs) for t in c.terms]


class _LineEngine:
    """Caches oracle values per point and univariate results per line."""

    def __init__(self, oracle, field, r, d, delta, stats: MultiStats):
        self.oracle = oracle
        self.field = field
        self.r, self.d, self.delta = r, d, delta
        self.D = d * delta
        self.values: dict = {}
        self.lines: dict = {}
        self.stats = stats

    def fetch(self, pts):
        missing = [pt for pt in dict.fromkeys(pts) if pt not in self.values]
        if missing:
            batch = getattr(self.oracle, "evaluate_batch", None)
            if batch is not None:
                vals = batch(np.array(missing, dtype=object).reshape(len(missing), -1))
            else:
                vals = [self.oracle(pt) for pt in missing]
            p = self.field.p
            for pt, v in zip(missing, vals):
                self.values[pt] = int(v) % p
            self.stats.oracle_points = len(self.values)
        return [self.values[pt] for pt in pts]

    def line_points(self, u, v):
        p = self.field.p
        return [tuple((ui + t * (vi - ui)) % p for ui, vi in zip(u, v)) for t in range(self.D + 1)]

    def restriction(self, u, v) -> UniPoly:
        vals = self.fetch(self.line_points(u, v))
        return interpolate_univariate(list(zip(range(self.D + 1), vals)), self.D, field=self.field)

    def store(self, key, circ):
        self.stats.lines += 1
        if circ is None:
            self.stats.failed_lines += 1
            self.lines[key] = None
        else:
            self.lines[key] = LabeledUniOutput.from_circuit(circ)
        return self.lines[key]

    def line(self, u, v):
        key = (u, v)
        if key in self.lines:
            return self.lines[key]
        if u == v:
            return self.store(key, None)
        g = self.restriction(u, v)
        try:
            circ = reconstruct_univariate(g, self.r, self.d, self.delta)
        except PowCircError:
            circ = None
        return self.store(key, circ)

    def lines_parallel(self, u, vs, jobs):
        todo = [v for v in vs if (u, v) not in self.lines and u != v]
        polys = [self.restriction(u, v).coeffs for v in todo]
        args = [(c, self.field.p, self.r, self.d, self.delta) for c in polys]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_recon_line_worker, args, chunksize=max(1, len(args) // (4 * jobs))))
        for v, res in zip(todo, results):
            circ = None if res is None else PowCircuitUni(
                self.field, self.d, [(a, UniPoly(self.field, cs)) for a, cs in res])
            self.store((u, v), circ)
        return [self.line(u, v) for v in vs]


class _RatioMap:
    """Lazy tag -> h_i(1)/h_i(0) for the term labelled ``label``; None off V_u."""

    def __init__(self, engine, rs, u, ref_labels, label, r):
        self.engine = engine
        self.rs = rs
        self.u = u
        self.ref = ref_labels
        self.label = label
        self.r = r

    def get(self, tag, default=None):
        out = self.engine.line(self.u, self.rs.point(tag))
        if out is None or not out.valid(self.r) or tuple(sorted(out.labels)) != self.ref:
            return default
        return _ratio(out.pairs[out.labels.index(self.label)][1])


def _robust_eps_for(field, n, s, delta, r, profile):
    if profile == THEOREM:
        return Fraction(1, 100 * n * r * r)
    for eps in _FAST_ROBUST_EPS:
        _, _, min_p = robust_set_sizes(n, s, delta, eps)
        if field.p >= min_p:
            return eps
    _, _, min_p = robust_set_sizes(n, s, delta, _FAST_ROBUST_EPS[-1])
    raise UnsupportedFieldError(f"no robust set fits in F_{field.p}", min_p=min_p)


def _verify(circuit: PowCircuitMulti, engine: _LineEngine) -> bool:
    pts = list(engine.values)
    if not pts:
        return True
    got = circuit.evaluate_batch(np.array(pts, dtype=object).reshape(len(pts), -1))
    return all(int(g) == engine.values[pt] for g, pt in zip(got, pts))


def _ratio(h: UniPoly) -> int:
    p = h.field.p
    return h(1).value * pow(h.coeffs[0], -1, p) % p


def _decode(rs, maps, labels, field, n, d) -> PowCircuitMulti:
    from .ks import robust_decode

    terms = [(lab, robust_decode(rs, m)) for lab, m in zip(labels, maps)]
    return PowCircuitMulti(field, n, d, terms).normalized()


def reconstruct_multivariate(oracle, field: PrimeField, n: int, r: int, s: int, delta: int, d: int,
                             *, profile: str = THEOREM, scan: str = "lazy", max_anchors=None,
                             jobs: int = 1, stats: MultiStats | None = None) -> PowCircuitMulti:
    """Recover sum lambda_i f_i^d from black-box access to its evaluations.

    ``profile="theorem"`` uses the proof's epsilons and field-size checks;
    ``profile="fast"`` shrinks both point sets to fit the field (outside the
    proof's guarantees, but every result is still checked against the oracle).
    ``scan="lazy"`` visits anchors in canonical order and decodes as soon as
    sampled lines look consistent; ``scan="exhaustive"`` computes every line
    of the anchor prefix first, exactly like the textbook loop.
    """
    if profile not in (THEOREM, FAST):
        raise ParameterError(f"unknown profile {profile!r}")
    if scan not in ("lazy", "exhaustive"):
        raise ParameterError(f"unknown scan mode {scan!r}")
    stats = stats if stats is not None else MultiStats()
    p = field.p
    _check_regime(p, r, d, delta)
    bound = r * d * delta * (s * s * n + delta)
    if p < bound:
        if profile == THEOREM:
            raise UnsupportedFieldError(f"need p >= r*d*delta*(s^2*n+delta) = {bound}",
                                        min_p=next_prime(bound))
        stats.notes.append(f"p={p} below r*d*delta*(s^2*n+delta)={bound}; fast profile")
    clip = profile == FAST
    engine = _LineEngine(oracle, field, r, d, delta, stats)

    pre = build_hitting_set(field, n, r, s, d, delta, Fraction(1, 2), clip_to_field=clip)
    if isinstance(pit_test(oracle, pre), Zero):
        return PowCircuitMulti(field, n, d, [])

    anchor_eps = Fraction(1, 2) if clip else Fraction(1, 2 * r * r)
    H1 = build_hitting_set(field, n, 2, 2 * s, d, delta, anchor_eps, clip_to_field=clip)
    robust_eps = _robust_eps_for(field, n, s, delta, r, profile)
    rs = build_robust_set(field, n, s, delta, robust_eps)
    stats.anchor_eps, stats.robust_eps = anchor_eps, robust_eps
    n_anchor = len(H1) if max_anchors is None else min(max_anchors, len(H1))

    if scan == "exhaustive":
        return _exhaustive(engine, rs, H1, n_anchor, field, n, d, r, jobs, stats)

    r_hat = 0
    stride = max(1, len(rs) // _PROBES)
    probe_tags = [rs.tag_at(i * stride) for i in range(min(_PROBES, len(rs)))]
    for ui in range(n_anchor):
        u = H1.point(ui)
        stats.anchors_tried += 1
        outs = [engine.line(u, rs.point(t)) for t in probe_tags]
        r_hat = max([r_hat] + [len(o.pairs) for o in outs if o is not None])
        good = [tuple(sorted(o.labels)) for o in outs if o is not None and o.valid(r_hat)]
        if len(good) < _PROBE_QUORUM * len(probe_tags) // _PROBES:
            continue
        counts = Counter(good)
        best = max(counts.values())
        ref = min(lab for lab, c in counts.items() if c == best)
        try:
            maps = [_RatioMap(engine, rs, u, ref, lab, r_hat) for lab in ref]
            circuit = _decode(rs, maps, ref, field, n, d)
        except (DecodeFailure, InconsistentInputError) as exc:
            stats.notes.append(f"anchor {ui}: {exc}")
            continue
        if _verify(circuit, engine):
            stats.anchor_index, stats.r = ui, r_hat
            return circuit
        stats.notes.append(f"anchor {ui}: decoded circuit disagrees with the oracle")
    raise ReconstructionFailure(f"no usable anchor among the first {n_anchor} points")


def _exhaustive(engine, rs, H1, n_anchor, field, n, d, r_max, jobs, stats):
    anchors = [H1.point(i) for i in range(n_anchor)]
    tags = list(rs.tags())
    table = {}
    for u in anchors:
        vs = [rs.point(t) for t in tags]
        if jobs > 1:
            outs = engine.lines_parallel(u, vs, jobs)
        else:
            outs = [engine.line(u, v) for v in vs]
        table[u] = outs
        stats.anchors_tried += 1
    r = max((len(o.pairs) for outs in table.values() for o in outs if o is not None), default=0)
    if r == 0:
        raise ReconstructionFailure("every line restriction failed")
    eps_ks = rs.eps
    threshold = (1 - eps_ks * math.comb(r, 2)) * len(tags)
    U = [u for u in anchors if sum(1 for o in table[u] if o is not None and o.valid(r)) >= threshold]
    if not U:
        raise ReconstructionFailure("no anchor has enough consistent lines")
    u = U[0]
    stats.anchor_index, stats.r = anchors.index(u), r
    valid = {t: o for t, o in zip(tags, table[u]) if o is not None and o.valid(r)}
    # keep the majority label set; a minority set would only make alignment fail
    counts = Counter(tuple(sorted(o.labels)) for o in valid.values())
    ref = min(counts, key=lambda lab: (-counts[lab], lab))
    aligned = align_by_labels({t: o for t, o in valid.items() if tuple(sorted(o.labels)) == ref})
    maps = [{t: _ratio(o.pairs[i][1]) for t, o in aligned.items()} for i in range(r)]
    circuit = _decode(rs, maps, ref, field, n, d)
    if not _verify(circuit, engine):
        raise ReconstructionFailure("decoded circuit disagrees with the oracle")
    return circuit
