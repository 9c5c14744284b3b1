"""Text format for power circuits, black-box oracle adapters and dense verification.

A circuit document looks like::

    # comment
    field p=331
    params n=2 d=82 r=2 s=2 delta=1
    term coeff=2 poly=1*x1+1*x2
    term coeff=3 poly=1*x1+2*x2

Each ``poly`` is a ``+``-separated sum of products ``c*x<i>^<e>``; ``^1``
may be omitted and a bare integer is a constant term.  The canonical
serialisation orders terms like ``PowCircuitMulti`` and monomials in
graded-lexicographic descending order.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass

import numpy as np

from .circuits import PowCircuitMulti
from .errors import CircuitFormatError, ParameterError
from .field import FpElem, PrimeField
from .linalg import rref
from .poly import SparsePoly

_KV = re.compile(r"([a-z]+)=(\S*)")
_INT = re.compile(r"-?\d+")
_FACTOR = re.compile(r"x(\d+)(?:\^(\d+))?")


@dataclass(frozen=True)
class CircuitDoc:
    p: int
    n: int
    d: int
    r: int | None
    s: int | None
    delta: int | None
    circuit: PowCircuitMulti

    @property
    def field(self):
        return self.circuit.field

    def bounds(self):
        """(r, s, delta): declared values, or the measured ones when undeclared."""
        c = self.circuit
        r = self.r if self.r is not None else max(1, len(c))
        s = self.s if self.s is not None else max(1, c.max_sparsity)
        delta = self.delta if self.delta is not None else max(1, c.max_degree)
        return r, s, delta


def _keyvals(body: str, lineno: int, offset: int, allowed, required):
    out = {}
    for tok in re.finditer(r"\S+", body):
        m = _KV.fullmatch(tok.group())
        col = offset + tok.start() + 1
        if not m:
            raise CircuitFormatError("syntax", f"expected key=value, got {tok.group()!r}", lineno, col)
        key, val = m.groups()
        if key not in allowed:
            raise CircuitFormatError("syntax", f"unknown key {key!r}", lineno, col)
        if key in out:
            raise CircuitFormatError("syntax", f"duplicate key {key!r}", lineno, col)
        out[key] = (val, col + len(key) + 1)  # column of the value
    for key in required:
        if key not in out:
            raise CircuitFormatError("syntax", f"missing {key}=", lineno, offset + 1)
    return out


def _int_value(val, lineno, col, key, minimum=None):
    if not _INT.fullmatch(val):
        raise CircuitFormatError("syntax", f"{key} must be an integer, got {val!r}", lineno, col)
    v = int(val)
    if minimum is not None and v < minimum:
        raise CircuitFormatError("header", f"{key} must be >= {minimum}, got {v}", lineno, col)
    return v


def _parse_poly(text: str, field: PrimeField, n: int, lineno: int, col0: int) -> SparsePoly:
    terms: dict = {}
    pos = 0
    for piece in text.split("+"):
        col = col0 + pos
        pos += len(piece) + 1
        if not piece:
            raise CircuitFormatError("syntax", "empty summand", lineno, col)
        factors = piece.split("*")
        coeff = 1
        exps = [0] * n
        for idx, fac in enumerate(factors):
            if idx == 0 and _INT.fullmatch(fac):
                coeff = int(fac)
                continue
            m = _FACTOR.fullmatch(fac)
            if not m:
                raise CircuitFormatError("syntax", f"bad factor {fac!r}", lineno, col)
            i = int(m.group(1))
            e = int(m.group(2)) if m.group(2) is not None else 1
            if not 1 <= i <= n:
                raise CircuitFormatError("variable", f"x{i} outside x1..x{n}", lineno, col)
            exps[i - 1] += e
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + coeff
    return SparsePoly(field, n, terms)


def parse_circuit(text: str) -> CircuitDoc:
    field = None
    header = None
    raw_terms = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].rstrip()
        stripped = body.lstrip()
        if not stripped:
            continue
        indent = len(body) - len(stripped)
        word, _, rest = stripped.partition(" ")
        offset = indent + len(word) + 1
        if word == "field":
            if field is not None:
                raise CircuitFormatError("header", "duplicate field line", lineno, indent + 1)
            kv = _keyvals(rest, lineno, offset, {"p"}, {"p"})
            val, col = kv["p"]
            p = _int_value(val, lineno, col, "p")
            try:
                field = PrimeField(p)
            except ParameterError as exc:
                raise CircuitFormatError("header", str(exc), lineno, col) from None
        elif word == "params":
            if header is not None:
                raise CircuitFormatError("header", "duplicate params line", lineno, indent + 1)
            if field is None:
                raise CircuitFormatError("header", "params line before field line", lineno, indent + 1)
            kv = _keyvals(rest, lineno, offset, {"n", "d", "r", "s", "delta"}, {"n", "d"})
            header = {k: _int_value(v, lineno, c, k, 1) for k, (v, c) in kv.items()}
        elif word == "term":
            if header is None:
                raise CircuitFormatError("header", "term line before params line", lineno, indent + 1)
            kv = _keyvals(rest, lineno, offset, {"coeff", "poly"}, {"coeff", "poly"})
            cval, ccol = kv["coeff"]
            coeff = _int_value(cval, lineno, ccol, "coeff")
            if coeff % field.p == 0:
                raise CircuitFormatError("zero-coeff", f"coefficient {coeff} is 0 mod {field.p}",
                                         lineno, ccol)
            pval, pcol = kv["poly"]
            poly = _parse_poly(pval, field, header["n"], lineno, pcol)
            if poly.is_zero():
                raise CircuitFormatError("zero-poly", "base polynomial is zero", lineno, pcol)
            raw_terms.append((lineno, pcol, coeff, poly))
        else:
            raise CircuitFormatError("syntax", f"unknown line type {word!r}", lineno, indent + 1)
    if field is None or header is None:
        raise CircuitFormatError("header", "document needs a field line and a params line")
    n, d = header["n"], header["d"]
    r, s, delta = header.get("r"), header.get("s"), header.get("delta")
    if r is not None and len(raw_terms) > r:
        raise CircuitFormatError("term-count", f"{len(raw_terms)} terms exceed r={r}")
    for lineno, col, _, poly in raw_terms:
        if delta is not None and poly.degree > delta:
            raise CircuitFormatError("degree", f"degree {poly.degree} exceeds delta={delta}", lineno, col)
        if s is not None and poly.sparsity > s:
            raise CircuitFormatError("sparsity", f"sparsity {poly.sparsity} exceeds s={s}", lineno, col)
    norms = {}
    for lineno, col, _, poly in raw_terms:
        key = poly.normalized()
        if key in norms:
            raise CircuitFormatError(
                "associate", f"base is a scalar multiple of the base on line {norms[key]}", lineno, col)
        norms[key] = lineno
    circuit = PowCircuitMulti(field, n, d, [(c, f) for _, _, c, f in raw_terms])
    return CircuitDoc(field.p, n, d, r, s, delta, circuit)


def format_poly(f: SparsePoly) -> str:
    parts = []
    for e, c in f.sorted_terms():
        facs = [str(c)]
        for i, k in enumerate(e):
            if k == 1:
                facs.append(f"x{i + 1}")
            elif k > 1:
                facs.append(f"x{i + 1}^{k}")
        parts.append("*".join(facs))
    return "+".join(parts)


def serialize_circuit(doc: CircuitDoc) -> str:
    lines = [f"field p={doc.p}"]
    head = f"params n={doc.n} d={doc.d}"
    for key in ("r", "s", "delta"):
        v = getattr(doc, key)
        if v is not None:
            head += f" {key}={v}"
    lines.append(head)
    for c, f in doc.circuit.terms:
        lines.append(f"term coeff={c} poly={format_poly(f)}")
    return "\n".join(lines) + "\n"


def make_doc(circuit: PowCircuitMulti, r=None, s=None, delta=None) -> CircuitDoc:
    return CircuitDoc(circuit.field.p, circuit.n, circuit.d, r, s, delta, circuit)


def evaluate_circuit(c: PowCircuitMulti, point) -> FpElem:
    return c.evaluate(point)


class OracleHandle:
    """Black-box evaluator with a monotone call counter (one per point)."""

    def __init__(self, field: PrimeField, n: int, fn, batch_fn=None):
        self.field = field
        self.n = n
        self._fn = fn
        self._batch = batch_fn
        self.calls = 0

    def __call__(self, point) -> FpElem:
        if len(point) != self.n:
            raise ParameterError(f"point has {len(point)} coordinates, expected {self.n}")
        self.calls += 1
        return FpElem(int(self._fn(point)), self.field)

    def evaluate_batch(self, points) -> np.ndarray:
        P = np.asarray(points)
        self.calls += P.shape[0]
        if self._batch is not None:
            return np.asarray(self._batch(P))
        return np.array([int(self._fn(tuple(row))) for row in P], dtype=object)


def circuit_oracle(c: PowCircuitMulti) -> OracleHandle:
    return OracleHandle(c.field, c.n, lambda pt: c.evaluate(pt).value, c.evaluate_batch)


def _inverse_vandermonde(D: int, p: int) -> list:
    V = [[pow(x, k, p) for k in range(D + 1)] + [1 if i == x else 0 for i in range(D + 1)]
         for x in range(D + 1)]
    R, _ = rref(V, p)
    return [[int(v) for v in row[D + 1:]] for row in R]


def interpolate_dense(oracle, field: PrimeField, n: int, D: int) -> SparsePoly:
    """Full expansion of a degree <= D black box from the grid {0..D}^n."""
    p = field.p
    if p <= D:
        raise ParameterError(f"dense interpolation needs p > D; got p={p}, D={D}")
    grid = np.array(np.meshgrid(*[np.arange(D + 1)] * n, indexing="ij")).reshape(n, -1).T
    vals = oracle.evaluate_batch(grid) if hasattr(oracle, "evaluate_batch") else \
        [int(oracle(tuple(int(x) for x in row))) for row in grid]
    T = np.array([int(v) % p for v in vals], dtype=object).reshape((D + 1,) * n)
    Vinv = np.array(_inverse_vandermonde(D, p), dtype=object)
    for axis in range(n):
        T = np.moveaxis(np.tensordot(Vinv, np.moveaxis(T, axis, 0), axes=(1, 0)) % p, 0, axis)
    terms = {tuple(int(i) for i in idx): int(c) for idx, c in np.ndenumerate(T) if int(c)}
    return SparsePoly(field, n, terms)


def sample_points(field: PrimeField, n: int, k: int, seed: int = 0) -> list:
    rng = random.Random(seed)
    return [tuple(rng.randrange(field.p) for _ in range(n)) for _ in range(k)]
