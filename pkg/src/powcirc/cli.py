"""Command-line interface: ``powcirc {pit,reconstruct,hitting-set,selftest}``.

Exit codes: 0 success (including a ZERO/NONZERO verdict), 1 reconstruction or
verification failure, 2 usage or parse error, 3 unsupported parameters.
"""
from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from .circuit_io import (
    circuit_oracle,
    interpolate_dense,
    make_doc,
    parse_circuit,
    sample_points,
    serialize_circuit,
)
from .errors import (
    CircuitFormatError,
    DecodeFailure,
    InconsistentInputError,
    PowCircError,
    ReconstructionFailure,
    UnsupportedParametersError,
)
from .field import PrimeField
from .hitting import build_hitting_set, hitting_set_sizes, pit_test
from .reconstruct import FAST, THEOREM, reconstruct_multivariate

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNSUPPORTED = 0, 1, 2, 3


class _UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        num, _, den = text.partition("/")
        value = Fraction(int(num), int(den) if den else 1)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a/b with integers, got {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("epsilon must be positive")
    return value


def _verify_mode(text: str):
    if text in ("expand", "none"):
        return (text, 0)
    if text.startswith("sample:"):
        try:
            k = int(text.split(":", 1)[1])
        except ValueError:
            k = 0
        if k > 0:
            return ("sample", k)
    raise argparse.ArgumentTypeError("expected expand, none or sample:<k>")


def _read_doc(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_circuit(text)


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def cmd_pit(args) -> int:
    doc = _read_doc(args.circuit)
    r, s, delta = doc.bounds()
    hs = build_hitting_set(doc.field, doc.n, r, s, doc.d, delta, args.eps,
                           clip_to_field=args.profile == FAST)
    verdict = pit_test(circuit_oracle(doc.circuit), hs)
    print(verdict)
    return EXIT_OK


def _jobs(args) -> int:
    if args.jobs is not None:
        return args.jobs
    env = os.environ.get("POWCIRC_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise _UsageError(f"POWCIRC_JOBS must be an integer, got {env!r}") from None
    return 1


def cmd_reconstruct(args) -> int:
    doc = _read_doc(args.circuit)
    r, s, delta = doc.bounds()
    F = doc.field
    oracle = circuit_oracle(doc.circuit)
    try:
        found = reconstruct_multivariate(oracle, F, doc.n, r, s, delta, doc.d,
                                         profile=args.profile, scan=args.scan, jobs=_jobs(args))
    except (ReconstructionFailure, DecodeFailure, InconsistentInputError) as exc:
        print(f"error: reconstruction failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    calls = oracle.calls
    mode, k = args.verify
    if mode == "expand":
        want = interpolate_dense(oracle, F, doc.n, doc.d * delta)
        if found.expand() != want:
            print("error: expansion of the result differs from the oracle", file=sys.stderr)
            return EXIT_FAIL
    elif mode == "sample":
        for pt in sample_points(F, doc.n, k):
            if found.evaluate(pt) != oracle(pt):
                print(f"error: result differs from the oracle at {pt}", file=sys.stderr)
                return EXIT_FAIL
    if args.cheat_verify and found.normalized() != doc.circuit.normalized():
        print("error: result differs from the circuit file", file=sys.stderr)
        return EXIT_FAIL
    _write(args.out, serialize_circuit(make_doc(found, r, s, delta)))
    print(f"OK terms={len(found)} oracle_calls={calls}")
    return EXIT_OK


def cmd_hitting_set(args) -> int:
    q, t, m, min_p = hitting_set_sizes(args.n, args.r, args.s, args.d, args.delta, args.eps)
    p = args.p if args.p is not None else min_p
    try:
        F = PrimeField(p)
    except PowCircError as exc:
        raise _UsageError(str(exc)) from None
    hs = build_hitting_set(F, args.n, args.r, args.s, args.d, args.delta, args.eps)
    _write(args.out, hs.serialize())
    if args.out not in (None, "-"):
        print(f"hittingset points={len(hs)} p={p} q={hs.q} t={hs.t} mk={hs.m}")
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .selftest import run

    return EXIT_OK if run(verbose=not args.quiet) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="powcirc", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pit", help="black-box identity test of a circuit file")
    p.add_argument("circuit")
    p.add_argument("--eps", type=_fraction, default=Fraction(1, 2))
    p.add_argument("--profile", choices=[THEOREM, FAST], default=THEOREM)
    p.set_defaults(func=cmd_pit)

    p = sub.add_parser("reconstruct", help="recover a circuit through its evaluation oracle")
    p.add_argument("circuit")
    p.add_argument("--out")
    p.add_argument("--verify", type=_verify_mode, default=("expand", 0))
    p.add_argument("--profile", choices=[THEOREM, FAST], default=FAST)
    p.add_argument("--scan", choices=["lazy", "exhaustive"], default="lazy")
    p.add_argument("--jobs", type=int)
    p.add_argument("--cheat-verify", action="store_true")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("hitting-set", help="write the hitting set for given parameters")
    for name in ("n", "r", "s", "d", "delta"):
        p.add_argument(f"--{name}", type=int, required=True)
    p.add_argument("--eps", type=_fraction, default=Fraction(1, 2))
    p.add_argument("--p", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_hitting_set)

    p = sub.add_parser("selftest", help="run the bundled invariant corpus")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_selftest)
    return ap


def cli_main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CircuitFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnsupportedParametersError as exc:
        print(f"error: unsupported parameters: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except PowCircError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main():
    sys.exit(cli_main())
