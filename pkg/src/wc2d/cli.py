"""Command-line front end: encode, decode, verify, stats, selftest."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .container import CorruptContainer, Header, frame, read_container, unframe, write_container
from .modes import MODES, Codec, constraint_for, make_codec
from .srt import InfeasibleParameters
from .verify import ConstraintReport, check

EXIT_OK, EXIT_VIOLATION, EXIT_INFEASIBLE, EXIT_CORRUPT, EXIT_IO = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, code: int, message: str) -> None:
        super().__init__(message)
        self.code = code


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"expected a rational A/B, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=MODES)
    common.add_argument("--n", type=int)
    common.add_argument("--m", type=int)
    common.add_argument("--p", type=_fraction, metavar="A/B")
    common.add_argument("--epsilon", type=_fraction, metavar="A/B")
    common.add_argument("--window-alpha", type=float, help="minimum window factor for rc-balanced-srt")
    common.add_argument("--in", dest="inp", metavar="PATH")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--json", action="store_true", help="machine-readable report")
    parser = argparse.ArgumentParser(prog="wc2d", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("encode", parents=[common], help="encode a file into arrays")
    sub.add_parser("decode", parents=[common], help="decode an array file")
    sub.add_parser("verify", parents=[common], help="check arrays against their constraint")
    sub.add_parser("stats", parents=[common], help="redundancy and rate of a parameter point")
    sub.add_parser("selftest", parents=[common], help="run the oracle battery")
    return parser


def _codec(args: argparse.Namespace, header: Header | None = None) -> Codec:
    if header is not None:
        mode, n, m, p, eps = header.mode, header.n, header.m, header.p, header.eps
    else:
        if args.mode is None or args.n is None:
            raise CliError(EXIT_INFEASIBLE, "--mode and --n are required")
        mode, n, m, p, eps = args.mode, args.n, args.m, args.p, args.epsilon
    try:
        return make_codec(mode, n, m=m, p=p, eps=eps, alpha=args.window_alpha)
    except ValueError as exc:
        raise CliError(EXIT_INFEASIBLE, f"infeasible parameters: {exc}") from exc


def _read(path: str | None) -> bytes:
    try:
        return sys.stdin.buffer.read() if path in (None, "-") else Path(path).read_bytes()
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc}") from exc


def _write(path: str | None, data: bytes) -> None:
    try:
        if path in (None, "-"):
            sys.stdout.buffer.write(data)
            sys.stdout.buffer.flush()
        else:
            Path(path).write_bytes(data)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {path}: {exc}") from exc


def cmd_encode(args: argparse.Namespace) -> int:
    codec = _codec(args)
    blocks = frame(_read(args.inp), codec.payload_bits)
    arrays = [codec.encode(b) for b in blocks]
    header = Header(codec.mode, codec.n, codec.m, codec.p, codec.eps, len(arrays))
    _write(args.out, write_container(header, arrays))
    return EXIT_OK


def cmd_decode(args: argparse.Namespace) -> int:
    try:
        header, arrays = read_container(_read(args.inp))
        codec = _codec(args, header)
        data = unframe([codec.decode(a) for a in arrays])
    except CorruptContainer as exc:
        raise CliError(EXIT_CORRUPT, f"corrupt container: {exc}") from exc
    except (ValueError, ArithmeticError) as exc:
        raise CliError(EXIT_CORRUPT, f"corrupt array: {exc}") from exc
    _write(args.out, data)
    return EXIT_OK


def parse_text_array(text: str) -> np.ndarray:
    rows = ["".join(line.split()) for line in text.splitlines() if line.strip()]
    if not rows or any(set(r) - {"0", "1"} for r in rows):
        raise CliError(EXIT_CORRUPT, "text arrays must be rows of 0/1 characters")
    if len({len(r) for r in rows}) != 1 or len(rows) != len(rows[0]):
        raise CliError(EXIT_CORRUPT, "text array must be square")
    return np.array([[int(c) for c in r] for r in rows], dtype=np.uint8)


def _describe(report: ConstraintReport, index: int) -> str:
    if report.passed:
        return f"array {index}: pass (margins {report.margins})"
    v = report.first_violation
    lo, hi = v["allowed"]
    return f"array {index}: FAIL at {v['kind']} {v['index']} with weight {v['weight']} outside [{lo}, {hi}]"


def cmd_verify(args: argparse.Namespace) -> int:
    raw = _read(args.inp)
    if raw[:4] == b"WC2D":
        try:
            header, arrays = read_container(raw)
        except CorruptContainer as exc:
            raise CliError(EXIT_CORRUPT, f"corrupt container: {exc}") from exc
        spec_args = (header.mode, header.n, header.m, header.p, header.eps)
    else:
        arrays = [parse_text_array(raw.decode("ascii", errors="replace"))]
        if args.mode is None or args.n is None:
            raise CliError(EXIT_INFEASIBLE, "--mode and --n are required for text arrays")
        spec_args = (args.mode, args.n, args.m, args.p, args.epsilon)
    try:
        spec = constraint_for(*spec_args)
    except ValueError as exc:
        raise CliError(EXIT_INFEASIBLE, f"invalid constraint: {exc}") from exc
    try:
        reports = [check(a, spec) for a in arrays]
    except ValueError as exc:
        raise CliError(EXIT_CORRUPT, str(exc)) from exc
    if args.json:
        print(json.dumps([r.as_dict() for r in reports]))
    else:
        for i, r in enumerate(reports):
            print(_describe(r, i))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VIOLATION


def cmd_stats(args: argparse.Namespace) -> int:
    codec = _codec(args)
    formula, expected = codec.table_redundancy()
    stats = {
        "mode": codec.mode,
        "n": codec.n,
        "m": codec.m,
        "p": str(codec.p) if codec.p is not None else None,
        "epsilon": str(codec.eps) if codec.eps is not None else None,
        "array_bits": codec.n * codec.n,
        "payload_bits": codec.payload_bits,
        "redundancy_bits": codec.redundancy,
        "formula": formula,
        "formula_value": expected,
        "rate": codec.payload_bits / (codec.n * codec.n),
    }
    if args.json:
        print(json.dumps(stats))
    else:
        for key, value in stats.items():
            print(f"{key}: {value}")
    return EXIT_OK


def cmd_selftest(args: argparse.Namespace) -> int:
    from .selftest import run_all

    results = run_all()
    if args.json:
        print(json.dumps([{"check": name, "pass": ok, "detail": detail} for name, ok, detail in results]))
    else:
        for name, ok, detail in results:
            print(f"{'PASS' if ok else 'FAIL'} {name}" + (f": {detail}" if detail else ""))
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_VIOLATION


COMMANDS = {
    "encode": cmd_encode,
    "decode": cmd_decode,
    "verify": cmd_verify,
    "stats": cmd_stats,
    "selftest": cmd_selftest,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except CliError as exc:
        print(f"wc2d: {exc}", file=sys.stderr)
        return exc.code
    except InfeasibleParameters as exc:
        print(f"wc2d: infeasible parameters: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
