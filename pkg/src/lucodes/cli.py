"""Command-line front end.

Exit codes: 0 success, 1 a verification or equivalence check failed,
2 usage error (including a q that is not a prime power).

Files named with a relative ``--out`` path are written below
``$LUCODES_OUTPUT_DIR`` when that variable is set, else below the current
directory. ``--out -`` writes to stdout.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Optional, Sequence

from .fq import FieldError, make_field
from .geometry import quadrangle
from .gf2 import rank
from .incidence import build_geometric, build_h3q, dump_matrix
from .klein import equivalence_check
from .ldpc import alist_text, code_from_h3q, results_csv, simulate
from .verify import expected_rank_P1L1, expected_rank_PL, is_odd, run_suite

log = logging.getLogger("lucodes")

OUTPUT_DIR_ENV = "LUCODES_OUTPUT_DIR"
MATRICES = ("PL", "P1L1", "PL1", "P1L", "H3Q")


def _q_arg(text: str) -> int:
    try:
        q = int(text)
        make_field(q)
    except (ValueError, FieldError) as exc:
        raise argparse.ArgumentTypeError(f"q={text}: {exc}") from None
    return q


def _matrix(q: int, which: str):
    if which == "H3Q":
        return build_h3q(make_field(q)).matrix
    G = quadrangle(q)
    rows, cols = {"PL": ("P", "L"), "P1L1": ("P1", "L1"), "PL1": ("P", "L1"), "P1L": ("P1", "L")}[which]
    return build_geometric(G, rows, cols).matrix


def _emit(text: str, out: Optional[str]) -> Optional[Path]:
    if out is None or out == "-":
        sys.stdout.write(text)
        return None
    path = Path(out)
    if not path.is_absolute():
        path = Path(os.environ.get(OUTPUT_DIR_ENV, ".")) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    log.info("wrote %s", path)
    return path


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_build(args) -> int:
    M = _matrix(args.q, args.which)
    if args.format == "alist":
        text = alist_text(M)
    elif args.format == "json":
        dense = M.to_dense()
        text = _dumps({
            "q": args.q,
            "which": args.which,
            "n_rows": M.n_rows,
            "n_cols": M.n_cols,
            "rows": [[int(j) for j in row.nonzero()[0]] for row in dense],
        })
    else:
        text = dump_matrix(M)
    out = args.out if args.out is not None else f"{args.which}_q{args.q}.{args.format if args.format != 'text' else 'txt'}"
    path = _emit(text, out)
    if path is not None:
        sys.stdout.write(_dumps({"q": args.q, "which": args.which, "shape": [M.n_rows, M.n_cols], "path": str(path)}))
    return 0


def _expected_rank(q: int, which: str):
    if which == "PL":
        return expected_rank_PL(q)
    if which in ("P1L1", "H3Q"):
        return expected_rank_P1L1(q) if is_odd(q) else None
    return None


def cmd_rank(args) -> int:
    computed = rank(_matrix(args.q, args.which))
    expected = _expected_rank(args.q, args.which)
    record = {
        "q": args.q,
        "which": args.which,
        "computed": computed,
        "expected": expected if expected is not None else "n/a (even q)" if args.which in ("P1L1", "H3Q") else "n/a",
        "pass": (computed == expected) if expected is not None else None,
    }
    if args.format == "text":
        verdict = "" if expected is None else (" PASS" if record["pass"] else " FAIL")
        sys.stdout.write(f"{computed}\nexpected {record['expected']}{verdict}\n")
    else:
        sys.stdout.write(_dumps(record))
    return 0 if record["pass"] in (True, None) else 1


def cmd_verify(args) -> int:
    block = run_suite(args.q, args.suite, sample=args.sample, seed=args.seed)
    if not args.timings:
        block.pop("seconds", None)
        if "ranks" in block:
            block["ranks"].pop("seconds", None)
    _emit(_dumps(block), args.out)
    return 0 if block["passed"] else 1


def cmd_equiv(args) -> int:
    report = equivalence_check(make_field(args.q))
    _emit(_dumps(asdict(report)), args.out)
    if not report.passed:
        sys.stderr.write(f"equivalence FAILED: {report.message}\n")
        return 1
    return 0


def cmd_simulate(args) -> int:
    C = code_from_h3q(make_field(args.q), transpose=not args.untransposed)
    result = simulate(C, args.channel, args.param, args.trials, args.seed, max_iters=args.max_iters)
    _emit(results_csv([result]), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lucodes", description="LU(3,q) codes from the symplectic quadrangle")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    def with_q(p):
        p.add_argument("--q", type=_q_arg, required=True, help="field order, a prime power")
        return p

    p = with_q(sub.add_parser("build", help="write an incidence matrix"))
    p.add_argument("--which", choices=MATRICES, required=True)
    p.add_argument("--format", choices=("text", "json", "alist"), default="text")
    p.add_argument("--out", help="output file ('-' for stdout)")
    p.set_defaults(func=cmd_build)

    p = with_q(sub.add_parser("rank", help="2-rank of an incidence matrix"))
    p.add_argument("--which", choices=MATRICES, required=True)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_rank)

    p = with_q(sub.add_parser("verify", help="check rank formulas and lemmas"))
    p.add_argument("--suite", choices=("all", "lemmas", "formulas"), default="all")
    p.add_argument("--sample", type=int, default=None, help="lines per lemma check (default: all)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timings", action="store_true", help="include wall-clock timings")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_verify)

    p = with_q(sub.add_parser("equiv", help="certify M(P1,L1) against H(3,q)"))
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_equiv)

    p = with_q(sub.add_parser("simulate", help="channel simulation, CSV output"))
    p.add_argument("--channel", choices=("bsc", "bec"), required=True)
    p.add_argument("--param", type=float, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iters", type=int, default=50)
    p.add_argument("--untransposed", action="store_true", help="use H(3,q) itself as the parity-check matrix")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ValueError as exc:
        parser.exit(2, f"lucodes: error: {exc}\n")


if __name__ == "__main__":
    sys.exit(main())
