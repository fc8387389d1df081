"""Command-line front end: ``edx {exact,gap,bound,audit,scale}``.

Inputs are two files read as raw bytes.  Exit status is 0 on success, 1 when
an audit finds a box whose bound is violated, 2 on usage errors and 3 when
the requested parameters are infeasible for the input length.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from .core import Counters, EstimateReport, OutOfRange, ParamInfeasible, normalize_pair
from .covering import audit_boxes, covering_algorithm, select_params
from .estimator import GapConfig, ed_ub, gap_ub, round_theta
from .exact_dp import edit_distance_full
from .harness import DEFAULT_ALPHABET, emit_jsonl, run_scaling_experiment

EXIT_OK, EXIT_AUDIT, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def _seed(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must lie in [0, 2**64)")
    return v


def _theta(text: str) -> Fraction:
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"theta must be a number, got {text!r}") from None
    if not 0 < v <= 1:
        raise argparse.ArgumentTypeError(f"theta must lie in (0, 1], got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="edx", description="Certified edit-distance upper bounds.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    files = _Parser(add_help=False)
    files.add_argument("x_path", metavar="X", help="first input file (raw bytes)")
    files.add_argument("y_path", metavar="Y", help="second input file (raw bytes)")
    files.add_argument("--strip-newline", action="store_true",
                       help="drop one trailing newline from each input")
    out = _Parser(add_help=False)
    out.add_argument("--json", action="store_true", help="print a JSON object")
    out.add_argument("--timing", action="store_true",
                     help="include wall_time in JSON output (breaks byte-identical reruns)")
    tune = _Parser(add_help=False)
    tune.add_argument("--seed", type=_seed, default=0)
    tune.add_argument("--c0", type=_positive_int, default=12, help="dense-test sampling constant")
    tune.add_argument("--c1", type=_positive_int, default=128,
                      help="extension sampling constant")

    sub.add_parser("exact", parents=[files, out], help="exact distance by the full DP")
    gap = sub.add_parser("gap", parents=[files, out, tune], help="gap algorithm for one theta")
    gap.add_argument("--theta", type=_theta, required=True)
    gap.add_argument("--dump-boxes", metavar="PATH",
                     help="write the certified boxes as text records")
    sub.add_parser("bound", parents=[files, out, tune], help="constant-factor upper bound")
    audit = sub.add_parser("audit", parents=[files, out, tune],
                           help="check sampled certified boxes against the exact DP")
    audit.add_argument("--theta", type=_theta, required=True)
    audit.add_argument("--audit-sample", type=_positive_int, default=200)
    audit.add_argument("--dump-boxes", metavar="PATH")

    scale = sub.add_parser("scale", help="dp-cell scaling experiment on planted instances")
    scale.add_argument("--theta", type=_theta, default=Fraction(1, 4))
    scale.add_argument("--ns", type=_positive_int, nargs="+",
                       default=[2 ** 12, 2 ** 13, 2 ** 14, 2 ** 15])
    scale.add_argument("--alphabet", type=_positive_int, default=DEFAULT_ALPHABET)
    scale.add_argument("--seed", type=_seed, default=0)
    scale.add_argument("--json", action="store_true", help="one JSON record per line")
    scale.add_argument("--output", metavar="PATH", help="write JSON records to PATH")
    return parser


def _read(path: str, strip: bool) -> bytes:
    with open(path, "rb") as fh:
        data = fh.read()
    if strip and data.endswith(b"\n"):
        data = data[:-1]
    return data


def _print_report(rep: EstimateReport, args) -> None:
    if args.json:
        print(json.dumps(rep.to_dict(timing=args.timing), sort_keys=True))
    else:
        theta = "none" if rep.theta is None else str(rep.theta)
        print(f"upper_bound={rep.upper_bound} n={rep.n} theta={theta}")


def _exact_theta(args) -> Fraction:
    theta = round_theta(args.theta)
    if theta != args.theta:
        print(f"note: theta {args.theta} rounded down to {theta}", file=sys.stderr)
    return theta


def _load_pair(args):
    x = _read(args.x_path, args.strip_newline)
    y = _read(args.y_path, args.strip_newline)
    pair = normalize_pair(x, y, 256)
    if pair.padded:
        print(f"note: {pair.note}", file=sys.stderr)
    return pair


def _cmd_exact(args) -> int:
    x = _read(args.x_path, args.strip_newline)
    y = _read(args.y_path, args.strip_newline)
    d = edit_distance_full(x, y)
    if args.json:
        n = max(len(x), len(y))
        rep = EstimateReport(n=n, theta=None, upper_bound=d,
                             counters=Counters(dp_cells=len(x) * len(y)), method="exact-full")
        print(json.dumps(rep.to_dict(timing=False), sort_keys=True))
    else:
        print(d)
    return EXIT_OK


def _cmd_gap(args) -> int:
    theta = _exact_theta(args)
    pair = _load_pair(args)
    if pair.n == 0:
        _print_report(EstimateReport(n=0, theta=theta, upper_bound=0, seed=args.seed,
                                     method="gap"), args)
        return EXIT_OK
    boxes: list = []
    rep = gap_ub(pair.x, pair.y, GapConfig(theta, c0=args.c0, c1=args.c1, seed=args.seed),
                 boxes_out=boxes)
    if args.dump_boxes:
        with open(args.dump_boxes, "w") as fh:
            boxes[0].dump(fh)
    _print_report(rep, args)
    return EXIT_OK


def _cmd_bound(args) -> int:
    x = _read(args.x_path, args.strip_newline)
    y = _read(args.y_path, args.strip_newline)
    if (len(x) == 0) != (len(y) == 0):
        rep = EstimateReport(n=max(len(x), len(y)), theta=None, upper_bound=len(x) + len(y),
                             seed=args.seed, method="exact-full")
    else:
        rep = ed_ub(x, y, seed=args.seed, c0=args.c0, c1=args.c1)
    _print_report(rep, args)
    return EXIT_OK


def _cmd_audit(args) -> int:
    theta = _exact_theta(args)
    pair = _load_pair(args)
    if pair.n == 0:
        raise OutOfRange("cannot run the covering phase on empty inputs")
    params = select_params(pair.n, theta, c0=args.c0, c1=args.c1, seed=args.seed)
    boxes = covering_algorithm(pair.x, pair.y, params)
    if args.dump_boxes:
        with open(args.dump_boxes, "w") as fh:
            boxes.dump(fh)
    rng = np.random.default_rng(np.random.SeedSequence([args.seed, 0xA0D17]))
    sample = boxes.sample(args.audit_sample, rng)
    bad = audit_boxes(pair.x, pair.y, sample)
    result = {"n": pair.n, "theta": str(theta), "seed": args.seed, "boxes": len(boxes),
              "sampled": len(sample), "violations": len(bad)}
    if args.json:
        print(json.dumps(result, sort_keys=True))
    else:
        print(" ".join(f"{k}={v}" for k, v in result.items()))
    for box, d in bad:
        print(f"violation: {box.box} kappa={box.kappa} distance={d}", file=sys.stderr)
    return EXIT_AUDIT if bad else EXIT_OK


def _cmd_scale(args) -> int:
    theta = _exact_theta(args)
    try:
        rep = run_scaling_experiment(args.ns, theta, seed=args.seed,
                                     alphabet_size=args.alphabet)
    except ValueError as exc:
        if isinstance(exc, (OutOfRange, ParamInfeasible)):
            raise
        print(f"edx scale: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.json or args.output:
        emit_jsonl(rep.to_records(), args.output)
    if not args.json:
        for n, cells, secs in rep.points:
            print(f"n={n} dp_cells={cells} wall_time={secs:.3f}")
        print(f"fitted_exponent={rep.fitted_exponent:.4f}")
    return EXIT_OK


_COMMANDS = {"exact": _cmd_exact, "gap": _cmd_gap, "bound": _cmd_bound, "audit": _cmd_audit,
             "scale": _cmd_scale}


def run_cli(argv: list[str] | None = None) -> int:
    """Parse ``argv`` and run one subcommand; returns the exit status."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (OutOfRange, ParamInfeasible) as exc:
        print(f"edx {args.command}: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OSError as exc:
        print(f"edx {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
