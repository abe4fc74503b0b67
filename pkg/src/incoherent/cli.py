"""Command-line entry point: ``incoherent <command> [flags]``.

Exit codes: 0 success, 1 usage or I/O error, 2 construction failure,
3 recovery failed although the coherence condition held.
"""

from __future__ import annotations

import argparse
import math
import shlex
import sys
from pathlib import Path

from .bounds import bounds_report, cap_measure_exact, welch_bound
from .construct import ConstructionParams, construct
from .errors import InvalidParameterError, MatrixFormatError
from .matrix import coherence, dumps_matrix, load_matrix, max_recoverable_sparsity
from .recovery import monte_carlo_cap, recovery_experiment, ric_brute_force
from .reports import envelope, manifest, to_csv, to_json

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONSTRUCTION_FAILED = 2
EXIT_GUARANTEE_VIOLATED = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _u64(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return value


def _emit(text):
    sys.stdout.write(text)
    sys.stdout.flush()


def _log(msg):
    print(msg, file=sys.stderr)


def _write(path, text):
    try:
        Path(path).write_text(text, encoding="ascii")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror or exc}") from None


def _load(path):
    try:
        return load_matrix(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    except MatrixFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


def cmd_construct(args, cmdline):
    params = ConstructionParams(
        N=args.N, s=args.s, m=args.m, seed=args.seed, budget=args.budget, threshold=args.threshold
    )
    _log(f"constructing {params.m}x{params.N} matrix, threshold {params.threshold:.6g}, seed {params.seed}")
    matrix, report = construct(params)
    _log(f"{report.outcome} after {report.candidates_drawn} candidates in {report.elapsed:.3f}s")
    if params.threshold_exceeds_recovery_limit:
        _log("warning: threshold >= 1/(2s-1); recovery of every s-sparse signal is not guaranteed")
    doc = to_json(envelope("construction", report.to_dict(), manifest(cmdline, params.seed)))
    if matrix is not None:
        _write(args.out, dumps_matrix(matrix))
    _write(args.report, doc)
    _emit(doc)
    return EXIT_OK if report.success else EXIT_CONSTRUCTION_FAILED


def cmd_analyze(args, cmdline):
    a = _load(args.matrix)
    mu = coherence(a)
    welch = welch_bound(a.m, a.N) if a.N >= 2 else 0.0
    limit = max_recoverable_sparsity(mu)
    body = {
        "m": a.m,
        "N": a.N,
        "coherence": mu,
        "welch_bound": welch,
        "welch_gap": mu - welch,
        "max_recoverable_sparsity": "unbounded" if limit == math.inf else limit,
        "matrix_sha256": a.sha256(),
    }
    if args.s is not None:
        body["s"] = args.s
        body["condition_for_s"] = mu * (2 * args.s - 1) < 1
    _emit(to_json(envelope("analysis", body, manifest(cmdline))))
    return EXIT_OK


def cmd_bounds(args, cmdline):
    report = bounds_report(args.s, args.N, args.m, args.budget)
    doc = envelope("bounds", report.to_dict(), manifest(cmdline))
    _emit(to_csv(doc) if args.csv else to_json(doc))
    return EXIT_OK


def cmd_recover(args, cmdline):
    a = _load(args.matrix)
    if not 1 <= args.s <= min(a.m, a.N):
        raise InvalidParameterError(f"--s must lie in [1, {min(a.m, a.N)}]")
    _log(f"running {args.trials} OMP trials at s={args.s}")
    summary = recovery_experiment(a, args.s, args.trials, args.seed)
    doc = envelope("recovery", summary, manifest(cmdline, args.seed))
    _emit(to_csv(doc) if args.csv else to_json(doc))
    if summary["condition_held"] and summary["success_rate"] < 1.0:
        _log("recovery failed although the coherence condition held")
        return EXIT_GUARANTEE_VIOLATED
    return EXIT_OK


def cmd_montecarlo(args, cmdline):
    est, se = monte_carlo_cap(args.m, args.t, args.samples, args.seed)
    exact = cap_measure_exact(args.m, args.t)
    body = {
        "m": args.m,
        "t": args.t,
        "samples": args.samples,
        "estimate": est,
        "standard_error": se,
        "exact": exact,
    }
    _emit(to_json(envelope("montecarlo", body, manifest(cmdline, args.seed))))
    return EXIT_OK


def cmd_ric(args, cmdline):
    a = _load(args.matrix)
    est = ric_brute_force(a, args.s)
    _emit(to_json(envelope("ric", est.to_dict(), manifest(cmdline))))
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="incoherent", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("construct", help="build a matrix by seeded rejection sampling")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--m", type=int, default=None, help="rows (default: sizing rule)")
    p.add_argument("--seed", type=_u64, required=True)
    p.add_argument("--budget", type=int, default=10)
    p.add_argument("--threshold", type=float, default=None, help="default 1/(2s)")
    p.add_argument("--out", required=True, help="matrix file")
    p.add_argument("--report", required=True, help="JSON report file")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("analyze", help="coherence and Welch gap of a matrix file")
    p.add_argument("--matrix", required=True)
    p.add_argument("--s", type=int, default=None)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("bounds", help="closed-form bounds for (s, N, m)")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--budget", type=int, default=10)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("recover", help="OMP recovery experiment on a matrix file")
    p.add_argument("--matrix", required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=_u64, required=True)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("montecarlo", help="Monte Carlo estimate of a spherical cap pair")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=_u64, required=True)
    p.set_defaults(func=cmd_montecarlo)

    p = sub.add_parser("ric", help="brute-force restricted isometry constant")
    p.add_argument("--matrix", required=True)
    p.add_argument("--s", type=int, required=True)
    p.set_defaults(func=cmd_ric)
    return parser


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    cmdline = shlex.join(["incoherent", *argv])
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, cmdline)
    except UsageError as exc:
        _log(str(exc))
        return EXIT_USAGE
    except InvalidParameterError as exc:
        _log(f"incoherent: error: {exc}")
        return EXIT_USAGE
    except SystemExit as exc:
        # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
