"""Command-line entry point.

Exit codes: 0 on success, 1 when a solve ends infeasible or at the zero
vector (the JSON report is still written), 2 on usage or input errors.
Diagnostics go to standard error; data goes to files or standard output.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys

import numpy as np

from . import __version__
from .analysis import CertificateReport, cmsv_search, kernel_ratio_search, level_exponent
from .bench import load_spec, run_bench, run_toy_scan, toy_csvs, write_outputs
from .ensembles import EnsembleKind, EnsembleSpec, make_matrix, noisy_measurements, sparse_signal
from .model import (
    RecoveryProblem,
    Termination,
    derive_seed,
    format_q,
    parse_q,
    read_matrix,
    read_vector,
    write_matrix,
    write_vector,
)
from .solvers import METHODS, SolverOptions, f_value, solve
from .sparsity import q_ratio_sparsity

log = logging.getLogger("qratio")


class UsageError(Exception):
    pass


def _q(text: str) -> float:
    try:
        return parse_q(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _solver_q(text: str) -> float:
    q = _q(text)
    if not q > 1:
        raise argparse.ArgumentTypeError(f"q must exceed 1, got {text}")
    return q


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _nonneg(text: str) -> float:
    v = float(text)
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative number, got {text}")
    return v


def _version_text() -> str:
    from importlib.metadata import version

    import scipy

    return (
        f"qratio {__version__} (python {sys.version.split()[0]}, numpy {np.__version__}, "
        f"scipy {scipy.__version__}, highspy {version('highspy')})"
    )


def _emit_json(obj, out):
    text = json.dumps(obj, indent=2) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _options(args) -> SolverOptions:
    kw = {}
    if getattr(args, "a_cap", None) is not None:
        kw["cap_factor"] = args.a_cap
    if getattr(args, "delta", None) is not None:
        kw["delta"] = args.delta
    if getattr(args, "lp_formulation", None) is not None:
        kw["lp_formulation"] = args.lp_formulation
    return SolverOptions(**kw)


def _problem(args) -> RecoveryProblem:
    a = read_matrix(args.matrix)
    y = read_vector(args.y)
    if y.shape[0] != a.shape[0]:
        raise UsageError(f"{args.y}: length {y.shape[0]} does not match {a.shape[0]} matrix rows")
    return RecoveryProblem(a, y, args.eta, args.q)


# ---------------------------------------------------------------------------
# Subcommands


def cmd_gen(args) -> int:
    spec = EnsembleSpec(EnsembleKind.parse(args.kind), args.m, args.N, args.F, args.seed)
    a = make_matrix(spec)
    write_matrix(args.out, a)
    log.info("wrote %dx%d %s matrix to %s", args.m, args.N, spec.kind.value, args.out)
    if args.k is not None:
        truth = sparse_signal(args.N, args.k, derive_seed(args.seed, 1))
        y, eta = noisy_measurements(a, truth.signal, args.sigma, derive_seed(args.seed, 2))
        if args.x_out:
            write_vector(args.x_out, truth.signal)
        if args.y_out:
            write_vector(args.y_out, y)
        print(f"eta={eta!r}")
    return 0


def cmd_sparsity(args) -> int:
    z = read_vector(args.vector)
    sv = q_ratio_sparsity(z, args.q)
    out = sys.stdout
    out.write(f"q,{format_q(sv.q)}\nvalue,{sv.value!r}\nentropy,{sv.entropy!r}\n")
    out.write("index,pi\n")
    for i, p in enumerate(sv.normalized_profile):
        out.write(f"{i},{float(p)!r}\n")
    return 0


def cmd_solve(args) -> int:
    problem = _problem(args)
    report = solve(problem, args.method, _options(args))
    _emit_json(report.to_dict(), args.out)
    log.info("%s: %s after %d outer iterations", args.method, report.termination.value, report.outer_iterations)
    if report.termination in (Termination.INFEASIBLE, Termination.DEGENERATE_ZERO):
        log.error("solve ended %s", report.termination.value)
        return 1
    return 0


def cmd_fvalue(args) -> int:
    problem = _problem(args)
    value = f_value(problem, args.lam, "exact" if args.exact else "dca", _options(args))
    if math.isnan(value):
        log.error("Q(lambda) is infeasible")
        return 1
    print(repr(value))
    return 0


def cmd_kernel_ratio(args) -> int:
    a = read_matrix(args.matrix)
    kr = kernel_ratio_search(a, args.q, args.restarts, args.seed, threads=args.threads)
    threshold = math.inf if math.isinf(kr.value) else (kr.value / 3.0) ** level_exponent(args.q)
    report = CertificateReport(
        q=args.q,
        kernel_ratio_inf=kr.value,
        sufficient_k=threshold,
        approximate=[] if kr.exact else ["kernel_ratio_inf", "sufficient_k"],
    )
    out = report.to_dict()
    if args.k is not None:
        out["k"] = args.k
        out["sufficient_condition_holds"] = bool(args.k < threshold)
    _emit_json(out, args.out)
    return 0


def cmd_cmsv(args) -> int:
    a = read_matrix(args.matrix)
    if not 1 <= args.s <= a.shape[1]:
        raise UsageError(f"--s must lie in [1, {a.shape[1]}], got {args.s}")
    est = cmsv_search(a, args.q, args.s, args.restarts, args.seed, threads=args.threads)
    report = CertificateReport(q=args.q, cmsv_estimate=est.value, cmsv_level=est.level, approximate=["cmsv_estimate"])
    _emit_json(report.to_dict(), args.out)
    return 0


def cmd_toy(args) -> int:
    scan = run_toy_scan(with_dca=not args.no_dca)
    paths = write_outputs(args.out, toy_csvs(scan))
    for p in paths:
        log.info("wrote %s", p)
    return 0


def cmd_bench(args) -> int:
    try:
        spec = load_spec(args.spec)
    except FileNotFoundError as exc:
        raise UsageError(str(exc)) from None
    paths = run_bench(spec, args.out, full=args.full, threads=args.threads)
    for p in paths:
        log.info("wrote %s", p)
    return 0


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qratio", description="Sparse recovery by q-ratio sparsity minimisation.")
    parser.add_argument("--version", action="version", version=_version_text())
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more diagnostics on stderr")
    parser.add_argument(
        "--threads", type=_positive_int, default=os.cpu_count() or 1,
        help="worker threads for bench and multi-start searches (default: all cores)",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("gen", help="generate a sensing matrix (and optionally a sparse instance)")
    p.add_argument("--kind", choices=["gaussian", "dct", "oversampled_dct"], default="gaussian")
    p.add_argument("--m", type=_positive_int, required=True)
    p.add_argument("--N", type=_positive_int, required=True)
    p.add_argument("--F", type=float, default=None, help="DCT oversampling factor")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="matrix file")
    p.add_argument("--k", type=_positive_int, default=None, help="also draw a k-sparse signal")
    p.add_argument("--sigma", type=_nonneg, default=0.0, help="noise standard deviation")
    p.add_argument("--x-out", default=None, help="signal file (with --k)")
    p.add_argument("--y-out", default=None, help="measurement file (with --k)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("sparsity", help="q-ratio sparsity of a vector")
    p.add_argument("--q", type=_q, required=True)
    p.add_argument("--vector", required=True)
    p.set_defaults(func=cmd_sparsity)

    def problem_args(p):
        p.add_argument("--q", type=_solver_q, required=True)
        p.add_argument("--matrix", required=True)
        p.add_argument("--y", required=True)
        p.add_argument("--eta", type=float, default=0.0)
        p.add_argument("--a-cap", type=float, default=None, help="l1 cap multiplier kappa")
        p.add_argument("--delta", type=float, default=None, help="parametric stopping tolerance")

    p = sub.add_parser("solve", help="recover a sparse signal")
    p.add_argument("--method", choices=METHODS, required=True)
    problem_args(p)
    p.add_argument("--lp-formulation", choices=["signed", "joint"], default=None)
    p.add_argument("--out", default="-", help="JSON report path (default: stdout)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("fvalue", help="optimal value F(lambda) of the parametric subproblem")
    p.add_argument("--lam", type=float, required=True)
    problem_args(p)
    p.add_argument("--exact", action="store_true", help="enumerate basic solutions (small noiseless problems)")
    p.set_defaults(func=cmd_fvalue)

    p = sub.add_parser("kernel-ratio", help="kernel ratio infimum and sufficient sparsity level")
    p.add_argument("--q", type=_solver_q, required=True)
    p.add_argument("--matrix", required=True)
    p.add_argument("--k", type=float, default=None, help="sparsity to test against the threshold")
    p.add_argument("--restarts", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_kernel_ratio)

    p = sub.add_parser("cmsv", help="constrained minimal singular value estimate")
    p.add_argument("--q", type=_solver_q, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--matrix", required=True)
    p.add_argument("--restarts", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_cmsv)

    p = sub.add_parser("toy", help="objective scans on the 5x6 toy system")
    p.add_argument("--out", default="toy_out", help="output directory")
    p.add_argument("--no-dca", action="store_true", help="skip the DCA values of F")
    p.set_defaults(func=cmd_toy)

    p = sub.add_parser("bench", help="run an experiment from a config file or built-in name")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--full", action="store_true", help="full replication count and matrix size")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="qratio: %(message)s",
    )
    if getattr(args, "eta", 0.0) < 0:
        parser.error(f"--eta must be >= 0, got {args.eta}")
    try:
        return args.func(args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"qratio {args.command}: error: {exc}", file=sys.stderr)
        return 2
