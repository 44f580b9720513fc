"""Command-line front end.

Subcommands: ``spectrum``, ``verify``, ``sweep`` and ``boundary``.
Exit codes: 0 success, 1 a verified identity failed, 2 numerical failure,
64 usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional, Sequence

from . import serialize
from .errors import DomainError, PPTError, SolverError
from .hamiltonian import ModelParams, build_matrix
from .recurrence import SolveOptions, solve_sector
from .sweep import SweepGrid, locate_boundary, resolve_threads, run_sweep
from .symmetry import classify, conjugate_partners, verify_propositions

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_NUMERICAL = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _finite(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"must be finite: {text!r}")
    return value


def _positive(text: str) -> float:
    value = _finite(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _degree(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError("degree must be nonnegative")
    return value


def parse_range(text: str):
    """``"a:b:n"`` -> ``(a, b, n)``."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"range must look like min:max:steps, got {text!r}")
    lo, hi = _finite(parts[0]), _finite(parts[1])
    try:
        steps = int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"steps must be an integer, got {parts[2]!r}")
    if steps < 1 or lo > hi:
        raise argparse.ArgumentTypeError(f"need steps >= 1 and min <= max, got {text!r}")
    return lo, hi, steps


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=_degree, required=True, help="sector degree (total boson number)")
    common.add_argument("--epsilon0", type=_finite, default=1.0, help="on-site energy difference (default 1)")
    common.add_argument("--gamma", type=_finite, default=0.0, help="tunneling magnitude (default 0)")
    common.add_argument("--alpha", type=_finite, default=0.0, help="interaction strength (default 0)")
    common.add_argument("--real-tol", type=_positive, default=1e-9, help="relative |Im lambda| cut for 'real' (default 1e-9)")
    common.add_argument("--sym-tol", type=_positive, default=1e-8, help="defect cut for symmetric/antisymmetric (default 1e-8)")
    common.add_argument("--out", default="-", help="output file, '-' for stdout (default)")

    parser = _Parser(prog="pptdimer", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("spectrum", parents=[common], help="eigenpairs and their symmetry classes")
    sp.add_argument("--format", choices=("json", "human"), default="json")
    sp.add_argument("--normalization", choices=("first", "fock"), default="first")

    vp = sub.add_parser("verify", parents=[common], help="adjoint and conjugation identities of H")
    vp.add_argument("--format", choices=("json", "human"), default="json")

    for name, help_text in (("sweep", "real-eigenvalue counts over a (gamma, alpha) grid"),
                            ("boundary", "bisect where the real-eigenvalue count changes")):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--gamma-range", type=parse_range, help="min:max:steps")
        p.add_argument("--alpha-range", type=parse_range, help="min:max:steps")
        p.add_argument("--format", choices=("csv", "json", "human"), default="csv" if name == "sweep" else "json")
        p.add_argument("--threads", type=int, default=None, help="worker processes (default $PPT_THREADS or 1)")
    sub.choices["sweep"].add_argument("--spectrum", action="store_true", help="include eigenvalues (json only)")
    sub.choices["boundary"].add_argument("--axis", choices=("gamma", "alpha"), default=None)
    sub.choices["boundary"].add_argument("--width", type=_positive, default=1e-6)
    return parser


def _options(args) -> SolveOptions:
    return SolveOptions(real_tol=args.real_tol, normalization=getattr(args, "normalization", "first"))


def _params(args) -> ModelParams:
    return ModelParams(args.gamma, args.alpha, args.epsilon0)


def cmd_spectrum(args):
    params = _params(args)
    pairs = solve_sector(args.m, params, _options(args))
    reports = [classify(p, args.sym_tol) for p in pairs]
    doc = serialize.spectrum_doc(args.m, params, pairs, reports, conjugate_partners(pairs))
    text = serialize.to_json(doc) if args.format == "json" else serialize.spectrum_text(doc)
    return text, EXIT_OK


def cmd_verify(args):
    params = _params(args)
    reports = verify_propositions(args.m, params)
    doc = serialize.verify_doc(args.m, params, reports, build_matrix(args.m, params).norm())
    text = serialize.to_json(doc) if args.format == "json" else serialize.verify_text(doc)
    ok = all(r.verdict is not False for r in reports)
    return text, EXIT_OK if ok else EXIT_CHECK_FAILED


def _grid(args, keep_spectrum=False) -> SweepGrid:
    g = args.gamma_range or (args.gamma, args.gamma, 1)
    a = args.alpha_range or (args.alpha, args.alpha, 1)
    return SweepGrid(
        args.m, g, a, args.epsilon0, _options(args), args.sym_tol, keep_spectrum=keep_spectrum
    )


def cmd_sweep(args):
    grid = _grid(args, keep_spectrum=args.spectrum)
    results = run_sweep(grid, resolve_threads(args.threads))
    if args.format == "csv":
        return serialize.sweep_csv(results), EXIT_OK
    if args.format == "json":
        return serialize.to_json(serialize.sweep_doc(args.m, args.epsilon0, results)), EXIT_OK
    return serialize.sweep_text(results), EXIT_OK


def cmd_boundary(args):
    axis = args.axis
    if axis is None:
        if (args.gamma_range is None) == (args.alpha_range is None):
            raise UsageError("give exactly one of --gamma-range / --alpha-range, or --axis")
        axis = "gamma" if args.gamma_range is not None else "alpha"
    if (args.gamma_range if axis == "gamma" else args.alpha_range) is None:
        raise UsageError(f"--{axis}-range is required to scan {axis}")
    grid = _grid(args)
    points = locate_boundary(grid, axis, args.width, resolve_threads(args.threads))
    if args.format == "csv":
        return serialize.boundary_csv(points), EXIT_OK
    if args.format == "json":
        return serialize.to_json(serialize.boundary_doc(args.m, args.epsilon0, points)), EXIT_OK
    return serialize.boundary_text(points), EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "boundary": cmd_boundary,
}


def _write(text: str, out: str):
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, code = COMMANDS[args.command](args)
    except (UsageError, DomainError) as exc:
        print(f"pptdimer {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverError, PPTError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        best = getattr(exc, "best", None)
        if best:
            err["best"] = [serialize.complex_obj(z) for z in best]
            err["residuals"] = list(getattr(exc, "residuals", []))
        sys.stderr.write(json.dumps(err) + "\n")
        return EXIT_NUMERICAL
    _write(text, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
