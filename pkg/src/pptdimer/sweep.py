"""Symmetry-breaking maps over the (gamma, alpha) plane for a fixed sector."""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .errors import DomainError, PPTError
from .hamiltonian import ModelParams
from .recurrence import SolveOptions, solve_sector
from .symmetry import classify

Range = Tuple[float, float, int]


def _check_range(name, rng):
    lo, hi, steps = rng
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise DomainError(f"{name} bounds must be finite")
    if int(steps) != steps or steps < 1:
        raise DomainError(f"{name} steps must be a positive integer, got {steps}")
    if lo > hi:
        raise DomainError(f"{name} min {lo} exceeds max {hi}")


def axis_values(rng: Range) -> np.ndarray:
    lo, hi, steps = rng
    if steps == 1:
        return np.array([float(lo)])
    return np.linspace(lo, hi, int(steps))


@dataclass(frozen=True)
class SweepGrid:
    m: int
    gamma_range: Range
    alpha_range: Range
    epsilon0: float = 1.0
    solve: SolveOptions = field(default_factory=SolveOptions)
    sym_tol: float = 1e-8
    marginal_factor: float = 10.0
    keep_spectrum: bool = False

    def __post_init__(self):
        if self.m < 0:
            raise DomainError(f"degree must be nonnegative, got {self.m}")
        _check_range("gamma_range", self.gamma_range)
        _check_range("alpha_range", self.alpha_range)
        if not math.isfinite(self.epsilon0):
            raise DomainError("epsilon0 must be finite")

    def points(self) -> List[Tuple[float, float]]:
        """Grid points in row-major order: alpha outer, gamma inner."""
        return [
            (float(g), float(a))
            for a in axis_values(self.alpha_range)
            for g in axis_values(self.gamma_range)
        ]


@dataclass(frozen=True)
class SweepResult:
    """Summary of one grid point.

    ``n_broken`` counts non-real eigenvalues.  ``min_imag_margin`` is the
    smallest ``|Im lam|`` among them (0 when the spectrum is entirely real).
    ``mismatches`` counts states whose reality flag disagrees with their
    partial-conjugation class; ``marginal`` flags points too close to an
    exceptional point for that comparison to be meaningful.
    """

    gamma: float
    alpha: float
    n_real: int = 0
    n_broken: int = 0
    min_imag_margin: float = 0.0
    marginal: bool = False
    mismatches: int = 0
    spectrum: Optional[Tuple[complex, ...]] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


def evaluate_point(grid: SweepGrid, gamma: float, alpha: float) -> SweepResult:
    params = ModelParams(gamma, alpha, grid.epsilon0)
    try:
        pairs = solve_sector(grid.m, params, grid.solve)
    except PPTError as exc:
        return SweepResult(gamma, alpha, error=f"{type(exc).__name__}: {exc}")

    real_tol = grid.solve.real_tol
    n_real = sum(p.is_real for p in pairs)
    imag = [abs(p.eigenvalue.imag) for p in pairs if not p.is_real]
    marginal = False
    mismatches = 0
    for p in pairs:
        margin = p.imag_margin
        # A split at the rounding level of a double root, any coalescence, or
        # an error bound wider than the realness test leaves the real/complex
        # dichotomy numerically undecided.
        if (
            p.multiplicity > 1
            or real_tol / grid.marginal_factor < margin <= real_tol * grid.marginal_factor
            or p.reality_ambiguous(real_tol)
        ):
            marginal = True
        report = classify(p, grid.sym_tol)
        if report.partial_unbroken != p.is_real:
            mismatches += 1
    return SweepResult(
        gamma,
        alpha,
        n_real=n_real,
        n_broken=len(pairs) - n_real,
        min_imag_margin=min(imag) if imag else 0.0,
        marginal=marginal,
        mismatches=mismatches,
        spectrum=tuple(p.eigenvalue for p in pairs) if grid.keep_spectrum else None,
    )


def _evaluate_chunk(args):
    grid, chunk = args
    return [evaluate_point(grid, g, a) for g, a in chunk]


def resolve_threads(threads: Optional[int] = None) -> int:
    """``threads`` if given, else ``$PPT_THREADS``, else 1."""
    if threads is None:
        env = os.environ.get("PPT_THREADS")
        try:
            threads = int(env) if env else 1
        except ValueError:
            raise DomainError(f"PPT_THREADS must be an integer, got {env!r}") from None
    if threads < 1:
        raise DomainError(f"thread count must be >= 1, got {threads}")
    return threads


def run_sweep(grid: SweepGrid, threads: Optional[int] = None) -> List[SweepResult]:
    """Solve and classify every grid point independently.

    Per-point failures are recorded in ``SweepResult.error``.  With more
    than one worker the grid is split into contiguous chunks evaluated in
    separate processes and merged back in grid order, so the output does not
    depend on scheduling.
    """
    pts = grid.points()
    workers = min(resolve_threads(threads), len(pts))
    if workers <= 1:
        return [evaluate_point(grid, g, a) for g, a in pts]
    size = math.ceil(len(pts) / workers)
    chunks = [pts[i : i + size] for i in range(0, len(pts), size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(_evaluate_chunk, [(grid, c) for c in chunks])
        return [r for part in parts for r in part]


@dataclass(frozen=True)
class BoundaryPoint:
    """Location where the number of real eigenvalues changes along a 1-D scan."""

    axis: str
    value: float
    lower: float
    upper: float
    n_real_lower: int
    n_real_upper: int
    fixed: float


def locate_boundary(
    grid: SweepGrid, axis: str, width: float = 1e-6, threads: Optional[int] = None
) -> List[BoundaryPoint]:
    """Bisect every change of the real-eigenvalue count along ``axis``.

    The other axis must hold a single value.  Each bracket is narrowed until
    it is at most ``width`` wide; its midpoint is reported.
    """
    if axis not in ("gamma", "alpha"):
        raise DomainError(f"axis must be 'gamma' or 'alpha', got {axis!r}")
    other = grid.alpha_range if axis == "gamma" else grid.gamma_range
    if other[2] != 1:
        raise DomainError("locate_boundary needs a 1-D scan: the fixed axis must have steps=1")
    fixed = float(other[0])
    scan = run_sweep(grid, threads)

    def count_at(x):
        g, a = (x, fixed) if axis == "gamma" else (fixed, x)
        r = evaluate_point(grid, g, a)
        return None if r.error else r.n_real

    out = []
    for left, right in zip(scan, scan[1:]):
        if not (left.ok and right.ok) or left.n_real == right.n_real:
            continue
        lo = left.gamma if axis == "gamma" else left.alpha
        hi = right.gamma if axis == "gamma" else right.alpha
        n_lo, n_hi = left.n_real, right.n_real
        while hi - lo > width:
            mid = 0.5 * (lo + hi)
            n_mid = count_at(mid)
            if n_mid is None:
                break
            if n_mid == n_lo:
                lo = mid
            else:
                hi, n_hi = mid, n_mid
        out.append(BoundaryPoint(axis, 0.5 * (lo + hi), lo, hi, n_lo, n_hi, fixed))
    return out
