"""Eigenpairs of a tridiagonal matrix through its three-term recurrence.

For a tridiagonal ``M`` with diagonal ``b``, subdiagonal ``c`` and nonzero
superdiagonal ``d``, define

    P_{-1} = 0,  P_0 = 1,
    P_{n+1}(lam) = ((lam - b_n) P_n(lam) - c_{n-1} P_{n-1}(lam)) / d_n.

The eigenvalues of the l x l matrix are the zeros of P_l and the eigenvector
belonging to ``lam_j`` is ``(P_0(lam_j), ..., P_{l-1}(lam_j))``.  Only the
first ``l - 1`` superdiagonal entries exist, so the last step divides by 1;
that choice only rescales P_l and leaves its zeros alone.

Roots of P_l are found by Aberth-Ehrlich simultaneous iteration on the
monomial coefficients and then refined with Newton steps that evaluate P_l
through the recurrence itself, which is far better conditioned than the
expanded coefficients once the sector grows.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .errors import ConvergenceError, DomainError, HypothesisViolation, PairingError
from .fock_space import HomogeneousPoly, fock_norm
from .hamiltonian import ModelParams, TridiagMatrix, build_matrix

_EPS = np.finfo(float).eps


def recurrence_step(p_n, p_nm1, lam, b_n, d_n, c_nm1):
    """One step of the three-term recurrence, returning ``P_{n+1}(lam)``.

    At ``n = 0`` pass ``p_nm1 = 0``; ``c_nm1`` is then irrelevant.
    """
    if d_n == 0:
        raise HypothesisViolation("superdiagonal entry is zero; recurrence undefined")
    return ((lam - b_n) * p_n - c_nm1 * p_nm1) / d_n


def _check_superdiagonal(M: TridiagMatrix):
    if np.any(M.sup == 0):
        bad = int(np.flatnonzero(M.sup == 0)[0])
        raise HypothesisViolation(f"superdiagonal entry d_{bad} is zero")


@dataclass(frozen=True)
class CharPoly:
    """``P_l(lam) = exp(scale_log) * sum(coeffs[i] * lam**i)``.

    Coefficients are stored constant term first and renormalised to unit
    max-magnitude, with the discarded factor kept in ``scale_log``.
    """

    coeffs: np.ndarray
    scale_log: float = 0.0

    def __post_init__(self):
        arr = np.array(self.coeffs, dtype=np.complex128).reshape(-1)
        if arr.shape[0] < 2:
            raise DomainError("characteristic polynomial must have degree >= 1")
        if arr[-1] == 0:
            raise DomainError("leading coefficient must be nonzero")
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    def monic(self) -> np.ndarray:
        return np.asarray(self.coeffs / self.coeffs[-1])

    def __call__(self, z: complex) -> complex:
        return cmath.exp(self.scale_log) * _horner(self.coeffs, z)


def characteristic_poly(M: TridiagMatrix) -> CharPoly:
    """Run the recurrence with polynomial-valued ``P_n``.

    Raises :class:`HypothesisViolation` if any superdiagonal entry is zero.
    """
    _check_superdiagonal(M)
    l = M.size
    b, c, d = M.diag, M.sub, M.sup
    p_prev = np.zeros(l + 1, dtype=np.complex128)
    p_cur = np.zeros(l + 1, dtype=np.complex128)
    p_cur[0] = 1.0
    scale_log = 0.0
    for n in range(l):
        nxt = np.zeros(l + 1, dtype=np.complex128)
        nxt[1:] = p_cur[:-1]  # lam * P_n
        nxt -= b[n] * p_cur
        if n > 0:
            nxt -= c[n - 1] * p_prev
        if n < l - 1:
            nxt /= d[n]
        s = np.max(np.abs(nxt))
        if s == 0 or not np.isfinite(s):
            raise DomainError("recurrence produced a degenerate polynomial")
        nxt /= s
        p_cur = p_cur / s
        scale_log += math.log(s)
        p_prev, p_cur = p_cur, nxt
    return CharPoly(p_cur, scale_log)


def _horner(coeffs, z):
    acc = 0j
    for a in reversed(coeffs):
        acc = acc * z + a
    return acc


def _horner_with_derivative(coeffs, z):
    p = 0j
    dp = 0j
    for a in reversed(coeffs):
        dp = dp * z + p
        p = p * z + a
    return p, dp


def _backward_bound(abs_coeffs, z):
    """``sum |a_i| |z|**i``: the scale against which ``|p(z)|`` is judged."""
    r = abs(z)
    acc = 0.0
    for a in reversed(abs_coeffs):
        acc = acc * r + a
    return acc


@dataclass(frozen=True)
class RootOptions:
    """Controls for :func:`find_roots`.

    ``tol`` bounds the final backward error ``|p(z)| / sum |a_i| |z|**i``.
    """

    max_iter: int = 500
    tol: float = 1e-12
    polish_steps: int = 3
    start_angle: float = 0.4


def _initial_guesses(a: Sequence[complex], start_angle: float) -> List[complex]:
    n = len(a) - 1
    # Fujiwara-style radius: the largest |a_i|^(1/(n-i)) for monic a.
    radius = max(abs(a[i]) ** (1.0 / (n - i)) for i in range(n))
    center = -a[n - 1] / n
    radius = max(radius, abs(center), 1.0)
    return [
        center + radius * cmath.exp(1j * (2.0 * math.pi * k / n + start_angle))
        for k in range(n)
    ]


def _aberth(z: List[complex], newton, max_iter: int):
    """Gauss-Seidel Aberth-Ehrlich iteration on the starting points ``z``.

    ``newton(zk)`` returns ``(p / p', settled)``; ``settled`` marks a point
    whose value is already at rounding level.  Returns the iterates and a
    per-root convergence flag.
    """
    n = len(z)
    done = [False] * n
    for _ in range(max_iter):
        for k in range(n):
            if done[k]:
                continue
            zk = z[k]
            ratio, settled = newton(zk)
            if settled:
                done[k] = True
                continue
            s = 0j
            for j in range(n):
                if j != k:
                    diff = zk - z[j]
                    if diff != 0:
                        s += 1.0 / diff
            denom = 1.0 - ratio * s
            step = ratio / denom if denom != 0 else ratio
            z[k] = zk - step
            if abs(step) <= 2.0 * _EPS * abs(z[k]):
                done[k] = True
        if all(done):
            break
    return z, done


def find_roots(poly: CharPoly, opts: Optional[RootOptions] = None) -> List[complex]:
    """All ``degree`` roots (with multiplicity) of ``poly``.

    Aberth-Ehrlich iteration from a perturbed circle, followed by Newton
    polishing.  Raises :class:`ConvergenceError` when the backward error of
    some root is still above ``opts.tol`` afterwards.
    """
    opts = opts or RootOptions()
    a = [complex(x) for x in poly.monic()]
    n = len(a) - 1
    if n == 1:
        return [-a[0]]
    abs_a = [abs(x) for x in a]
    stop_tol = 4.0 * n * _EPS

    def newton(zk):
        p, dp = _horner_with_derivative(a, zk)
        if abs(p) <= stop_tol * _backward_bound(abs_a, zk):
            return 0j, True
        if dp == 0:
            return p, False  # stalled on a critical point; nudge off it
        return p / dp, False

    z, _ = _aberth(_initial_guesses(a, opts.start_angle), newton, opts.max_iter)
    z = [_newton_polish(a, zk, opts.polish_steps) for zk in z]

    residuals = [abs(_horner(a, zk)) / max(_backward_bound(abs_a, zk), 1e-300) for zk in z]
    if not max(residuals) <= opts.tol:
        raise ConvergenceError(
            f"root iteration did not converge after {opts.max_iter} iterations "
            f"(worst backward error {max(residuals):.3e})",
            best=z,
            residuals=residuals,
        )
    return z


def _newton_polish(a, z, steps):
    best = z
    best_res = abs(_horner(a, z))
    for _ in range(steps):
        p, dp = _horner_with_derivative(a, best)
        if dp == 0 or p == 0:
            break
        cand = best - p / dp
        res = abs(_horner(a, cand))
        if res >= best_res:
            break
        best, best_res = cand, res
    return best


def _recurrence_eval(M: TridiagMatrix, lam: complex):
    """``(P_l, P_l', bound)`` at ``lam``, all three sharing one unknown scale.

    ``bound`` runs the same recurrence on absolute values and is the
    rounding-error yardstick for ``|P_l|``.
    """
    b, c, d = M.diag, M.sub, M.sup
    l = M.size
    p_prev, p_cur = 0j, 1 + 0j
    dp_prev, dp_cur = 0j, 0j
    a_prev, a_cur = 0.0, 1.0
    for n in range(l):
        shift = lam - b[n]
        p_next = shift * p_cur
        dp_next = p_cur + shift * dp_cur
        a_next = abs(shift) * a_cur
        if n > 0:
            p_next -= c[n - 1] * p_prev
            dp_next -= c[n - 1] * dp_prev
            a_next += abs(c[n - 1]) * a_prev
        if n < l - 1:
            p_next /= d[n]
            dp_next /= d[n]
            a_next /= abs(d[n])
        if a_next > 1e150 or a_next < 1e-150:
            s = a_next if a_next > 0 else 1.0
            p_next, dp_next, p_cur, dp_cur = p_next / s, dp_next / s, p_cur / s, dp_cur / s
            a_next, a_cur = a_next / s, a_cur / s
        p_prev, p_cur = p_cur, p_next
        dp_prev, dp_cur = dp_cur, dp_next
        a_prev, a_cur = a_cur, a_next
    return complex(p_cur), complex(dp_cur), a_cur


def aberth_on_recurrence(M: TridiagMatrix, start: Sequence[complex], max_iter: int = 500):
    """Run Aberth iteration with ``P_l`` and ``P_l'`` taken from the recurrence.

    Evaluating through the recurrence avoids the expanded coefficients,
    whose roots become badly conditioned as the sector grows.
    """
    stop_tol = 8.0 * M.size * _EPS

    def newton(zk):
        p, dp, bound = _recurrence_eval(M, zk)
        if dp == 0:
            return p, False
        ratio = p / dp
        # the bound alone can exceed |p| far from any root when m is large
        if abs(p) <= stop_tol * bound and abs(ratio) <= 1e-6 * (1.0 + abs(zk)):
            return 0j, True
        return ratio, False

    z, done = _aberth([complex(x) for x in start], newton, max_iter)
    if not all(np.isfinite(z)):
        raise ConvergenceError("recurrence Aberth iteration diverged", best=z)
    return z, done


def refine_eigenvalue(M: TridiagMatrix, lam: complex, steps: int = 3, real_axis=False):
    """Newton steps on ``P_l`` evaluated through the recurrence.

    A step is kept only if it lowers ``|P_l| / bound``.  With ``real_axis``
    the step is projected onto the real line.
    """
    p, dp, bound = _recurrence_eval(M, lam)
    best, best_val = lam, abs(p) / bound
    for _ in range(steps):
        if dp == 0 or p == 0:
            break
        step = p / dp
        cand = best - (step.real if real_axis else step)
        p_c, dp_c, bound_c = _recurrence_eval(M, cand)
        val = abs(p_c) / bound_c
        if not val < best_val:
            break
        best, best_val, p, dp = cand, val, p_c, dp_c
    return best


def gershgorin_start(M: TridiagMatrix, start_angle: float = 0.4) -> List[complex]:
    """Points on a perturbed circle enclosing every Gershgorin disc of ``M``."""
    l = M.size
    radii = np.abs(np.concatenate([[0], M.sub])) + np.abs(np.concatenate([M.sup, [0]]))
    center = complex(np.mean(M.diag))
    radius = max(float(np.max(np.abs(M.diag - center) + radii)), 1.0)
    return [center + radius * cmath.exp(1j * (2.0 * math.pi * k / l + start_angle)) for k in range(l)]


def recurrence_vector(M: TridiagMatrix, lam: complex) -> np.ndarray:
    """``(P_0(lam), ..., P_{l-1}(lam))`` built with :func:`recurrence_step`."""
    _check_superdiagonal(M)
    l = M.size
    v = np.empty(l, dtype=np.complex128)
    v[0] = 1.0
    p_prev, p_cur = 0j, 1 + 0j
    for n in range(l - 1):
        c_nm1 = M.sub[n - 1] if n > 0 else 0j
        p_next = recurrence_step(p_cur, p_prev, lam, M.diag[n], M.sup[n], c_nm1)
        v[n + 1] = p_next
        p_prev, p_cur = p_cur, p_next
    return v


_BIG = 1e150


def _scaled_forward(M: TridiagMatrix, lam: complex) -> np.ndarray:
    """Forward recurrence values, with the computed prefix rescaled whenever
    it grows past ``_BIG``.  Proportional to ``(P_0, ..., P_{l-1})``."""
    l = M.size
    v = np.empty(l, dtype=np.complex128)
    v[0] = 1.0
    for n in range(l - 1):
        prev = v[n - 1] if n > 0 else 0j
        c_nm1 = M.sub[n - 1] if n > 0 else 0j
        v[n + 1] = ((lam - M.diag[n]) * v[n] - c_nm1 * prev) / M.sup[n]
        top = abs(v[n + 1])
        if top > _BIG:
            v[: n + 2] /= top
    return v


def _scaled_backward(M: TridiagMatrix, lam: complex) -> np.ndarray:
    """Same eigenvector grown from the last row upward, starting at 1."""
    l = M.size
    q = np.empty(l, dtype=np.complex128)
    q[-1] = 1.0
    for n in range(l - 1, 0, -1):
        nxt = M.sup[n] * q[n + 1] if n < l - 1 else 0j
        q[n - 1] = ((lam - M.diag[n]) * q[n] - nxt) / M.sub[n - 1]
        top = abs(q[n - 1])
        if top > _BIG:
            q[n - 1 :] /= top
    return q


def _inverse_iteration(M: TridiagMatrix, lam: complex, steps: int = 2):
    """Two steps of inverse iteration on the dense matrix, or None."""
    A = M.to_dense() - lam * np.eye(M.size)
    shift = 4 * _EPS * max(M.norm(), 1.0)
    x = np.ones(M.size, dtype=np.complex128)
    for _ in range(steps):
        try:
            x = np.linalg.solve(A, x)
        except np.linalg.LinAlgError:
            x = np.linalg.solve(A - shift * np.eye(M.size), x)
        top = np.max(np.abs(x))
        if not (np.isfinite(top) and top > 0):
            return None
        x = x / top
    return x


def eigenvector(M: TridiagMatrix, lam: complex) -> np.ndarray:
    """Recurrence eigenvector at ``lam``, evaluated stably.

    The forward recurrence loses accuracy when it runs through rows with
    small superdiagonal entries.  Rows ``0..r`` are therefore taken from
    the forward values ``P_n(lam)`` and rows below ``r`` from the bottom-up
    recurrence, matched at row ``r``; ``r`` is the twist with the smallest
    residual.  If no twist is accurate, dense inverse iteration is tried.
    The result is scaled so component 0 equals ``P_0 = 1`` unless that
    scaling would overflow.
    """
    _check_superdiagonal(M)
    l = M.size
    with np.errstate(all="ignore"):
        fwd = _scaled_forward(M, lam)
        candidates = [fwd / np.max(np.abs(fwd))]
        if l > 1 and not np.any(M.sub == 0):
            bwd = _scaled_backward(M, lam)
            for r in range(l - 1):
                if fwd[r] == 0 or bwd[r] == 0:
                    continue
                cand = np.concatenate([fwd[: r + 1] / fwd[r], bwd[r + 1 :] / bwd[r]])
                candidates.append(cand / np.max(np.abs(cand)))
        best, best_res = None, math.inf
        for cand in candidates:
            if not np.all(np.isfinite(cand)):
                continue
            res = _relative_residual(M, lam, cand)
            if res < best_res:
                best, best_res = cand, res
        if best_res > 1e4 * _EPS * max(M.norm(), 1.0):
            # dynamic range beyond double precision on both sides of the peak
            alt = _inverse_iteration(M, lam)
            if alt is not None:
                alt_res = _relative_residual(M, lam, alt)
                if alt_res < best_res:
                    best, best_res = alt, alt_res
        if best is None:
            raise ConvergenceError(f"eigenvector recurrence overflowed at lambda={lam!r}", best=[lam])
        if best[0] != 0:
            pinned = best / best[0]
            if np.max(np.abs(pinned)) <= _BIG:
                return pinned
    return best


def rayleigh_polish(
    M: TridiagMatrix, lam: complex, steps: int = 2, real_axis: bool = False, max_step: float = math.inf
) -> complex:
    """Two-sided Rayleigh quotient correction ``lam + u^T (M v - lam v) / u^T v``.

    ``v`` and ``u`` are the recurrence eigenvectors of ``M`` and ``M^T`` at
    ``lam``.  Evaluating ``P_l`` can lose far more digits than the
    eigenvalue's conditioning warrants; this step only needs the vectors.
    A step is kept only if it lowers the residual and moves ``lam`` by at
    most ``max_step``; near a cluster every nearby point has a small
    residual, so the step bound is what keeps roots apart.
    """
    Mt = TridiagMatrix(M.diag, M.sup, M.sub)
    v = eigenvector(M, lam)
    res = _relative_residual(M, lam, v)
    for _ in range(steps):
        if res == 0:
            break
        u = eigenvector(Mt, lam)
        v = v / np.max(np.abs(v))
        u = u / np.max(np.abs(u))
        denom = np.dot(u, v)
        if denom == 0:
            break
        with np.errstate(all="ignore"):
            new = lam + complex(np.dot(u, M.matvec(v) - lam * v) / denom)
        if real_axis:
            new = complex(new.real, 0.0)
        if not cmath.isfinite(new) or abs(new - lam) > max_step:
            break
        v_new = eigenvector(M, new)
        res_new = _relative_residual(M, new, v_new)
        if not res_new < res:
            break
        lam, v, res = new, v_new, res_new
    return lam


def _relative_residual(M, lam, v):
    v = v / np.max(np.abs(v))
    return float(np.linalg.norm(M.matvec(v) - lam * v) / np.linalg.norm(v))


@dataclass(frozen=True)
class SolveOptions:
    """Tolerances for :func:`solve_sector`.

    ``real_tol``: an eigenvalue counts as real when
    ``|Im lam| <= real_tol * (1 + |lam|)``.
    ``residual_cap``: every pair must satisfy
    ``|Mv - lam v| / |v| <= residual_cap * max(|M|, 1)``.
    ``normalization``: ``"first"`` pins component 0 to 1, ``"fock"`` rescales
    to unit Fock norm (component 0 stays real positive).
    """

    real_tol: float = 1e-9
    residual_cap: float = 1e-8
    cluster_tol: float = 1e-6
    pair_tol: float = 1e-9
    normalization: str = "first"
    refine_steps: int = 3
    roots: RootOptions = field(default_factory=RootOptions)


@dataclass(frozen=True)
class EigenPair:
    eigenvalue: complex
    vector: HomogeneousPoly
    residual: float
    is_real: bool
    multiplicity: int = 1
    # first-order eigenvalue error: condition number * l * eps * |M|
    error_bound: float = 0.0

    @property
    def imag_margin(self) -> float:
        """``|Im lam| / (1 + |lam|)``, the quantity compared against ``real_tol``."""
        return abs(self.eigenvalue.imag) / (1.0 + abs(self.eigenvalue))

    def reality_ambiguous(self, real_tol: float) -> bool:
        """True when ``error_bound`` is too large to decide whether ``lam`` is real."""
        if self.is_real:
            return self.error_bound > real_tol * (1.0 + abs(self.eigenvalue))
        return abs(self.eigenvalue.imag) <= self.error_bound


def is_real_eigenvalue(lam: complex, real_tol: float) -> bool:
    return abs(lam.imag) <= real_tol * (1.0 + abs(lam))


def _multiplicities(values: Sequence[complex], tol: float) -> List[int]:
    scale = max([1.0] + [abs(v) for v in values])
    return [
        sum(1 for w in values if abs(v - w) < tol * scale) for v in values
    ]


def eigenvalue_condition(M: TridiagMatrix, lam: complex, v: Optional[np.ndarray] = None) -> float:
    """Wilkinson condition number ``|u| |v| / |u^T v|`` of an eigenvalue.

    ``v`` is the right eigenvector and ``u`` the eigenvector of ``M^T``.
    Large values flag eigenvalues close to a defective (Jordan) point.
    """
    if v is None:
        v = eigenvector(M, lam)
    u = eigenvector(TridiagMatrix(M.diag, M.sup, M.sub), lam)
    v = v / np.linalg.norm(v)
    u = u / np.linalg.norm(u)
    overlap = abs(np.dot(u, v))
    return math.inf if overlap == 0 else 1.0 / overlap


def _enforce_pairing(M, roots, flags, opts: SolveOptions):
    """Match non-real roots into conjugate pairs and make each pair exact.

    A pair is accepted within ``pair_tol`` (relative to the spectral scale),
    within the first-order error ``kappa * l * eps * |M|`` when the roots
    are ill-conditioned, or within ``cluster_tol`` for clustered roots.  An unmatched root within that error of the real
    axis is a perturbed real root and is snapped.  Anything else means the
    characteristic polynomial is not real and raises PairingError.
    """
    roots, flags = list(roots), list(flags)
    scale = max([1.0] + [abs(z) for z in roots])
    base = opts.pair_tol * scale
    noise = M.size * _EPS * max(M.norm(), 1.0)
    kappa = {}

    clustered = [
        any(j != i and abs(roots[i] - roots[j]) < opts.cluster_tol * scale for j in range(len(roots)))
        for i in range(len(roots))
    ]

    def tol(i):
        if clustered[i]:
            return max(base, opts.cluster_tol * scale)
        if i not in kappa:
            kappa[i] = eigenvalue_condition(M, roots[i])
        return max(base, noise * kappa[i])

    upper = [i for i in range(len(roots)) if not flags[i] and roots[i].imag > 0]
    lower = [i for i in range(len(roots)) if not flags[i] and roots[i].imag <= 0]
    leftover = []
    for i in sorted(upper, key=lambda i: -roots[i].imag):
        target = roots[i].conjugate()
        j = min(lower, key=lambda j: abs(roots[j] - target), default=None)
        if j is not None:
            dist = abs(roots[j] - target)
            if dist <= base or dist <= max(tol(i), tol(j)):
                mid = 0.5 * (roots[i] + roots[j].conjugate())
                roots[i], roots[j] = mid, mid.conjugate()
                lower.remove(j)
                continue
        leftover.append(i)
    for i in leftover + lower:
        if abs(roots[i].imag) > tol(i):
            raise PairingError(
                f"eigenvalue {roots[i]!r} has no complex-conjugate partner within "
                f"{tol(i):.1e}; either the characteristic polynomial is not real or "
                "the spectrum is too ill-conditioned to resolve in double precision"
            )
        roots[i], flags[i] = complex(roots[i].real, 0.0), True
    return roots, flags


def _normalize(vec: np.ndarray, m: int, how: str) -> HomogeneousPoly:
    poly = HomogeneousPoly(m, vec)
    if how == "first":
        return poly
    if how == "fock":
        return poly * (1.0 / fock_norm(poly))
    raise DomainError(f"unknown normalization {how!r}")


def _eigenpair(M, m, lam, vec, is_real, mult, opts):
    v = np.asarray(vec, dtype=np.complex128)
    res = _relative_residual(M, lam, v)
    cap = opts.residual_cap * max(M.norm(), 1.0)
    if not res <= cap:
        raise ConvergenceError(
            f"eigenpair residual {res:.3e} exceeds cap {cap:.3e} at lambda={lam!r}",
            best=[lam],
            residuals=[res],
        )
    with np.errstate(all="ignore"):
        bound = M.size * _EPS * max(M.norm(), 1.0) * eigenvalue_condition(M, lam, v)
    return EigenPair(lam, _normalize(v, m, opts.normalization), res, is_real, mult, float(bound))


def solve_tridiagonal(M: TridiagMatrix, opts: Optional[SolveOptions] = None) -> List[EigenPair]:
    """Eigenpairs of a tridiagonal matrix with nonzero superdiagonal.

    Eigenvectors are returned as coefficient vectors of a degree ``l - 1``
    sector.  Sorted by (real part, imaginary part).
    """
    opts = opts or SolveOptions()
    l = M.size
    m = l - 1
    if l == 1:
        lam = complex(M.diag[0])
        real = is_real_eigenvalue(lam, opts.real_tol)
        if real:
            lam = complex(lam.real, 0.0)
        return [_eigenpair(M, m, lam, np.ones(1), real, 1, opts)]

    # Real diagonal and real products c_k d_k make det(lam - M) a real
    # polynomial, so non-real roots must come in conjugate pairs.
    real_structure = bool(
        np.all(M.diag.imag == 0)
        and np.all(np.abs((M.sub * M.sup).imag) <= 4 * _EPS * np.abs(M.sub * M.sup))
    )
    try:
        cp = characteristic_poly(M)
        if real_structure:
            monic = cp.monic()
            # the constant phase of 1/prod(d) is gone after monic(); what is
            # left of the imaginary part is rounding
            if np.max(np.abs(monic.imag)) > 1e3 * _EPS * np.max(np.abs(monic)) * l:
                raise PairingError("characteristic polynomial of a real-structured matrix is not real")
            cp = CharPoly(monic.real.astype(np.complex128))
        start = find_roots(cp, opts.roots)
        if not all(np.isfinite(start)):
            raise ConvergenceError("coefficient roots are not finite")
    except (ConvergenceError, DomainError, OverflowError, ZeroDivisionError):
        # expanded coefficients unusable at this size; start from a circle
        start = gershgorin_start(M, opts.roots.start_angle)
    roots, done = aberth_on_recurrence(M, start, opts.roots.max_iter)
    roots = [refine_eigenvalue(M, z, opts.refine_steps) for z in roots]
    # the step bound keeps a polished root from jumping onto a neighbour
    gaps = [min(abs(z - w) for j, w in enumerate(roots) if j != i) for i, z in enumerate(roots)]
    roots = [rayleigh_polish(M, z, 2, False, 0.25 * g) for z, g in zip(roots, gaps)]
    flags = [is_real_eigenvalue(z, opts.real_tol) for z in roots]
    roots = [
        rayleigh_polish(M, complex(z.real, 0.0), 2, True, 0.25 * g) if f else z
        for z, f, g in zip(roots, flags, gaps)
    ]
    if real_structure:
        roots, flags = _enforce_pairing(M, roots, flags, opts)
    order = sorted(range(l), key=lambda i: (roots[i].real, roots[i].imag))
    roots = [roots[i] for i in order]
    flags = [flags[i] for i in order]
    mult = _multiplicities(roots, opts.cluster_tol)
    return [
        _eigenpair(M, m, z, eigenvector(M, z), f, k, opts)
        for z, f, k in zip(roots, flags, mult)
    ]


def solve_sector(m: int, params: ModelParams, opts: Optional[SolveOptions] = None) -> List[EigenPair]:
    """Eigenpairs of H on the degree-``m`` sector.

    At ``gamma == 0`` the matrix is diagonal and the recurrence is undefined;
    the diagonal is returned directly with unit basis vectors.
    """
    if m < 0:
        raise DomainError(f"degree must be nonnegative, got {m}")
    opts = opts or SolveOptions()
    M = build_matrix(m, params)
    if params.gamma != 0.0 or m == 0:
        return solve_tridiagonal(M, opts)

    values = [complex(x.real, 0.0) for x in M.diag]
    order = sorted(range(m + 1), key=lambda i: values[i].real)
    mult = _multiplicities([values[i] for i in order], opts.cluster_tol)
    pairs = []
    for i, k in zip(order, mult):
        e = np.zeros(m + 1, dtype=np.complex128)
        e[i] = 1.0
        pairs.append(EigenPair(values[i], _normalize(e, m, opts.normalization), 0.0, True, k))
    return pairs


def determinant(M: TridiagMatrix) -> complex:
    """``det(M)`` by the continuant recurrence ``f_n = b_n f_{n-1} - c_{n-1} d_{n-1} f_{n-2}``."""
    f_prev, f_cur = 1 + 0j, complex(M.diag[0])
    for n in range(1, M.size):
        f_prev, f_cur = f_cur, M.diag[n] * f_cur - M.sub[n - 1] * M.sup[n - 1] * f_prev
    return f_cur
