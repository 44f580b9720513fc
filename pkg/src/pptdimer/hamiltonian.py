"""The two-mode non-Hermitian Bose-Hubbard Hamiltonian on a homogeneous sector.

In Bargmann-Fock form (creation -> multiplication by z_j, annihilation ->
d/dz_j) the operator reads::

    H = eps0 * D + i*gamma * (z1 d/dz2 + z2 d/dz1) + alpha * D**2,
    D = z1 d/dz1 - z2 d/dz2

D is diagonal on the monomials, so with mu = m - 2k each f_k picks up
``beta(mu) = eps0*mu + alpha*mu**2`` and the tunneling term couples f_k to
its two neighbours.  The result is tridiagonal in the basis f_0 .. f_m.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .fock_space import HomogeneousPoly


@dataclass(frozen=True)
class ModelParams:
    """Real parameters of the Hamiltonian.  Tunneling enters as ``1j * gamma``."""

    gamma: float
    alpha: float
    epsilon0: float = 1.0

    def __post_init__(self):
        for name in ("gamma", "alpha", "epsilon0"):
            value = getattr(self, name)
            if isinstance(value, complex) or not math.isfinite(value):
                raise DomainError(f"{name} must be a finite real number, got {value!r}")
            object.__setattr__(self, name, float(value))


@dataclass(frozen=True)
class TridiagMatrix:
    """Complex tridiagonal matrix held as three bands.

    ``sub[i]`` sits at (i+1, i) and ``sup[i]`` at (i, i+1).
    """

    diag: np.ndarray
    sub: np.ndarray
    sup: np.ndarray

    def __post_init__(self):
        bands = []
        for name in ("diag", "sub", "sup"):
            arr = np.array(getattr(self, name), dtype=np.complex128).reshape(-1)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
            bands.append(arr)
        n = bands[0].shape[0]
        if n < 1:
            raise DomainError("tridiagonal matrix must have size >= 1")
        if bands[1].shape[0] != n - 1 or bands[2].shape[0] != n - 1:
            raise DomainError(
                f"off-diagonal bands must have length {n - 1}, "
                f"got sub={bands[1].shape[0]}, sup={bands[2].shape[0]}"
            )

    @property
    def size(self) -> int:
        return self.diag.shape[0]

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.sub, -1) + np.diag(self.sup, 1)

    def matvec(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.complex128)
        out = self.diag * v
        out[1:] += self.sub * v[:-1]
        out[:-1] += self.sup * v[1:]
        return out

    def norm(self) -> float:
        """Frobenius norm."""
        return float(
            np.sqrt(
                np.sum(np.abs(self.diag) ** 2)
                + np.sum(np.abs(self.sub) ** 2)
                + np.sum(np.abs(self.sup) ** 2)
            )
        )


def beta(mu: int, params: ModelParams) -> float:
    return params.epsilon0 * mu + params.alpha * mu * mu


def build_matrix(m: int, params: ModelParams) -> TridiagMatrix:
    """Matrix of H on the degree-``m`` sector; column k is the image of f_k."""
    if m < 0:
        raise DomainError(f"degree must be nonnegative, got {m}")
    k = np.arange(m + 1)
    diag = np.array([beta(m - 2 * kk, params) for kk in k], dtype=np.complex128)
    ig = 1j * params.gamma
    sub = ig * (m - k[:-1])
    sup = ig * (k[:-1] + 1)
    return TridiagMatrix(diag, sub, sup)


def apply_hamiltonian(p: HomogeneousPoly, params: ModelParams) -> HomogeneousPoly:
    """Apply H term by term as a differential operator on the coefficients."""
    m = p.degree
    out = np.zeros(m + 1, dtype=np.complex128)
    for k, c in enumerate(p.coeffs):
        if c == 0:
            continue
        e1, e2 = m - k, k  # exponents of z1, z2
        mu = e1 - e2  # eigenvalue of z1 d/dz1 - z2 d/dz2
        out[k] += (params.epsilon0 * mu + params.alpha * mu * mu) * c
        if e2 > 0:  # z1 d/dz2 : (e1, e2) -> (e1 + 1, e2 - 1)
            out[k - 1] += 1j * params.gamma * e2 * c
        if e1 > 0:  # z2 d/dz1 : (e1, e2) -> (e1 - 1, e2 + 1)
            out[k + 1] += 1j * params.gamma * e1 * c
    return HomogeneousPoly(m, out)


def number_operator(p: HomogeneousPoly) -> HomogeneousPoly:
    """``z1 d/dz1 + z2 d/dz2``; acts as ``m`` on the whole sector."""
    m = p.degree
    scale = np.array([(m - k) + k for k in range(m + 1)], dtype=np.complex128)
    return HomogeneousPoly(m, scale * p.coeffs)


def matrix_apply_consistency(m, params, n_random=4, rtol=1e-13, seed=0) -> bool:
    """True when ``build_matrix`` and ``apply_hamiltonian`` agree on the sector.

    Checks every basis vector plus ``n_random`` random complex polynomials.
    """
    M = build_matrix(m, params)
    rng = np.random.default_rng(seed)
    probes = [HomogeneousPoly.monomial(m, k) for k in range(m + 1)]
    for _ in range(n_random):
        c = rng.standard_normal(m + 1) + 1j * rng.standard_normal(m + 1)
        probes.append(HomogeneousPoly(m, c))
    scale = max(M.norm(), 1.0)
    for p in probes:
        lhs = M.matvec(p.coeffs)
        rhs = apply_hamiltonian(p, params).coeffs
        if np.linalg.norm(lhs - rhs) > rtol * scale * max(np.linalg.norm(p.coeffs), 1e-300):
            return False
    return True
