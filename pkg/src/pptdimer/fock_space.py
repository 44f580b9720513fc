"""Homogeneous sectors of the two-variable Fock (Segal-Bargmann) space.

A sector of degree ``m`` is spanned by the monomials

    f_k = z1**(m - k) * z2**k,    k = 0 .. m

which are orthogonal under the Gaussian inner product with
``<f_j, f_k> = delta_jk * (m - k)! * k!``.  Everything here works on
coefficient vectors over that basis.

The conjugations act on a function by sign flips of the arguments followed
by complex conjugation.  On a monomial this is one line of algebra::

    conj(f_k(s1 * conj(z1), s2 * conj(z2))) = s1**(m - k) * s2**k * f_k(z1, z2)

so each operator is a real sign diagonal composed with coefficient-wise
conjugation.  No function evaluation is needed.
"""
from __future__ import annotations

import enum
import math
from functools import lru_cache

import numpy as np

from .errors import DomainError

M_MAX = 170  # largest n with n! finite in double precision


@lru_cache(maxsize=None)
def factorial_table(m_max: int = M_MAX) -> np.ndarray:
    if not 0 <= m_max <= M_MAX:
        raise DomainError(f"m_max must lie in [0, {M_MAX}], got {m_max}")
    table = np.array([float(math.factorial(n)) for n in range(m_max + 1)])
    table.flags.writeable = False
    return table


class HomogeneousPoly:
    """Degree-``m`` homogeneous polynomial stored by its ``m + 1`` coefficients.

    ``coeffs[k]`` multiplies ``z1**(m-k) * z2**k``.  Instances are immutable.
    """

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree: int, coeffs):
        degree = int(degree)
        if degree < 0:
            raise DomainError(f"degree must be nonnegative, got {degree}")
        arr = np.array(coeffs, dtype=np.complex128).reshape(-1)
        if arr.shape[0] != degree + 1:
            raise DomainError(
                f"degree {degree} needs {degree + 1} coefficients, got {arr.shape[0]}"
            )
        if not np.all(np.isfinite(arr)):
            raise DomainError("coefficients must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("HomogeneousPoly is immutable")

    @classmethod
    def monomial(cls, m: int, k: int) -> "HomogeneousPoly":
        if not 0 <= k <= m:
            raise DomainError(f"monomial index {k} outside 0..{m}")
        c = np.zeros(m + 1, dtype=np.complex128)
        c[k] = 1.0
        return cls(m, c)

    @classmethod
    def zeros(cls, m: int) -> "HomogeneousPoly":
        return cls(m, np.zeros(m + 1, dtype=np.complex128))

    def _check_same_sector(self, other: "HomogeneousPoly"):
        if self.degree != other.degree:
            raise DomainError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other):
        if not isinstance(other, HomogeneousPoly):
            return NotImplemented
        self._check_same_sector(other)
        return HomogeneousPoly(self.degree, self.coeffs + other.coeffs)

    def __sub__(self, other):
        if not isinstance(other, HomogeneousPoly):
            return NotImplemented
        self._check_same_sector(other)
        return HomogeneousPoly(self.degree, self.coeffs - other.coeffs)

    def __mul__(self, scalar):
        if isinstance(scalar, HomogeneousPoly):
            return NotImplemented
        return HomogeneousPoly(self.degree, complex(scalar) * self.coeffs)

    __rmul__ = __mul__

    def __neg__(self):
        return HomogeneousPoly(self.degree, -self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, HomogeneousPoly):
            return NotImplemented
        return self.degree == other.degree and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.degree, self.coeffs.tobytes()))

    def __repr__(self):
        return f"HomogeneousPoly(degree={self.degree}, coeffs={self.coeffs.tolist()!r})"

    def __call__(self, z1: complex, z2: complex) -> complex:
        """Evaluate the polynomial at a point; used to cross-check coefficient maps."""
        m = self.degree
        return complex(sum(c * z1 ** (m - k) * z2**k for k, c in enumerate(self.coeffs)))


def monomial_norm_sq(m: int, k: int) -> float:
    """Squared Fock norm of ``z1**(m-k) * z2**k``, i.e. ``(m-k)! * k!``."""
    if m < 0 or not 0 <= k <= m:
        raise DomainError(f"need 0 <= k <= m, got m={m}, k={k}")
    if m > M_MAX:
        raise DomainError(f"degree {m} exceeds the factorial table bound {M_MAX}")
    table = factorial_table()
    return float(table[m - k] * table[k])


def sector_weights(m: int) -> np.ndarray:
    """Diagonal of the Gram matrix of the degree-``m`` monomial basis."""
    if m < 0 or m > M_MAX:
        raise DomainError(f"degree must lie in [0, {M_MAX}], got {m}")
    table = factorial_table()
    return table[m::-1] * table[: m + 1]


def inner_product(p: HomogeneousPoly, q: HomogeneousPoly) -> complex:
    """Fock inner product, linear in ``p`` and antilinear in ``q``."""
    p._check_same_sector(q)
    w = sector_weights(p.degree)
    return complex(np.sum(p.coeffs * np.conj(q.coeffs) * w))


def fock_norm(p: HomogeneousPoly) -> float:
    # both factors pre-scaled: factorial weights alone reach 1e306
    w = sector_weights(p.degree)
    top_c = np.max(np.abs(p.coeffs))
    if top_c == 0:
        return 0.0
    top_w = np.max(w)
    return float(np.sqrt(np.sum(np.abs(p.coeffs / top_c) ** 2 * (w / top_w))) * top_c * np.sqrt(top_w))


class ConjugationKind(enum.Enum):
    """Which variables change sign before conjugating.

    ``PARTIAL1`` and ``PARTIAL2`` flip one variable, ``GLOBAL`` flips both.
    """

    GLOBAL = "global"
    PARTIAL1 = "partial1"
    PARTIAL2 = "partial2"


def conjugation_signs(kind: ConjugationKind, m: int) -> np.ndarray:
    """Real sign diagonal ``S`` such that ``C p = S * conj(p)`` on the sector."""
    k = np.arange(m + 1)
    if kind is ConjugationKind.PARTIAL1:
        exps = m - k
    elif kind is ConjugationKind.PARTIAL2:
        exps = k
    elif kind is ConjugationKind.GLOBAL:
        exps = np.full(m + 1, m)
    else:
        raise DomainError(f"unknown conjugation kind {kind!r}")
    return np.where(exps % 2 == 0, 1.0, -1.0)


def apply_conjugation(kind: ConjugationKind, p: HomogeneousPoly) -> HomogeneousPoly:
    return HomogeneousPoly(p.degree, conjugation_signs(kind, p.degree) * np.conj(p.coeffs))
