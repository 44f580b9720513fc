"""Partial-PT classification of eigenstates and sector-level operator identities.

An antilinear conjugation ``C`` on a sector is the pair (S, conj) with S a
real sign diagonal, so for a linear operator A the product ``C A C`` is the
matrix ``S conj(A) S``.  The Fock adjoint in the (non-orthonormal) monomial
basis is ``W^-1 A^H W`` with W the diagonal Gram matrix.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from .errors import DomainError
from .fock_space import (
    ConjugationKind,
    HomogeneousPoly,
    apply_conjugation,
    conjugation_signs,
    fock_norm,
    sector_weights,
)
from .hamiltonian import ModelParams, TridiagMatrix, build_matrix
from .recurrence import EigenPair


class SymmetryClass(enum.Enum):
    SYMMETRIC = "symmetric"
    ANTISYMMETRIC = "antisymmetric"
    BROKEN = "broken"


@dataclass(frozen=True)
class SymmetryReport:
    """Classification of one eigenstate under the three conjugations.

    ``defects`` maps each kind to ``min_s |C v - s v| / |v|`` over s = +-1,
    measured in the Fock norm after the phase gauge ``phase_used`` has been
    applied to v.
    """

    class1: SymmetryClass
    class2: SymmetryClass
    global_class: SymmetryClass
    defects: Dict[ConjugationKind, float]
    phase_used: complex

    @property
    def defect(self) -> float:
        """Worse of the two partial defects."""
        return max(self.defects[ConjugationKind.PARTIAL1], self.defects[ConjugationKind.PARTIAL2])

    @property
    def partial_unbroken(self) -> bool:
        return self.class1 is not SymmetryClass.BROKEN and self.class2 is not SymmetryClass.BROKEN


def _gauge(v: HomogeneousPoly):
    """Fix the global phase of ``v`` before classifying it.

    The reference component is the first non-negligible one, normally
    component 0, which is rotated to be real positive.  If component ``k``
    is used instead it is rotated onto ``i**k`` times a positive number, the
    phase it carries in a vector whose component 0 is real positive.
    """
    c = v.coeffs
    mags = np.abs(c)
    top = mags.max()
    if top == 0:
        raise DomainError("cannot classify the zero vector")
    idx = int(np.flatnonzero(mags > 1e-12 * top)[0])
    phase = complex(1j**idx * np.conj(c[idx]) / mags[idx])
    # the positive rescale keeps Fock norms finite and does not affect classes
    return v * (phase / top), phase


def _classify_one(kind, v, norm, sym_tol):
    q = apply_conjugation(kind, v)
    plus = fock_norm(q - v) / norm
    minus = fock_norm(q + v) / norm
    if plus <= sym_tol and plus <= minus:
        return SymmetryClass.SYMMETRIC, plus
    if minus <= sym_tol:
        return SymmetryClass.ANTISYMMETRIC, minus
    return SymmetryClass.BROKEN, min(plus, minus)


def classify_vector(v: HomogeneousPoly, sym_tol: float = 1e-8) -> SymmetryReport:
    v, phase = _gauge(v)
    norm = fock_norm(v)
    classes = {}
    defects = {}
    for kind in ConjugationKind:
        classes[kind], defects[kind] = _classify_one(kind, v, norm, sym_tol)
    return SymmetryReport(
        classes[ConjugationKind.PARTIAL1],
        classes[ConjugationKind.PARTIAL2],
        classes[ConjugationKind.GLOBAL],
        defects,
        phase,
    )


def classify(pair: EigenPair, sym_tol: float = 1e-8) -> SymmetryReport:
    return classify_vector(pair.vector, sym_tol)


def conjugate_partners(pairs: Sequence[EigenPair], tol: float = 1e-6) -> List[Optional[int]]:
    """Index of the eigenvalue ``conj(lam)`` for each non-real ``lam``, else None.

    A partial conjugation maps the eigenvector of ``lam`` onto that of
    ``conj(lam)``; this only records the pairing.
    """
    values = [p.eigenvalue for p in pairs]
    scale = max([1.0] + [abs(x) for x in values])
    out: List[Optional[int]] = []
    for i, p in enumerate(pairs):
        if p.is_real:
            out.append(None)
            continue
        target = values[i].conjugate()
        dists = [abs(values[j] - target) if j != i else np.inf for j in range(len(values))]
        j = int(np.argmin(dists))
        out.append(j if dists[j] <= tol * scale else None)
    return out


def adjoint_matrix(M, m: int) -> np.ndarray:
    """Fock adjoint ``W^-1 conj(A).T W`` of an operator on the degree-``m`` sector."""
    A = M.to_dense() if isinstance(M, TridiagMatrix) else np.asarray(M, dtype=np.complex128)
    if A.shape != (m + 1, m + 1):
        raise DomainError(f"matrix shape {A.shape} does not match degree {m}")
    w = sector_weights(m)
    return (A.conj().T * w[np.newaxis, :]) / w[:, np.newaxis]


def conjugate_operator(kind: ConjugationKind, A: np.ndarray, m: int) -> np.ndarray:
    """Matrix of ``C A C`` for the antilinear conjugation ``kind``."""
    s = conjugation_signs(kind, m)
    return s[:, np.newaxis] * np.conj(A) * s[np.newaxis, :]


PROPOSITION_IDS = (
    "P1_adjoint_differs",
    "P2_C2_selfadjoint",
    "P3_partial_symmetric",
    "P3_global_asymmetric",
)


@dataclass(frozen=True)
class PropositionReport:
    """Outcome of one operator identity on a sector.

    ``verdict`` is None when the check is vacuous (no tunneling term, so
    the expected inequality cannot hold).
    """

    proposition: str
    max_deviation: float
    threshold: float
    verdict: Optional[bool]

    @property
    def vacuous(self) -> bool:
        return self.verdict is None


def verify_propositions(
    m: int,
    params: ModelParams,
    eq_rtol: float = 1e-12,
    neq_floor: float = 1e-6,
) -> List[PropositionReport]:
    """Check the adjoint and conjugation identities of H on the degree-``m`` sector.

    Equalities pass when the Frobenius deviation is at most ``eq_rtol * |H|``;
    inequalities pass when it exceeds ``neq_floor * |H|``.
    """
    if m < 0:
        raise DomainError(f"degree must be nonnegative, got {m}")
    H = build_matrix(m, params).to_dense()
    h_norm = float(np.linalg.norm(H))
    eq_thr = eq_rtol * max(h_norm, 1.0)
    neq_thr = neq_floor * max(h_norm, 1.0)
    H_adj = adjoint_matrix(H, m)
    # No tunneling: H is self-adjoint and real, so both inequalities are vacuous.
    has_hopping = params.gamma != 0.0 and m > 0

    def dev(A):
        return float(np.linalg.norm(A - H))

    p1 = dev(H_adj)
    p2 = dev(conjugate_operator(ConjugationKind.GLOBAL, H_adj, m))
    p3 = max(
        dev(conjugate_operator(ConjugationKind.PARTIAL1, H, m)),
        dev(conjugate_operator(ConjugationKind.PARTIAL2, H, m)),
    )
    p3g = dev(conjugate_operator(ConjugationKind.GLOBAL, H, m))
    return [
        PropositionReport(PROPOSITION_IDS[0], p1, neq_thr, p1 > neq_thr if has_hopping else None),
        PropositionReport(PROPOSITION_IDS[1], p2, eq_thr, p2 <= eq_thr),
        PropositionReport(PROPOSITION_IDS[2], p3, eq_thr, p3 <= eq_thr),
        PropositionReport(PROPOSITION_IDS[3], p3g, neq_thr, p3g > neq_thr if has_hopping else None),
    ]
