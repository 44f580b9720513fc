import numpy as np
import pytest

from oracles import dense_hamiltonian
from pptdimer.errors import DomainError
from pptdimer.fock_space import HomogeneousPoly
from pptdimer.hamiltonian import (
    ModelParams,
    TridiagMatrix,
    apply_hamiltonian,
    beta,
    build_matrix,
    matrix_apply_consistency,
    number_operator,
)

REF_POINT = ModelParams(gamma=0.5, alpha=0.5)
f = HomogeneousPoly.monomial


def test_beta_examples():
    assert beta(2, ModelParams(0.5, 0.5)) == 4
    assert beta(0, ModelParams(0.3, 7.0, 2.5)) == 0
    assert beta(-2, ModelParams(0.5, 4.0)) == 14
    # cross-check against the operator: f_2 at m=2 has mu = -2
    out = apply_hamiltonian(f(2, 2), ModelParams(0.0, 4.0))
    assert out.coeffs[2] == 14


def test_params_validation():
    assert ModelParams(1, 2).epsilon0 == 1.0
    with pytest.raises(DomainError):
        ModelParams(float("nan"), 0)
    with pytest.raises(DomainError):
        ModelParams(1j, 0)


def test_build_matrix_m2_example():
    M = build_matrix(2, REF_POINT)
    np.testing.assert_array_equal(M.diag, [4, 0, 0])
    np.testing.assert_array_equal(M.sub, [1j, 0.5j])
    np.testing.assert_array_equal(M.sup, [0.5j, 1j])


def test_build_matrix_m0():
    M = build_matrix(0, ModelParams(3.0, 2.0))
    assert M.size == 1
    assert M.diag[0] == 0


def test_build_matrix_m3():
    M = build_matrix(3, ModelParams(1.0, 0.0))
    np.testing.assert_array_equal(M.diag, [3, 1, -1, -3])
    np.testing.assert_array_equal(M.sub, [3j, 2j, 1j])
    np.testing.assert_array_equal(M.sup, [1j, 2j, 3j])
    for k in range(4):
        np.testing.assert_array_equal(
            M.to_dense()[:, k], apply_hamiltonian(f(3, k), ModelParams(1.0, 0.0)).coeffs
        )


def test_tridiag_shape_checks():
    with pytest.raises(DomainError):
        TridiagMatrix([1, 2, 3], [1], [1, 2])
    with pytest.raises(DomainError):
        TridiagMatrix([], [], [])


def test_apply_examples():
    np.testing.assert_array_equal(apply_hamiltonian(f(2, 0), REF_POINT).coeffs, [4, 1j, 0])
    np.testing.assert_array_equal(
        apply_hamiltonian(f(1, 1), ModelParams(1.0, 0.0)).coeffs, [1j, -1]
    )
    p = HomogeneousPoly(4, [1, 2j, 3, 4 - 1j, 5])
    out = apply_hamiltonian(p, ModelParams(0.0, 0.0))
    np.testing.assert_array_equal(out.coeffs, p.coeffs * np.array([4, 2, 0, -2, -4]))


def test_degree_preserved():
    p = HomogeneousPoly(6, np.arange(7) + 1j)
    assert apply_hamiltonian(p, REF_POINT).degree == 6


@pytest.mark.parametrize("m", [0, 2, 25])
def test_consistency_examples(m):
    params = REF_POINT if m < 25 else ModelParams(0.77, -1.3, 0.4)
    assert matrix_apply_consistency(m, params)


def test_consistency_randomised():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        params = ModelParams(*rng.uniform(-3, 3, size=3))
        for m in range(26):
            assert matrix_apply_consistency(m, params, n_random=1, seed=m)


@pytest.mark.parametrize("m", [1, 2, 5, 9])
def test_matches_ladder_operator_construction(m):
    params = ModelParams(0.37, -0.8, 1.3)
    expected = dense_hamiltonian(m, params.gamma, params.alpha, params.epsilon0)
    np.testing.assert_allclose(build_matrix(m, params).to_dense(), expected, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("m", range(0, 12))
def test_number_operator_is_m_identity(m):
    N = np.column_stack([number_operator(f(m, k)).coeffs for k in range(m + 1)])
    np.testing.assert_array_equal(N, m * np.eye(m + 1))


def test_gamma_zero_is_diagonal():
    params = ModelParams(0.0, 1.7, 0.9)
    M = build_matrix(5, params).to_dense()
    expected = [beta(5 - 2 * k, params) for k in range(6)]
    np.testing.assert_array_equal(M, np.diag(expected))
