import numpy as np
import pytest
from scipy.optimize import brentq

from oracles import det_recurrence_poly
from pptdimer import DomainError, ModelParams, SweepGrid, build_matrix, locate_boundary, run_sweep
from pptdimer.sweep import axis_values, evaluate_point, resolve_threads


def test_axis_values():
    np.testing.assert_allclose(axis_values((0.0, 1.0, 5)), [0, 0.25, 0.5, 0.75, 1.0])
    np.testing.assert_array_equal(axis_values((0.3, 0.3, 1)), [0.3])


def test_grid_order_is_alpha_major():
    grid = SweepGrid(2, (0.0, 1.0, 2), (0.0, 2.0, 3))
    assert grid.points() == [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (0.0, 2.0), (1.0, 2.0)]


@pytest.mark.parametrize(
    "rng", [(1.0, 0.0, 3), (0.0, 1.0, 0), (0.0, float("nan"), 2), (0.0, 1.0, 2.5)]
)
def test_bad_ranges(rng):
    with pytest.raises(DomainError):
        SweepGrid(2, rng, (0.0, 1.0, 2))


def test_single_point_broken_phase():
    (r,) = run_sweep(SweepGrid(2, (0.5, 0.5, 1), (0.5, 0.5, 1)))
    assert (r.n_real, r.n_broken, r.mismatches, r.marginal) == (1, 2, 0, False)
    assert r.min_imag_margin == pytest.approx(0.71569, abs=1e-5)


def test_single_point_unbroken_phase():
    (r,) = run_sweep(SweepGrid(2, (0.5, 0.5, 1), (4.0, 4.0, 1)))
    assert (r.n_real, r.n_broken, r.mismatches) == (3, 0, 0)
    assert r.min_imag_margin == 0.0


def test_no_tunneling_row_is_all_real():
    for r in run_sweep(SweepGrid(3, (0.0, 0.0, 1), (-2.0, 2.0, 9))):
        assert r.n_real == 4
        assert r.ok


def test_kept_spectrum():
    (r,) = run_sweep(SweepGrid(2, (0.5, 0.5, 1), (4.0, 4.0, 1), keep_spectrum=True))
    assert sorted(z.real for z in r.spectrum) == pytest.approx([0.06375, 13.96387, 17.97237], abs=1e-5)


def test_parallel_matches_serial():
    grid = SweepGrid(3, (0.0, 2.0, 7), (0.0, 4.0, 5))
    assert run_sweep(grid, 1) == run_sweep(grid, 3)


def test_points_are_independent_of_grid():
    grid = SweepGrid(4, (0.0, 2.0, 5), (0.0, 4.0, 5))
    for r in run_sweep(grid)[::3]:
        assert evaluate_point(grid, r.gamma, r.alpha) == r


def test_broken_count_is_even():
    for m in (2, 3, 5):
        for r in run_sweep(SweepGrid(m, (0.0, 2.0, 9), (-2.0, 4.0, 9))):
            if r.ok:
                assert r.n_broken % 2 == 0
                assert r.n_real + r.n_broken == m + 1


def test_resolve_threads(monkeypatch):
    monkeypatch.delenv("PPT_THREADS", raising=False)
    assert resolve_threads() == 1
    monkeypatch.setenv("PPT_THREADS", "3")
    assert resolve_threads() == 3
    assert resolve_threads(2) == 2
    with pytest.raises(DomainError):
        resolve_threads(0)
    monkeypatch.setenv("PPT_THREADS", "many")
    with pytest.raises(DomainError):
        resolve_threads()


def _cubic_discriminant(gamma, alpha):
    M = build_matrix(2, ModelParams(gamma, alpha))
    d, c, b, a = det_recurrence_poly(M.diag, M.sub, M.sup).real
    return 18 * a * b * c * d - 4 * b**3 * d + b**2 * c**2 - 4 * a * c**3 - 27 * a**2 * d**2


def test_boundary_matches_discriminant_root():
    grid = SweepGrid(2, (0.5, 0.5, 1), (0.5, 4.0, 15))
    (bp,) = locate_boundary(grid, "alpha", width=1e-9)
    expected = brentq(lambda a: _cubic_discriminant(0.5, a), 0.5, 4.0, xtol=1e-14)
    assert bp.value == pytest.approx(expected, abs=1e-8)
    assert (bp.n_real_lower, bp.n_real_upper) == (1, 3)
    assert bp.upper - bp.lower <= 1e-9
    assert bp.fixed == 0.5


def test_boundary_along_gamma():
    grid = SweepGrid(2, (0.05, 1.0, 12), (1.0, 1.0, 1))
    points = locate_boundary(grid, "gamma", width=1e-8)
    assert len(points) == 1
    g = brentq(lambda x: _cubic_discriminant(x, 1.0), 0.05, 1.0, xtol=1e-14)
    assert points[0].value == pytest.approx(g, abs=1e-7)
    assert points[0].n_real_lower == 3


def test_no_transition_gives_no_boundary():
    grid = SweepGrid(2, (0.5, 0.5, 1), (3.0, 4.0, 6))
    assert locate_boundary(grid, "alpha") == []


def test_boundary_needs_one_dimensional_scan():
    with pytest.raises(DomainError):
        locate_boundary(SweepGrid(2, (0.0, 1.0, 3), (0.0, 1.0, 3)), "alpha")
    with pytest.raises(DomainError):
        locate_boundary(SweepGrid(2, (0.0, 1.0, 1), (0.0, 1.0, 3)), "beta")
