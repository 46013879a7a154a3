import numpy as np
import pytest
from numpy.testing import assert_allclose

from bdca import (Box, NonnegOrthant, SolverConfig, SolveStatus, attach_kkt,
                  build_problem, kkt_residual, run_bdca)
from bdca.kkt import _nnls_projected_gradient
from conftest import random_box_problem
from oracles import nnls_bruteforce


class TestKktResidualExamples:

    def test_interior_minimum(self):
        p = build_problem(np.eye(2), np.array([-0.5, 0.0]), Box.symmetric(2, 1.0))
        report = kkt_residual(p, np.array([0.5, 0.0]))
        assert report.stationarity_residual <= 1e-10
        assert np.all(report.multipliers == 0.0)
        assert report.complementarity_residual == 0.0
        assert report.feasibility_violation == 0.0

    def test_active_orthant_bound(self):
        p = build_problem(np.array([[2.0]]), np.array([1.0]), NonnegOrthant(1))
        report = kkt_residual(p, np.array([0.0]))
        # gradient is 1; the row -x <= 0 carries mu = 1
        assert report.stationarity_residual <= 1e-10
        assert_allclose(report.multipliers, [1.0], atol=1e-10)

    def test_non_kkt_point_reports_gradient_norm(self):
        p = build_problem(np.eye(2), np.zeros(2), Box.symmetric(2, 1.0))
        report = kkt_residual(p, np.array([0.5, 0.5]))
        assert_allclose(report.stationarity_residual, np.sqrt(0.5), rtol=1e-12)

    def test_infeasible_point_rejected(self):
        p = build_problem(np.eye(2), np.zeros(2), NonnegOrthant(2))
        with pytest.raises(ValueError, match='feasible'):
            kkt_residual(p, np.array([-1.0, 0.0]))

    def test_multipliers_nonnegative(self, rng):
        for _ in range(10):
            p = random_box_problem(rng, 5)
            x = p.constraints.project(rng.uniform(-2.0, 2.0, size=5))
            report = kkt_residual(p, x)
            assert np.all(report.multipliers >= 0.0)
            assert report.stationarity_residual >= 0.0
            assert report.feasibility_violation >= 0.0


class TestNnlsOracle:

    def test_matches_enumeration_on_small_systems(self, rng):
        for _ in range(40):
            m = rng.integers(1, 5)
            n = rng.integers(1, 6)
            A = rng.uniform(-1.0, 1.0, size=(m, n))
            r = rng.uniform(-1.0, 1.0, size=n)
            mu, achieved = _nnls_projected_gradient(A, r)
            best, _ = nnls_bruteforce(A, r)
            assert np.all(mu >= 0.0)
            assert achieved <= best + 1e-8
            assert achieved >= best - 1e-8

    def test_orthonormal_rows_are_exact(self):
        A = np.array([[1.0, 0.0, 0.0], [0.0, -1.0, 0.0]])
        r = np.array([-2.0, 3.0, 0.5])
        mu, achieved = _nnls_projected_gradient(A, r)
        # best mu kills the matched components exactly
        assert_allclose(mu, [2.0, 3.0], atol=1e-10)
        assert_allclose(achieved, 0.5, atol=1e-10)


class TestTerminalVerification:

    def test_dtol_terminals_satisfy_kkt_bounds(self, rng):
        d_tol = 1e-9
        active_tol = 1e-8
        cfg = SolverConfig(d_tol=d_tol, active_tol=active_tol)
        for _ in range(10):
            p = random_box_problem(rng, 6)
            x0 = p.constraints.project(rng.uniform(-1.0, 1.0, size=6))
            result = run_bdca(p, x0, cfg)
            if result.status is not SolveStatus.DTOL_REACHED:
                continue
            report = attach_kkt(p, result, active_tol)
            assert result.kkt_residual == report.stationarity_residual
            assert report.stationarity_residual <= 100.0 * d_tol * p.sigma
            assert report.complementarity_residual <= active_tol
            assert report.feasibility_violation <= active_tol
