import numpy as np
import pytest
from numpy.testing import assert_allclose

from bdca import (Box, NonnegOrthant, SolverConfig, SolveStatus, StepSizeState,
                  adaptive_trial_step, build_problem, dca_step, line_search,
                  phi_value, run_bdca, run_dca)
from conftest import random_box_problem
from oracles import box_kkt_points, convex_minimizer_pg, subproblem_minimizer_pg


def capture_runner(run, p, x0, cfg):
    """Run and collect (k, x_k, y_k, d_k, lambda_k) alongside the result."""
    steps = []
    result = run(p, x0, cfg, callback=lambda k, x, y, d, lam: steps.append(
        (k, x.copy(), y.copy(), d.copy(), lam)))
    return result, steps


class TestDcaStep:

    def test_interior_fixed_point(self):
        p = build_problem(np.eye(2), np.zeros(2), Box.symmetric(2, 1.0))
        assert_allclose(dca_step(p, np.zeros(2)), np.zeros(2))

    def test_orthant_closed_form_and_grid(self):
        p = build_problem(np.eye(2), np.array([-2.0, 0.0]), NonnegOrthant(2))
        y = dca_step(p, np.zeros(2))
        assert_allclose(y, [2.0 / p.sigma, 0.0], rtol=1e-12)
        # brute force the subproblem phi_k over a fine grid; u = grad_h(0) = 0
        grid = np.arange(0.0, 3.0, 0.002)
        vals = 0.5 * p.sigma * grid ** 2 - 2.0 * grid
        assert abs(grid[np.argmin(vals)] - y[0]) < 2e-3
        assert abs(y[1]) == 0.0

    def test_matches_independent_inner_solver(self, rng):
        for _ in range(20):
            p = random_box_problem(rng, 6)
            x = p.constraints.project(rng.uniform(-1.0, 1.0, size=6))
            u = p.sigma * x - p.Q @ x
            y = dca_step(p, x)
            y_oracle = subproblem_minimizer_pg(p, u, start=p.constraints.project(
                rng.uniform(-1.0, 1.0, size=6)))
            assert np.linalg.norm(y - y_oracle, np.inf) <= 1e-10


class TestLineSearch:

    def test_zero_initial_step(self, rng):
        p = random_box_problem(rng, 3)
        lam, bt = line_search(p, np.zeros(3), np.ones(3), 0.0, SolverConfig())
        assert lam == 0.0 and bt == 0

    def test_one_dimensional_armijo_by_direct_evaluation(self):
        # minimize x^2 on [-1, 1] from x = 1
        p = build_problem(np.array([[2.0]]), np.zeros(1), Box.symmetric(1, 1.0))
        cfg = SolverConfig()
        x = np.array([1.0])
        y = dca_step(p, x)
        d = y - x
        lam, bt = line_search(p, y, d, 1.0, cfg)
        assert lam > 0.0 and bt >= 1
        dn2 = float(d @ d)
        lhs = phi_value(p, y + lam * d)
        rhs = phi_value(p, y) - cfg.alpha * lam ** 2 * dn2
        assert lhs <= rhs + 1e-12
        # one step earlier in the backtracking sequence must fail
        lam_prev = lam / cfg.beta
        assert phi_value(p, y + lam_prev * d) > (
            phi_value(p, y) - cfg.alpha * lam_prev ** 2 * dn2)

    def test_descent_with_oversized_trial(self, rng):
        p = build_problem(2.0 * np.eye(2), np.array([0.5, -0.25]),
                          Box.symmetric(2, 10.0))
        cfg = SolverConfig()
        y = np.array([1.0, 1.0])
        d = -(p.Q @ y + p.q)  # steepest descent, plainly a descent direction
        d = d / np.linalg.norm(d)
        lam, bt = line_search(p, y, d, 64.0, cfg)
        assert bt >= 1 and lam > 0.0
        dn2 = 1.0
        assert phi_value(p, y + lam * d) <= phi_value(p, y) - cfg.alpha * lam ** 2 * dn2
        lam_prev = lam / cfg.beta
        assert phi_value(p, y + lam_prev * d) > (
            phi_value(p, y) - cfg.alpha * lam_prev ** 2 * dn2)

    def test_rejects_zero_direction(self, rng):
        p = random_box_problem(rng, 2)
        with pytest.raises(ValueError):
            line_search(p, np.zeros(2), np.zeros(2), 1.0, SolverConfig())


class TestAdaptiveTrialStep:

    def test_fresh_state_returns_initial(self):
        cfg = SolverConfig(lambda_bar_0=1.0, gamma=2.0)
        state = StepSizeState(last_accepted_positive=cfg.lambda_bar_0)
        assert adaptive_trial_step(state, cfg) == 1.0

    def test_two_direct_acceptances_scale(self):
        cfg = SolverConfig(gamma=2.0)
        state = StepSizeState(last_accepted_positive=0.5,
                              consecutive_unbacktracked=2, ever_searched=True)
        assert adaptive_trial_step(state, cfg) == 1.0

    def test_single_acceptance_reuses_last(self):
        cfg = SolverConfig(gamma=2.0)
        state = StepSizeState(last_accepted_positive=0.5,
                              consecutive_unbacktracked=1, ever_searched=True)
        assert adaptive_trial_step(state, cfg) == 0.5


def trace_columns(result):
    return [(r.k, r.phi_x, r.phi_y, r.d_norm, r.lambda_k, r.trial_lambda,
             r.backtracks) for r in result.iterations]


class TestRunBdca:

    def test_immediate_exact_stationarity(self):
        p = build_problem(np.eye(2), np.zeros(2), NonnegOrthant(2))
        result = run_bdca(p, np.zeros(2))
        assert result.status is SolveStatus.STATIONARY_EXACT
        assert result.phi_star == 0.0
        assert_allclose(result.x_star, np.zeros(2))
        assert result.iterations[-1].d_norm == 0.0

    def test_zero_trial_step_reduces_to_dca(self, rng):
        cfg = SolverConfig(lambda_bar_0=0.0, max_iter=400)
        for _ in range(5):
            p = random_box_problem(rng, 10)
            x0 = p.constraints.project(rng.uniform(-1.0, 1.0, size=10))
            rb, sb = capture_runner(run_bdca, p, x0, cfg)
            rd, sd = capture_runner(run_dca, p, x0, cfg)
            assert trace_columns(rb) == trace_columns(rd)
            assert np.array_equal(rb.x_star, rd.x_star)
            for (_, xb, yb, _, _), (_, xd, yd, _, _) in zip(sb, sd):
                assert np.array_equal(xb, xd) and np.array_equal(yb, yd)

    def test_terminal_is_enumerated_kkt_point(self):
        Q = np.diag([1.0, -1.0])
        q = np.array([0.3, 0.2])
        p = build_problem(Q, q, Box.symmetric(2, 1.0))
        result = run_bdca(p, np.zeros(2))
        assert result.status is SolveStatus.DTOL_REACHED
        kkt = box_kkt_points(Q, q, [-1.0, -1.0], [1.0, 1.0])
        dist = min(np.linalg.norm(result.x_star - z, np.inf) for z in kkt)
        assert dist <= 1e-6

    def test_infeasible_start_rejected(self, rng):
        p = build_problem(np.eye(2), np.zeros(2), NonnegOrthant(2))
        with pytest.raises(ValueError, match='feasible'):
            run_bdca(p, np.array([-1.0, 0.0]))

    def test_objective_stop(self):
        # concave direction: phi goes negative fast on the orthant
        p = build_problem(np.array([[-1.0, 0.0], [0.0, 1.0]]), np.zeros(2),
                          NonnegOrthant(2))
        cfg = SolverConfig(objective_stop=-0.5, max_iter=10_000)
        result = run_bdca(p, np.array([0.5, 0.0]), cfg)
        assert result.status is SolveStatus.OBJECTIVE_STOP_REACHED
        assert result.phi_star < -0.5

    def test_objective_stop_already_met_at_start(self):
        p = build_problem(np.array([[-1.0]]), np.zeros(1), NonnegOrthant(1))
        cfg = SolverConfig(objective_stop=-0.1)
        result = run_bdca(p, np.array([1.0]), cfg)
        assert result.status is SolveStatus.OBJECTIVE_STOP_REACHED
        assert result.n_iterations == 0
        assert_allclose(result.x_star, [1.0])


class TestRunDca:

    def test_iterates_are_repeated_projections(self, rng):
        p = random_box_problem(rng, 5)
        x0 = p.constraints.project(rng.uniform(-1.0, 1.0, size=5))
        cfg = SolverConfig(max_iter=10)
        _, steps = capture_runner(run_dca, p, x0, cfg)
        x = x0.copy()
        for (_, xk, yk, _, _) in steps:
            assert np.array_equal(xk, x)
            y = dca_step(p, x)
            assert np.array_equal(yk, y)
            x = y

    def test_monotone_objective(self, rng):
        for _ in range(20):
            p = random_box_problem(rng, 8)
            x0 = p.constraints.project(rng.uniform(-1.0, 1.0, size=8))
            result = run_dca(p, x0, SolverConfig(max_iter=2_000))
            phis = [r.phi_x for r in result.iterations] + [result.phi_star]
            for a, b in zip(phis, phis[1:]):
                assert b <= a + 1e-9 * (1.0 + abs(a))

    def test_convex_instance_both_algorithms_agree(self, rng):
        M = rng.standard_normal((6, 6))
        Q = M @ M.T / 6.0 + 0.5 * np.eye(6)
        q = rng.uniform(-1.0, 1.0, size=6)
        p = build_problem(Q, q, Box.symmetric(6, 1.0))
        x0 = p.constraints.project(rng.uniform(-1.0, 1.0, size=6))
        xd = run_dca(p, x0).x_star
        xb = run_bdca(p, x0).x_star
        x_oracle = convex_minimizer_pg(p)
        assert np.linalg.norm(xd - xb, np.inf) <= 1e-6
        assert np.linalg.norm(xb - x_oracle, np.inf) <= 1e-6


@pytest.fixture(scope='module')
def runs():
    rng = np.random.default_rng(77)
    collected = []
    for i in range(12):
        p = random_box_problem(rng, 7)
        x0 = p.constraints.project(rng.uniform(-1.0, 1.0, size=7))
        for run in (run_bdca, run_dca):
            result, steps = capture_runner(run, p, x0,
                                           SolverConfig(max_iter=3_000))
            collected.append((p, result, steps))
    return collected


class TestIterationInvariants:

    def test_sufficient_decrease_eq6(self, runs):
        for p, result, steps in runs:
            cfg_alpha, rho = 0.01, p.rho
            for (k, x, y, d, lam) in steps:
                slack = 1e-9 * (1.0 + abs(phi_value(p, x)))
                dn2 = float(d @ d)
                phi_next = phi_value(p, y + lam * d)
                assert phi_next <= phi_value(p, x) - (cfg_alpha * lam ** 2 + rho) * dn2 + slack
                assert phi_value(p, y) <= phi_value(p, x) - rho * dn2 + slack

    def test_descent_direction_finite_difference(self, runs):
        t = 1e-7
        for p, result, steps in runs:
            for (k, x, y, d, lam), rec in zip(steps, result.iterations):
                if not rec.direction_feasible or rec.d_norm <= 1e-4:
                    continue
                fd = (phi_value(p, y + t * d) - phi_value(p, y)) / t
                assert fd <= -0.5 * p.rho * float(d @ d)

    def test_all_iterates_feasible(self, runs):
        for p, result, steps in runs:
            for (k, x, y, d, lam) in steps:
                assert p.constraints.contains(x, 1e-8)
                assert p.constraints.contains(y, 1e-8)
            assert p.constraints.contains(result.x_star, 1e-8)

    def test_infeasible_gate_forces_dca_point(self, runs):
        for p, result, steps in runs:
            for (k, x, y, d, lam), rec in zip(steps, result.iterations):
                if not rec.direction_feasible:
                    assert rec.lambda_k == 0.0 and lam == 0.0
                assert rec.lambda_k <= rec.trial_lambda or not rec.direction_feasible

    def test_squared_step_sums_flatten(self, runs):
        for p, result, steps in runs:
            if result.status is not SolveStatus.DTOL_REACHED:
                continue
            sq = [r.d_norm ** 2 for r in result.iterations]
            tail = sq[int(0.9 * len(sq)):]
            assert sum(tail) <= 1e-12

    def test_status_bookkeeping(self, runs):
        for p, result, steps in runs:
            assert result.status in (SolveStatus.DTOL_REACHED,
                                     SolveStatus.STATIONARY_EXACT,
                                     SolveStatus.MAX_ITER_REACHED)
            if result.status is SolveStatus.STATIONARY_EXACT:
                assert result.iterations[-1].d_norm == 0.0
            if result.status is SolveStatus.DTOL_REACHED:
                assert result.iterations[-1].d_norm <= 1e-9
