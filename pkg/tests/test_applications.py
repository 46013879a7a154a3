import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import stats

from bdca import (CopositivityTag, SolverConfig, SolveStatus, cycle_adjacency,
                  horn_family, quad_form, random_box_start,
                  random_orthant_ball_start, random_tr_instance, solve_tr)
from bdca import test_copositivity as copositivity_heuristic
from oracles import box_kkt_points

H5_EXPECTED = np.array([
    [1.0, -1.0, 1.0, 1.0, -1.0],
    [-1.0, 1.0, -1.0, 1.0, 1.0],
    [1.0, -1.0, 1.0, -1.0, 1.0],
    [1.0, 1.0, -1.0, 1.0, -1.0],
    [-1.0, 1.0, 1.0, -1.0, 1.0],
])


class TestCycleAdjacency:

    def test_triangle_is_all_ones_off_diagonal(self):
        assert_allclose(cycle_adjacency(3), np.ones((3, 3)) - np.eye(3))

    def test_pentagon_first_row(self):
        assert_allclose(cycle_adjacency(5)[0], [0.0, 1.0, 0.0, 0.0, 1.0])

    @pytest.mark.parametrize('n', [3, 4, 7, 12, 30])
    def test_row_sums_are_two(self, n):
        assert_allclose(cycle_adjacency(n).sum(axis=1), 2.0)

    def test_too_small_rejected(self):
        with pytest.raises(ValueError):
            cycle_adjacency(2)


class TestHornFamily:

    def test_h5_matches_reference_matrix(self):
        assert_allclose(horn_family(5, 2.0), H5_EXPECTED)

    @pytest.mark.parametrize('n,mu', [(3, 2.0), (5, 1.9), (10, 2.5), (50, 2.0)])
    def test_symmetric_with_constant_diagonal(self, n, mu):
        Q = horn_family(n, mu)
        assert np.array_equal(Q, Q.T)
        assert_allclose(np.diag(Q), mu - 1.0)

    def test_two_coordinate_quadratic_form(self):
        Q = horn_family(5, 1.9)
        x = np.array([1.0, 1.0, 0.0, 0.0, 0.0])
        assert_allclose(quad_form(Q, x), 2.0 * 1.9 - 4.0, atol=1e-14)


class TestOrthantBallStart:

    def test_inside_orthant_ball(self):
        for seed in range(200):
            x = random_orthant_ball_start(6, seed)
            assert np.all(x >= 0.0)
            assert np.linalg.norm(x) <= 1.0 + 1e-15

    def test_deterministic(self):
        a = random_orthant_ball_start(8, 42)
        b = random_orthant_ball_start(8, 42)
        assert np.array_equal(a, b)

    def test_radius_power_is_uniform(self):
        # ||x||^n ~ U(0,1) for the uniform draw on the ball's orthant patch
        radii_sq = np.array([
            float(random_orthant_ball_start(2, 10_000 + i) @
                  random_orthant_ball_start(2, 10_000 + i))
            for i in range(10_000)])
        assert stats.kstest(radii_sq, 'uniform').pvalue > 0.01


class TestCopositivityHeuristic:

    def test_identity_is_undecided(self):
        verdict = copositivity_heuristic(np.eye(4), n_starts=10, seed=3)
        assert verdict.tag is CopositivityTag.UNDECIDED
        assert verdict.witness is None
        assert len(verdict.critical_points) == 10
        assert all(phi >= -1e-9 for (_, phi, _) in verdict.critical_points)

    def test_negative_scalar_is_detected(self):
        verdict = copositivity_heuristic(np.array([[-1.0]]), n_starts=4, seed=0)
        assert verdict.tag is CopositivityTag.NON_COPOSITIVE
        assert verdict.witness is not None and verdict.witness[0] > 0.0
        assert verdict.witness_phi < 0.0

    def test_perturbed_horn_detected_with_verified_witness(self):
        A = horn_family(5, 1.9)
        verdict = copositivity_heuristic(A, n_starts=20, seed=7)
        assert verdict.tag is CopositivityTag.NON_COPOSITIVE
        w = verdict.witness
        assert np.all(w >= 0.0)
        assert quad_form(A, w) < 0.0
        # the two-coordinate support shows a witness exists analytically
        assert quad_form(A, np.array([1.0, 1.0, 0.0, 0.0, 0.0]) / np.sqrt(2)) \
            == pytest.approx(1.9 - 2.0)

    @pytest.mark.parametrize('algorithm', ['dca', 'bdca'])
    @pytest.mark.parametrize('n', [5, 10, 20])
    def test_copositive_horn_stays_undecided(self, n, algorithm):
        verdict = copositivity_heuristic(horn_family(n, 2.0), n_starts=100,
                                    algorithm=algorithm, seed=11)
        assert verdict.tag is CopositivityTag.UNDECIDED
        phis = [phi for (_, phi, _) in verdict.critical_points]
        assert min(phis) >= -1e-9

    @pytest.mark.parametrize('algorithm', ['dca', 'bdca'])
    @pytest.mark.parametrize('n', [5, 10, 20])
    def test_noncopositive_horn_detected(self, n, algorithm):
        A = horn_family(n, 1.9)
        verdict = copositivity_heuristic(A, n_starts=100, algorithm=algorithm,
                                    seed=13)
        assert verdict.tag is CopositivityTag.NON_COPOSITIVE
        assert quad_form(A, verdict.witness) < 0.0


class TestTrInstances:

    def test_entry_ranges_and_symmetry(self):
        for seed in range(20):
            inst = random_tr_instance(12, seed)
            assert np.all(np.abs(inst.A) < 1.0)
            assert np.all(np.abs(inst.b) < 1.0)
            assert 0.0 < inst.r < np.sqrt(12)
            assert np.array_equal(inst.A, inst.A.T)

    def test_deterministic(self):
        a = random_tr_instance(6, 99)
        b = random_tr_instance(6, 99)
        assert np.array_equal(a.A, b.A) and np.array_equal(a.b, b.b)
        assert a.r == b.r

    def test_box_start_inside(self):
        x = random_box_start(9, 2.5, 5)
        assert np.all(np.abs(x) <= 2.5)


class TestSolveTr:

    def test_convex_instance_reaches_origin(self):
        inst = random_tr_instance(3, 0)
        convex = type(inst)(A=np.eye(3), b=np.zeros(3), r=1.0, seed=0)
        result = solve_tr(convex, np.array([0.3, -0.2, 0.9]))
        assert abs(result.phi_star) <= 1e-12
        assert np.linalg.norm(result.x_star) <= 1e-6

    def test_concave_instance_reaches_vertex(self):
        inst = random_tr_instance(2, 0)
        concave = type(inst)(A=-np.eye(2), b=np.zeros(2), r=1.0, seed=0)
        result = solve_tr(concave, np.array([0.1, 0.1]))
        vertices = [np.array(v) for v in
                    ((1, 1), (1, -1), (-1, 1), (-1, -1))]
        values = [0.5 * quad_form(concave.A, v) for v in vertices]
        assert_allclose(min(values), -1.0)
        assert result.phi_star == pytest.approx(-1.0, abs=1e-9)
        assert min(np.linalg.norm(result.x_star - v, np.inf)
                   for v in vertices) <= 1e-6

    @pytest.mark.parametrize('algorithm', ['dca', 'bdca'])
    def test_random_terminals_are_enumerated_kkt_points(self, algorithm):
        for seed in range(8):
            inst = random_tr_instance(4, seed)
            x0 = random_box_start(4, inst.r, 1_000 + seed)
            result = solve_tr(inst, x0, algorithm=algorithm)
            assert result.status in (SolveStatus.DTOL_REACHED,
                                     SolveStatus.STATIONARY_EXACT)
            kkt = box_kkt_points(inst.A, inst.b,
                                 np.full(4, -inst.r), np.full(4, inst.r))
            assert min(np.linalg.norm(result.x_star - z, np.inf)
                       for z in kkt) <= 1e-6

    def test_infeasible_start_rejected(self):
        inst = random_tr_instance(2, 1)
        with pytest.raises(ValueError, match='outside'):
            solve_tr(inst, np.array([inst.r * 2.0, 0.0]))
