"""Benchmark problem families: copositivity testing and l_inf trust regions.

Copositivity of a symmetric matrix A (x'Ax >= 0 on the nonnegative orthant)
is probed heuristically by minimizing x'Ax over the orthant from many random
starts: a strictly negative value certifies non-copositivity, otherwise the
matrix remains undecided. The hard test family is built from the cycle
graph: mu*(E - A_cycle) - E is copositive exactly for mu >= 2 (mu = 2 gives
the Horn matrix).

The trust-region family minimizes a random indefinite quadratic over the
sup-norm ball of radius r.
"""

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .constraints import Box, NonnegOrthant
from .kkt import kkt_residual
from .model import SolverConfig, as_symmetric_matrix, build_problem
from .solver import run_bdca, run_dca

__all__ = (
    'CopositivityTag',
    'CopositivityVerdict',
    'TrInstance',
    'cycle_adjacency',
    'horn_family',
    'quad_form',
    'quad_form_rounding_guard',
    'random_orthant_ball_start',
    'random_box_start',
    'copositivity_problem',
    'test_copositivity',
    'random_tr_instance',
    'tr_problem',
    'solve_tr',
)

_RUNNERS = {'dca': run_dca, 'bdca': run_bdca}


class CopositivityTag(Enum):
    NON_COPOSITIVE = 'non_copositive'
    UNDECIDED = 'undecided'


@dataclass
class CopositivityVerdict:
    """Outcome of the multi-start heuristic.

    ``witness`` is present exactly when the tag is NON_COPOSITIVE and
    satisfies witness >= 0 with <A witness, witness> < 0, re-verified by
    direct evaluation before the verdict is emitted. ``critical_points``
    collects (x_star, phi_star, kkt_stationarity) for every start that ran
    to a critical point (runs cut short by the negativity stop are excluded;
    their terminal is not critical).
    """

    tag: CopositivityTag
    witness: np.ndarray | None
    witness_phi: float | None
    critical_points: list


def cycle_adjacency(n):
    """Adjacency matrix of the n-cycle: a_ij = 1 iff |i - j| in {1, n-1}."""
    if n < 3:
        raise ValueError('a cycle needs at least 3 nodes')
    idx = np.arange(n)
    diff = np.abs(idx[:, None] - idx[None, :])
    return ((diff == 1) | (diff == n - 1)).astype(float)


def horn_family(n, mu):
    """The matrix mu*(E - A_cycle) - E; equals the Horn matrix at mu = 2."""
    if n < 3:
        raise ValueError('a cycle needs at least 3 nodes')
    E = np.ones((n, n))
    return mu * (E - cycle_adjacency(n)) - E


def quad_form(A, x):
    """Direct evaluation of <Ax, x>; used to re-verify witnesses."""
    x = np.asarray(x, dtype=float)
    return float(x @ (np.asarray(A, dtype=float) @ x))


def quad_form_rounding_guard(A, x):
    """Bound on the floating-point error of quad_form(A, x).

    A value above this magnitude has a trustworthy sign; values inside the
    band may be rounding dust from an exactly-zero form (matrices on the
    boundary of the copositive cone reach 0 on nontrivial faces).
    """
    A = np.asarray(A, dtype=float)
    x = np.asarray(x, dtype=float)
    n = x.size
    return 64.0 * np.finfo(float).eps * n * float(np.max(np.abs(A))) * float(x @ x)


def random_orthant_ball_start(n, seed):
    """Uniform draw from the unit ball intersected with the orthant.

    Componentwise absolute values of a standard normal give a uniform
    direction on the orthant's sphere patch; the radius u**(1/n) with
    u ~ U(0,1) makes the draw uniform over the solid region. Deterministic
    for a fixed seed.
    """
    rng = np.random.default_rng(seed)
    s = np.abs(rng.standard_normal(n))
    norm = float(np.linalg.norm(s))
    while norm == 0.0:
        s = np.abs(rng.standard_normal(n))
        norm = float(np.linalg.norm(s))
    u = rng.random()
    return (u ** (1.0 / n) / norm) * s


def random_box_start(n, radius, seed):
    """Uniform draw from the box [-radius, radius]^n."""
    rng = np.random.default_rng(seed)
    return rng.uniform(-radius, radius, size=n)


def copositivity_problem(A):
    """DC program whose objective is exactly <Ax, x> over the orthant.

    The solver convention is phi = 0.5*<Qx, x> + <q, x>, so Q = 2A makes
    the reported objective match <Ax, x> without rescaling.
    """
    A = as_symmetric_matrix(A)
    return build_problem(2.0 * A, np.zeros(A.shape[0]), NonnegOrthant(A.shape[0]))


def test_copositivity(A, n_starts, cfg=None, algorithm='bdca', seed=0):
    """Multi-start non-copositivity heuristic.

    Parameters
    ----------
    A : array_like, shape (n, n)
        Symmetric matrix to test.
    n_starts : int
        Number of random starting points in the orthant-ball intersection.
    cfg : SolverConfig, optional
        Solver settings; ``objective_stop`` is the negativity threshold and
        defaults to 0 (stop as soon as phi < 0).
    algorithm : {'dca', 'bdca'}
    seed : int
        Base seed; start i uses the spawn key (seed, i).

    Returns
    -------
    CopositivityVerdict
        NON_COPOSITIVE with the first witness found (starts are scanned in
        order), else UNDECIDED with the critical points of every start.
    """
    A = as_symmetric_matrix(A)
    n = A.shape[0]
    if cfg is None:
        cfg = SolverConfig(d_tol=1e-9, objective_stop=0.0)
    threshold = cfg.objective_stop if cfg.objective_stop is not None else 0.0
    if cfg.objective_stop is None:
        cfg = replace(cfg, objective_stop=threshold)
    run = _RUNNERS[algorithm]
    problem = copositivity_problem(A)
    orthant = problem.constraints

    critical_points = []
    for i in range(n_starts):
        x0 = random_orthant_ball_start(n, np.random.SeedSequence(seed, spawn_key=(i,)))
        result = run(problem, x0, cfg)
        if result.phi_star < threshold:
            witness = orthant.project(result.x_star)  # strip rounding dust
            value = quad_form(A, witness)
            if value < -quad_form_rounding_guard(A, witness) and \
                    orthant.contains(witness, 0.0):
                return CopositivityVerdict(CopositivityTag.NON_COPOSITIVE,
                                           witness, value, critical_points)
            # The negativity was rounding dust from an exactly-zero form;
            # the run stopped early, so its terminal is not a critical point.
            continue
        report = kkt_residual(problem, result.x_star, cfg.active_tol)
        critical_points.append((result.x_star, result.phi_star,
                                report.stationarity_residual))
    return CopositivityVerdict(CopositivityTag.UNDECIDED, None, None,
                               critical_points)


@dataclass(frozen=True)
class TrInstance:
    """One l_inf trust-region subproblem: min 0.5<Ax,x> + <b,x>, |x|_inf <= r."""

    A: np.ndarray
    b: np.ndarray
    r: float
    seed: int

    @property
    def n(self):
        return self.A.shape[0]


def random_tr_instance(n, seed):
    """Random trust-region instance.

    A is a full uniform(-1, 1) draw averaged with its transpose (keeping
    entries inside ]-1, 1[), b is uniform(-1, 1), and the radius is uniform
    in ]0, sqrt(n)[. Deterministic for a fixed seed.
    """
    rng = np.random.default_rng(seed)
    M = rng.uniform(-1.0, 1.0, size=(n, n))
    A = 0.5 * (M + M.T)
    b = rng.uniform(-1.0, 1.0, size=n)
    r = rng.uniform(0.0, np.sqrt(n))
    while r == 0.0:
        r = rng.uniform(0.0, np.sqrt(n))
    return TrInstance(A=A, b=b, r=float(r), seed=seed)


def tr_problem(inst):
    """DC program for a trust-region instance over the box [-r, r]^n."""
    return build_problem(inst.A, inst.b, Box.symmetric(inst.n, inst.r))


def solve_tr(inst, x_0, cfg=None, algorithm='bdca'):
    """Solve one trust-region subproblem from the start x_0.

    The default stopping tolerance on ||d_k|| is 1e-8.
    """
    x_0 = np.asarray(x_0, dtype=float)
    if float(np.max(np.abs(x_0))) > inst.r:
        raise ValueError('starting point lies outside the trust region')
    if cfg is None:
        cfg = SolverConfig(d_tol=1e-8)
    return _RUNNERS[algorithm](tr_problem(inst), x_0, cfg)
