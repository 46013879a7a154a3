"""Quadratic DC problem model.

A problem instance minimizes phi(x) = 0.5*<Qx, x> + <q, x> over a polyhedral
feasible set, split as phi = g - h with

    g(x) = 0.5*sigma*||x||^2 + <q, x>,    h(x) = 0.5*<(sigma*I - Q)x, x>,

where sigma > max(0, lambda_max(Q)) makes both parts strongly convex with
modulus rho = min(sigma, sigma - lambda_max(Q)) > 0.
"""

import math
from collections import namedtuple
from dataclasses import dataclass

import numpy as np

__all__ = (
    'SpectralEstimate',
    'SolverConfig',
    'QuadraticDcProblem',
    'as_symmetric_matrix',
    'estimate_lambda_max',
    'build_problem',
    'phi_value',
    'grad_g',
    'grad_h',
)

# Fixed entropy for the power-iteration start vector; a constant makes every
# spectral estimate (and everything built on it) reproducible run to run.
_POWER_START_SEED = 0x5EED

SpectralEstimate = namedtuple('SpectralEstimate', 'value converged iterations')


def as_symmetric_matrix(entries, tol=1e-12):
    """Validate a dense symmetric matrix and return its symmetrized copy.

    Parameters
    ----------
    entries : array_like, shape (n, n)
        Square real matrix. Asymmetry up to `tol` (absolute, entrywise) is
        tolerated and removed by averaging with the transpose; anything
        larger is an error.
    tol : float, optional
        Absolute asymmetry tolerance.

    Returns
    -------
    numpy.ndarray, shape (n, n)
        Float64 array equal to (M + M.T)/2.
    """
    m = np.array(entries, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f'expected a square matrix, got shape {m.shape}')
    if m.shape[0] < 1:
        raise ValueError('matrix must have dimension >= 1')
    if not np.all(np.isfinite(m)):
        raise ValueError('matrix entries must be finite')
    skew = np.max(np.abs(m - m.T)) if m.size else 0.0
    if skew > tol:
        raise ValueError(
            f'matrix is not symmetric: max |M - M.T| = {skew:.3e} > {tol:.3e}')
    return 0.5 * (m + m.T)


def estimate_lambda_max(Q, tol=1e-9, max_iter=None):
    """Largest eigenvalue of a symmetric matrix by shifted power iteration.

    A row-sum bound c = max_i sum_j |Q_ij| shifts the spectrum so that
    Q + c*I is positive semidefinite, then power iteration runs from a fixed
    pseudo-random unit vector until two successive Rayleigh quotients differ
    by at most `tol`.

    Parameters
    ----------
    Q : array_like, shape (n, n)
        Symmetric matrix.
    tol : float, optional
        Absolute tolerance on successive Rayleigh quotients.
    max_iter : int, optional
        Iteration cap; defaults to max(10*n, 200), the floor covering small
        matrices at tight tolerances. On exhaustion the current estimate is
        returned with ``converged=False`` and the caller decides.

    Returns
    -------
    SpectralEstimate
        ``(value, converged, iterations)`` where ``value`` approximates
        lambda_max(Q) from below.
    """
    Q = np.asarray(Q, dtype=float)
    n = Q.shape[0]
    if max_iter is None:
        max_iter = max(10 * n, 200)
    c = float(np.max(np.sum(np.abs(Q), axis=1)))
    if c == 0.0:
        return SpectralEstimate(0.0, True, 0)
    M = Q + c * np.eye(n)
    rng = np.random.default_rng(_POWER_START_SEED)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    rq_prev = math.inf
    rq = 0.0
    for it in range(1, max_iter + 1):
        w = M @ v
        rq = float(v @ w)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            # v landed in the nullspace of a PSD shift; the quotient is exact
            # for this direction but no progress is possible.
            return SpectralEstimate(rq - c, False, it)
        v = w / nw
        if abs(rq - rq_prev) <= tol:
            return SpectralEstimate(rq - c, True, it)
        rq_prev = rq
    return SpectralEstimate(rq - c, False, max_iter)


@dataclass(frozen=True)
class SolverConfig:
    """Line-search and stopping parameters shared by DCA and BDCA.

    Attributes
    ----------
    alpha : float
        Sufficient-decrease constant of the Armijo test, > 0.
    beta : float
        Backtracking reduction factor, in (0, 1).
    lambda_bar_0 : float
        Initial trial step size for the boosting line search, >= 0.
    gamma : float
        Growth factor of the self-adaptive trial step, > 1.
    d_tol : float
        Stop once ||y_k - x_k|| falls to this value or below.
    max_iter : int
        Hard iteration cap.
    active_tol : float
        Active-constraint identification tolerance; each constraint row is
        tested with the scaled slack active_tol*(1 + |b_i|).
    max_backtracks : int
        Line-search reduction cap; exhaustion degrades to a zero step.
    objective_stop : float or None
        When set, stop as soon as phi(x_k) < objective_stop.
    """

    alpha: float = 0.01
    beta: float = 0.1
    lambda_bar_0: float = 1.0
    gamma: float = 2.0
    d_tol: float = 1e-9
    max_iter: int = 100_000
    active_tol: float = 1e-8
    max_backtracks: int = 50
    objective_stop: float | None = None

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError('alpha must be positive')
        if not 0.0 < self.beta < 1.0:
            raise ValueError('beta must lie strictly between 0 and 1')
        if self.lambda_bar_0 < 0:
            raise ValueError('lambda_bar_0 must be nonnegative')
        if not self.gamma > 1.0:
            raise ValueError('gamma must exceed 1')
        if not self.d_tol > 0:
            raise ValueError('d_tol must be positive')
        if not self.active_tol > 0:
            raise ValueError('active_tol must be positive')
        if self.max_iter < 1 or self.max_backtracks < 0:
            raise ValueError('iteration caps must be sensible')


@dataclass(frozen=True)
class QuadraticDcProblem:
    """Immutable quadratic DC program over a polyhedral set.

    ``sigma`` and ``rho`` are the strong-convexity parameters of the split;
    use :func:`build_problem` to derive them from a spectral estimate rather
    than filling them in by hand.
    """

    Q: np.ndarray
    q: np.ndarray
    constraints: object
    sigma: float
    rho: float
    lambda_max_estimate: float

    def __post_init__(self):
        n = self.Q.shape[0]
        if self.q.shape != (n,):
            raise ValueError(f'q has shape {self.q.shape}, expected ({n},)')
        if self.constraints.n != n:
            raise ValueError(
                f'constraint dimension {self.constraints.n} != matrix dimension {n}')
        if not self.sigma > max(0.0, self.lambda_max_estimate):
            raise ValueError('sigma must strictly exceed max(0, lambda_max)')
        expected_rho = min(self.sigma, self.sigma - self.lambda_max_estimate)
        if not (self.rho > 0 and abs(self.rho - expected_rho) <= 1e-12 * (1 + abs(expected_rho))):
            raise ValueError('rho must equal min(sigma, sigma - lambda_max) and be positive')

    @property
    def n(self):
        return self.Q.shape[0]


def build_problem(Q, q, constraints, sigma_margin=0.05):
    """Assemble a :class:`QuadraticDcProblem` with an automatic DC split.

    The splitting parameter is sigma = max(0, lam) + max(sigma_margin*|lam|,
    sigma_margin), where lam is the power-iteration estimate of
    lambda_max(Q); the relative margin (with an absolute floor) keeps sigma
    strictly above the spectrum without collapsing the strong-convexity
    modulus rho.

    Parameters
    ----------
    Q : array_like, shape (n, n)
        Symmetric quadratic term (validated and symmetrized).
    q : array_like, shape (n,)
        Linear term.
    constraints : ConstraintSet
        Feasible region; its dimension must equal n.
    sigma_margin : float, optional
        Relative sigma margin, > 0.

    Returns
    -------
    QuadraticDcProblem
    """
    if not sigma_margin > 0:
        raise ValueError('sigma_margin must be positive')
    Q = as_symmetric_matrix(Q)
    q = np.asarray(q, dtype=float)
    if q.ndim != 1 or q.shape[0] != Q.shape[0]:
        raise ValueError(
            f'q has shape {q.shape}, expected ({Q.shape[0]},)')
    if not np.all(np.isfinite(q)):
        raise ValueError('q entries must be finite')
    est = estimate_lambda_max(Q)
    lam = est.value
    sigma = max(0.0, lam) + max(sigma_margin * abs(lam), sigma_margin)
    rho = min(sigma, sigma - lam)
    return QuadraticDcProblem(
        Q=Q, q=q, constraints=constraints, sigma=sigma, rho=rho,
        lambda_max_estimate=lam)


def phi_value(p, x):
    """Objective phi(x) = 0.5*<Qx, x> + <q, x>."""
    x = np.asarray(x, dtype=float)
    if x.shape != (p.n,):
        raise ValueError(f'x has shape {x.shape}, expected ({p.n},)')
    return 0.5 * float(x @ (p.Q @ x)) + float(p.q @ x)


def grad_g(p, x):
    """Gradient of the convex part, sigma*x + q."""
    x = np.asarray(x, dtype=float)
    if x.shape != (p.n,):
        raise ValueError(f'x has shape {x.shape}, expected ({p.n},)')
    return p.sigma * x + p.q


def grad_h(p, x):
    """Gradient of the concave part, (sigma*I - Q)x."""
    x = np.asarray(x, dtype=float)
    if x.shape != (p.n,):
        raise ValueError(f'x has shape {x.shape}, expected ({p.n},)')
    return p.sigma * x - p.Q @ x
