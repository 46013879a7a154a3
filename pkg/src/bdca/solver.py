"""DCA and BDCA iteration drivers for quadratic DC programs.

Both algorithms repeat the projected-gradient-type subproblem step

    y_k = P_F(x_k - (Q x_k + q)/sigma),

which is the exact minimizer of the convexified subproblem at x_k. DCA takes
x_{k+1} = y_k. BDCA additionally checks whether d_k = y_k - x_k is a feasible
direction at y_k (active-set inclusion test) and, if so, extrapolates past
y_k with a backtracking line search on

    phi(y_k + lam*d_k) <= phi(y_k) - alpha*lam^2*||d_k||^2,

with a self-adaptive trial step: after two consecutive unreduced
acceptances the last accepted positive step is scaled by gamma.

The two drivers share one code path so that BDCA with a zero trial step
reproduces DCA exactly, iterate for iterate.
"""

import math
import time
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .constraints import is_feasible_direction
from .model import SolverConfig

__all__ = (
    'SolveStatus',
    'IterationRecord',
    'StepSizeState',
    'SolveResult',
    'dca_step',
    'line_search',
    'adaptive_trial_step',
    'run_bdca',
    'run_dca',
)


class SolveStatus(Enum):
    DTOL_REACHED = 'dtol_reached'
    OBJECTIVE_STOP_REACHED = 'objective_stop_reached'
    MAX_ITER_REACHED = 'max_iter_reached'
    STATIONARY_EXACT = 'stationary_exact'


@dataclass(slots=True)
class IterationRecord:
    """One solver iteration; `elapsed` is cumulative wall-clock seconds."""

    k: int
    phi_x: float
    phi_y: float
    d_norm: float
    lambda_k: float
    trial_lambda: float
    backtracks: int
    direction_feasible: bool
    elapsed: float


@dataclass(slots=True)
class StepSizeState:
    """Bookkeeping for the self-adaptive trial step size."""

    last_accepted_positive: float
    consecutive_unbacktracked: int = 0
    ever_searched: bool = False


@dataclass
class SolveResult:
    x_star: np.ndarray
    phi_star: float
    status: SolveStatus
    iterations: list
    kkt_residual: float | None
    u_final: np.ndarray

    @property
    def n_iterations(self):
        return len(self.iterations)


def dca_step(p, x_k):
    """One convex subproblem solve: project x_k - (Q x_k + q)/sigma onto F."""
    x = np.asarray(x_k, dtype=float)
    if x.shape != (p.n,):
        raise ValueError(f'x_k has shape {x.shape}, expected ({p.n},)')
    Qx = p.Q @ x
    return p.constraints.project(x - (Qx + p.q) / p.sigma)


def _armijo_backtrack(c1, c2, dn2, lam0, alpha, beta, max_backtracks):
    """Backtrack on the exact quadratic decrease.

    For a quadratic objective, phi(y + lam*d) - phi(y) = lam*c1 +
    0.5*lam^2*c2 with c1 = <grad phi(y), d> and c2 = <Qd, d>; comparing the
    decrease directly avoids cancellation against a large |phi(y)|.
    """
    if lam0 <= 0.0:
        return 0.0, 0
    lam = lam0
    for bt in range(max_backtracks + 1):
        if lam * c1 + 0.5 * lam * lam * c2 <= -alpha * lam * lam * dn2:
            return lam, bt
        lam *= beta
    return 0.0, max_backtracks


def line_search(p, y_k, d_k, lambda_init, cfg):
    """Armijo backtracking along d_k starting from y_k.

    Parameters
    ----------
    p : QuadraticDcProblem
    y_k : array_like
        Feasible base point.
    d_k : array_like
        Nonzero search direction; the caller must have capped
        ``lambda_init`` so that y_k + lambda_init*d_k is feasible.
    lambda_init : float
        First trial step, >= 0.
    cfg : SolverConfig

    Returns
    -------
    (float, int)
        Accepted step (0 when `lambda_init` is 0 or the reduction budget is
        exhausted) and the number of reductions performed.
    """
    y = np.asarray(y_k, dtype=float)
    d = np.asarray(d_k, dtype=float)
    if y.shape != (p.n,) or d.shape != (p.n,):
        raise ValueError('y_k and d_k must have the problem dimension')
    dn2 = float(d @ d)
    if dn2 == 0.0:
        raise ValueError('d_k must be nonzero')
    if not math.isfinite(lambda_init) or lambda_init < 0:
        raise ValueError('lambda_init must be finite and nonnegative')
    c1 = float((p.Q @ y + p.q) @ d)
    c2 = float(d @ (p.Q @ d))
    return _armijo_backtrack(c1, c2, dn2, lambda_init, cfg.alpha,
                             cfg.beta, cfg.max_backtracks)


def adaptive_trial_step(state, cfg):
    """Trial step for the next boosting line search.

    Until the first search the initial value lambda_bar_0 is used. After at
    least two consecutive trials were accepted without any reduction, the
    last accepted positive step is scaled by gamma; otherwise that step is
    reused as-is.
    """
    if not state.ever_searched:
        return cfg.lambda_bar_0
    if state.consecutive_unbacktracked >= 2:
        return cfg.gamma * state.last_accepted_positive
    return state.last_accepted_positive


def _drive(p, x_0, cfg, boosted, callback=None):
    x = np.asarray(x_0, dtype=float).copy()
    if x.shape != (p.n,):
        raise ValueError(f'x_0 has shape {x.shape}, expected ({p.n},)')
    c = p.constraints
    if not c.contains(x, cfg.active_tol):
        raise ValueError('x_0 is not feasible')

    Q, q, sigma = p.Q, p.q, p.sigma
    t0 = time.perf_counter()
    trace = []
    state = StepSizeState(last_accepted_positive=cfg.lambda_bar_0)

    Qx = Q @ x
    phi_x = 0.5 * float(x @ Qx) + float(q @ x)
    # Linearization point of the most recent subproblem, for u_final.
    sub_x, sub_Qx = x, Qx

    if cfg.objective_stop is not None and phi_x < cfg.objective_stop:
        return SolveResult(x_star=x, phi_star=phi_x,
                           status=SolveStatus.OBJECTIVE_STOP_REACHED,
                           iterations=trace, kkt_residual=None,
                           u_final=sigma * x - Qx)

    status = SolveStatus.MAX_ITER_REACHED
    for k in range(cfg.max_iter):
        sub_x, sub_Qx = x, Qx
        y = c.project(x - (Qx + q) / sigma)
        d = y - x
        dn = math.sqrt(float(d @ d))

        if dn == 0.0:
            trace.append(IterationRecord(k, phi_x, phi_x, 0.0, 0.0, 0.0, 0,
                                         False, time.perf_counter() - t0))
            if callback is not None:
                callback(k, x, y, d, 0.0)
            status = SolveStatus.STATIONARY_EXACT
            break

        if dn <= cfg.d_tol:
            Qy = Q @ y
            phi_y = 0.5 * float(y @ Qy) + float(q @ y)
            trace.append(IterationRecord(k, phi_x, phi_y, dn, 0.0, 0.0, 0,
                                         False, time.perf_counter() - t0))
            if callback is not None:
                callback(k, x, y, d, 0.0)
            x, phi_x = y, phi_y
            status = SolveStatus.DTOL_REACHED
            break

        lam = 0.0
        backtracks = 0
        trial = 0.0
        feasible_dir = False
        Qd = None
        if boosted:
            feasible_dir = is_feasible_direction(c, x, y, cfg.active_tol)
            if feasible_dir:
                trial = adaptive_trial_step(state, cfg)
                cap = c.max_feasible_step(y, d)
                lam_start = trial if trial <= cap else cap
                if lam_start > 0.0:
                    Qd = Q @ d
                    c1 = float((Qx + Qd + q) @ d)
                    c2 = float(d @ Qd)
                    lam, backtracks = _armijo_backtrack(
                        c1, c2, dn * dn, lam_start, cfg.alpha, cfg.beta,
                        cfg.max_backtracks)
                    state.ever_searched = True
                if lam > 0.0:
                    state.last_accepted_positive = lam
                    if backtracks == 0 and trial <= cap:
                        state.consecutive_unbacktracked += 1
                    else:
                        state.consecutive_unbacktracked = 0
                else:
                    state.consecutive_unbacktracked = 0

        if lam > 0.0:
            # One matvec per boosted iteration: Q(y + lam*d) = Qx + (1+lam)Qd
            # exactly, and the fresh rounding it adds is not amplified later
            # (any zero-step iteration recomputes Qx from scratch).
            x_next = y + lam * d
            Qx_next = Qx + (1.0 + lam) * Qd
            phi_y = 0.5 * float(y @ (Qx + Qd)) + float(q @ y)
            phi_next = 0.5 * float(x_next @ Qx_next) + float(q @ x_next)
        else:
            Qy = Q @ y
            phi_y = 0.5 * float(y @ Qy) + float(q @ y)
            x_next, Qx_next, phi_next = y, Qy, phi_y

        trace.append(IterationRecord(k, phi_x, phi_y, dn, lam, trial,
                                     backtracks, feasible_dir,
                                     time.perf_counter() - t0))
        if callback is not None:
            callback(k, x, y, d, lam)

        x, Qx, phi_x = x_next, Qx_next, phi_next
        if cfg.objective_stop is not None and phi_x < cfg.objective_stop:
            status = SolveStatus.OBJECTIVE_STOP_REACHED
            break

    return SolveResult(x_star=x, phi_star=phi_x, status=status,
                       iterations=trace, kkt_residual=None,
                       u_final=sigma * sub_x - sub_Qx)


def run_bdca(p, x_0, cfg=None, callback=None):
    """Run BDCA from the feasible point x_0.

    Parameters
    ----------
    p : QuadraticDcProblem
    x_0 : array_like
        Feasible starting point (checked against cfg.active_tol).
    cfg : SolverConfig, optional
    callback : callable, optional
        Called as ``callback(k, x_k, y_k, d_k, lambda_k)`` once per
        iteration, after the step is decided.

    Returns
    -------
    SolveResult
    """
    return _drive(p, x_0, cfg if cfg is not None else SolverConfig(),
                  boosted=True, callback=callback)


def run_dca(p, x_0, cfg=None, callback=None):
    """Run classical DCA (x_{k+1} = y_k, no boosting step)."""
    return _drive(p, x_0, cfg if cfg is not None else SolverConfig(),
                  boosted=False, callback=callback)
