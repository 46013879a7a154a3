"""KKT verification with multiplier recovery.

A feasible point x is a KKT point of the quadratic program when there are
multipliers mu >= 0, supported on the active constraints, with
Qx + q + sum_i mu_i a_i = 0 and complementary slackness. The recovery
restricts to the numerically active rows (inactive rows are forced to zero,
which makes complementarity hold by construction) and solves the remaining
nonnegative least-squares problem by projected gradient.
"""

from dataclasses import dataclass

import numpy as np

__all__ = ('KktReport', 'kkt_residual', 'attach_kkt')

NNLS_MAX_ITER = 10_000
NNLS_TOL = 1e-12


@dataclass
class KktReport:
    """Residuals of the KKT system at a point, with recovered multipliers.

    ``multipliers`` covers the constraint set's full row enumeration;
    entries off the active set are zero.
    """

    stationarity_residual: float
    complementarity_residual: float
    feasibility_violation: float
    multipliers: np.ndarray


def _nnls_certificate_gap(mu, g, scale, tol):
    """Violation of the NNLS optimality conditions: g >= 0 where mu = 0 and
    g = 0 where mu > 0 (g is the gradient A(r + A.T mu))."""
    on = mu > 0.0
    gap = 0.0
    if np.any(on):
        gap = float(np.max(np.abs(g[on])))
    if np.any(~on):
        gap = max(gap, float(np.max(np.maximum(-g[~on], 0.0))))
    return gap / scale


def _nnls_projected_gradient(A, r, max_iter=NNLS_MAX_ITER, tol=NNLS_TOL):
    """min_{mu >= 0} ||r + A.T mu|| by projected gradient.

    The step is 1/L with L an estimate of ||A A.T||_2 from a short power
    iteration (deterministic start). Plain projected gradient identifies the
    active support quickly but can crawl toward the exact values on
    ill-conditioned rows, so the loop is interleaved with a support polish:
    an unconstrained least-squares solve restricted to the current support,
    accepted when it is sign-feasible and certified optimal.

    Returns (mu, achieved norm).
    """
    m = A.shape[0]
    v = np.ones(m) / np.sqrt(m)
    L = 1.0
    for _ in range(50):
        w = A @ (A.T @ v)
        nw = float(np.linalg.norm(w))
        if nw == 0.0:
            break
        L = float(v @ w)
        v = w / nw
    L = max(L, 1e-30) * 1.2  # safety factor over the Rayleigh estimate

    scale = 1.0 + float(np.linalg.norm(r))

    def polish(mu):
        support = np.flatnonzero(mu > 0.0)
        if support.size == 0:
            return mu
        sol, *_ = np.linalg.lstsq(A[support].T, -r, rcond=None)
        if np.any(sol < 0.0):
            return mu
        candidate = np.zeros(m)
        candidate[support] = sol
        if (np.linalg.norm(r + A.T @ candidate)
                <= np.linalg.norm(r + A.T @ mu)):
            return candidate
        return mu

    mu = np.zeros(m)
    chunk = max(200, max_iter // 10)
    iters = 0
    while iters < max_iter:
        settled = False
        for _ in range(min(chunk, max_iter - iters)):
            iters += 1
            g = A @ (r + A.T @ mu)
            mu_next = np.maximum(mu - g / L, 0.0)
            if float(np.linalg.norm(mu - np.maximum(mu - g, 0.0), np.inf)) <= tol * scale:
                settled = True
                break
            mu = mu_next
        if settled:
            break
        # Stalled: polish on the identified support and accept if certified.
        mu = polish(mu)
        g = A @ (r + A.T @ mu)
        if _nnls_certificate_gap(mu, g, scale, tol) <= 1e-10:
            break
    return mu, float(np.linalg.norm(r + A.T @ mu))


def kkt_residual(p, x, active_tol=None):
    """KKT report for problem `p` at the feasible point `x`.

    Parameters
    ----------
    p : QuadraticDcProblem
    x : array_like
        Point to verify; must be feasible within `active_tol`.
    active_tol : float, optional
        Activity tolerance; defaults to 1e-8 (scaled per row by 1 + |b_i|).

    Returns
    -------
    KktReport
    """
    if active_tol is None:
        active_tol = 1e-8
    c = p.constraints
    x = np.asarray(x, dtype=float)
    if not c.contains(x, active_tol):
        raise ValueError('x is not feasible within active_tol')

    r = p.Q @ x + p.q
    mask = c.active_mask(x, active_tol)
    ids = np.flatnonzero(mask)
    mu_full = np.zeros(c.n_rows)
    if ids.size:
        A_act, _ = c.rows(ids)
        mu, stationarity = _nnls_projected_gradient(A_act, r)
        mu_full[ids] = mu
    else:
        stationarity = float(np.linalg.norm(r))

    resid = c.residuals(x)
    if ids.size:
        complementarity = float(np.max(np.abs(mu_full[ids] * resid[ids])))
    else:
        complementarity = 0.0
    finite = np.isfinite(resid)
    feasibility = float(np.max(np.maximum(-resid[finite], 0.0), initial=0.0))
    return KktReport(stationarity_residual=stationarity,
                     complementarity_residual=complementarity,
                     feasibility_violation=feasibility,
                     multipliers=mu_full)


def attach_kkt(p, result, active_tol=None):
    """Compute the KKT report at result.x_star and store its stationarity
    residual on the result. Returns the report."""
    report = kkt_residual(p, result.x_star, active_tol)
    result.kkt_residual = report.stationarity_residual
    return report
