"""Polyhedral feasible sets: membership, projection, activity, step bounds.

Every set is an intersection of halfspaces <a_i, x> <= b_i with a canonical
row enumeration, so activity tests, feasible-direction checks and the ratio
test for the largest feasible step share one vectorized implementation. The
Euclidean projection, which is the DC subproblem solver for quadratic
objectives, is specialized per representation:

* Box / NonnegOrthant: componentwise clamp;
* Simplex {x >= 0, sum(x) <= r}: clamp, then exact sort-and-threshold
  projection onto the sum face when the clamp oversteps the budget;
* Halfspaces: Dykstra's cyclic projection scheme.

Row enumeration: Box uses rows 0..n-1 for lower bounds (-x_i <= -l_i) and
n..2n-1 for upper bounds (x_i <= u_i); NonnegOrthant uses 0..n-1 for
-x_i <= 0; Simplex appends the budget row sum(x) <= r as row n; Halfspaces
uses its matrix rows in order. Infinite box bounds keep their row index but
can never be active and never bound a step.
"""

import numpy as np

__all__ = (
    'ProjectionError',
    'ConstraintSet',
    'Box',
    'NonnegOrthant',
    'Simplex',
    'Halfspaces',
    'is_feasible_direction',
)

DYKSTRA_MAX_CYCLES = 10_000
DYKSTRA_DISPLACEMENT_TOL = 1e-12


class ProjectionError(RuntimeError):
    """Cyclic projection failed to settle; carries the best iterate found."""

    def __init__(self, message, iterate, displacement):
        super().__init__(message)
        self.iterate = iterate
        self.displacement = displacement


class ConstraintSet:
    """Base class; subclasses fill in the row data and the projection."""

    n = None  # ambient dimension

    # -- canonical halfspace rows -----------------------------------------

    @property
    def n_rows(self):
        raise NotImplementedError

    def residuals(self, x):
        """Slack vector b - Ax over all rows (+inf on unbounded rows)."""
        raise NotImplementedError

    def row_dots(self, d):
        """Directional products A @ d over all rows."""
        raise NotImplementedError

    def rhs(self):
        """Right-hand sides b over all rows (+-inf on unbounded rows)."""
        raise NotImplementedError

    def rows(self, ids):
        """Dense rows (A[ids], b[ids]) of the canonical enumeration."""
        raise NotImplementedError

    def project(self, z):
        """Euclidean projection of z onto the set."""
        raise NotImplementedError

    # -- shared logic ------------------------------------------------------

    def _check_dim(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ValueError(f'point has shape {x.shape}, expected ({self.n},)')
        return x

    def contains(self, x, tol=0.0):
        """True iff every constraint holds within additive slack `tol`."""
        x = self._check_dim(x)
        return bool(np.all(self.residuals(x) >= -tol))

    def active_mask(self, x, active_tol):
        """Boolean row mask of constraints active at x.

        A row counts as active when |<a_i, x> - b_i| <= active_tol*(1+|b_i|);
        the scaling absorbs rounding proportional to the bound size.
        """
        x = self._check_dim(x)
        if not self.contains(x, active_tol):
            raise ValueError('point is not feasible within active_tol')
        resid = self.residuals(x)
        scale = 1.0 + np.abs(self.rhs())
        # inf - inf on unbounded rows would poison the comparison; they are
        # never active, so compare only finite slacks.
        out = np.zeros(self.n_rows, dtype=bool)
        finite = np.isfinite(resid)
        out[finite] = np.abs(resid[finite]) <= active_tol * scale[finite]
        return out

    def active_indices(self, x, active_tol):
        """Sorted tuple of row indices active at x."""
        return tuple(int(i) for i in np.flatnonzero(self.active_mask(x, active_tol)))

    def max_feasible_step(self, y, d):
        """sup{lam >= 0 : y + lam*d stays feasible}, possibly +inf.

        Ratio test over the halfspace rows with <a_i, d> > 0. Slacks are
        floored at zero so that a boundary point grazed by rounding yields 0
        instead of a spurious negative step.
        """
        y = self._check_dim(y)
        d = self._check_dim(d)
        ad = self.row_dots(d)
        blocking = ad > 0.0
        if not np.any(blocking):
            return np.inf
        slack = np.maximum(self.residuals(y)[blocking], 0.0)
        return float(np.min(slack / ad[blocking]))


class Box(ConstraintSet):
    """Axis-aligned box l <= x <= u; entries of l/u may be -inf/+inf."""

    def __init__(self, lower, upper):
        lower = np.asarray(lower, dtype=float)
        upper = np.asarray(upper, dtype=float)
        if lower.ndim != 1 or lower.shape != upper.shape:
            raise ValueError('lower and upper must be 1-d with equal shapes')
        if np.any(np.isnan(lower)) or np.any(np.isnan(upper)):
            raise ValueError('bounds must not contain NaN')
        if np.any(lower > upper):
            raise ValueError('box requires lower <= upper componentwise')
        self.lower = lower
        self.upper = upper
        self.n = lower.shape[0]

    @classmethod
    def symmetric(cls, n, radius):
        """The sup-norm ball [-radius, radius]^n."""
        if not radius > 0:
            raise ValueError('radius must be positive')
        r = float(radius)
        return cls(np.full(n, -r), np.full(n, r))

    @property
    def n_rows(self):
        return 2 * self.n

    def residuals(self, x):
        return np.concatenate([x - self.lower, self.upper - x])

    def row_dots(self, d):
        return np.concatenate([-d, d])

    def rhs(self):
        return np.concatenate([-self.lower, self.upper])

    def rows(self, ids):
        ids = np.asarray(ids, dtype=int)
        a = np.zeros((ids.size, self.n))
        b = np.empty(ids.size)
        for k, i in enumerate(ids):
            if i < self.n:
                a[k, i] = -1.0
                b[k] = -self.lower[i]
            else:
                a[k, i - self.n] = 1.0
                b[k] = self.upper[i - self.n]
        return a, b

    def project(self, z):
        z = self._check_dim(z)
        return np.clip(z, self.lower, self.upper)


class NonnegOrthant(ConstraintSet):
    """The nonnegative orthant x >= 0."""

    def __init__(self, n):
        if n < 1:
            raise ValueError('dimension must be >= 1')
        self.n = int(n)

    @property
    def n_rows(self):
        return self.n

    def residuals(self, x):
        return x.copy()

    def row_dots(self, d):
        return -d

    def rhs(self):
        return np.zeros(self.n)

    def rows(self, ids):
        ids = np.asarray(ids, dtype=int)
        a = np.zeros((ids.size, self.n))
        a[np.arange(ids.size), ids] = -1.0
        return a, np.zeros(ids.size)

    def project(self, z):
        z = self._check_dim(z)
        return np.maximum(z, 0.0)


class Simplex(ConstraintSet):
    """The scaled simplex {x >= 0, sum(x) <= r}."""

    def __init__(self, n, radius):
        if n < 1:
            raise ValueError('dimension must be >= 1')
        if not radius > 0:
            raise ValueError('radius must be positive')
        self.n = int(n)
        self.radius = float(radius)

    @property
    def n_rows(self):
        return self.n + 1

    def residuals(self, x):
        return np.concatenate([x, [self.radius - float(np.sum(x))]])

    def row_dots(self, d):
        return np.concatenate([-d, [float(np.sum(d))]])

    def rhs(self):
        return np.concatenate([np.zeros(self.n), [self.radius]])

    def rows(self, ids):
        ids = np.asarray(ids, dtype=int)
        a = np.zeros((ids.size, self.n))
        b = np.empty(ids.size)
        for k, i in enumerate(ids):
            if i < self.n:
                a[k, i] = -1.0
                b[k] = 0.0
            else:
                a[k, :] = 1.0
                b[k] = self.radius
        return a, b

    def project(self, z):
        z = self._check_dim(z)
        clamped = np.maximum(z, 0.0)
        if float(np.sum(clamped)) <= self.radius:
            return clamped
        # Budget is tight at the optimum: project onto {x >= 0, sum = r} by
        # the sorted cumulative-sum threshold rule.
        u = np.sort(z)[::-1]
        css = np.cumsum(u) - self.radius
        ks = np.arange(1, self.n + 1)
        supported = u - css / ks > 0.0
        k = int(np.nonzero(supported)[0][-1]) + 1
        theta = css[k - 1] / k
        return np.maximum(z - theta, 0.0)


class Halfspaces(ConstraintSet):
    """A general intersection of halfspaces A x <= b.

    Projection uses Dykstra's alternating scheme over the individual
    halfspaces; nonemptiness is only discovered lazily, by the first call
    that fails to settle within the cycle cap.
    """

    def __init__(self, A, b):
        A = np.asarray(A, dtype=float)
        b = np.asarray(b, dtype=float)
        if A.ndim != 2:
            raise ValueError('A must be a p x n matrix')
        if b.shape != (A.shape[0],):
            raise ValueError('b must have one entry per row of A')
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise ValueError('halfspace data must be finite')
        row_norms = np.linalg.norm(A, axis=1)
        if np.any(row_norms == 0.0):
            raise ValueError('every halfspace row must be nonzero')
        self.A = A
        self.b = b
        self.n = A.shape[1]
        self._row_norm_sq = row_norms ** 2

    @property
    def n_rows(self):
        return self.A.shape[0]

    def residuals(self, x):
        return self.b - self.A @ x

    def row_dots(self, d):
        return self.A @ d

    def rhs(self):
        return self.b.copy()

    def rows(self, ids):
        ids = np.asarray(ids, dtype=int)
        return self.A[ids].copy(), self.b[ids].copy()

    def project(self, z):
        z = self._check_dim(z)
        p = self.n_rows
        x = z.copy()
        corrections = np.zeros((p, self.n))
        displacement = np.inf
        for _ in range(DYKSTRA_MAX_CYCLES):
            # Largest single-projection move in the cycle; for an empty
            # intersection these moves never die out (the cycle-end point
            # can repeat exactly, so it would be a misleading test).
            displacement = 0.0
            for i in range(p):
                w = x + corrections[i]
                viol = float(self.A[i] @ w) - self.b[i]
                if viol > 0.0:
                    y = w - (viol / self._row_norm_sq[i]) * self.A[i]
                else:
                    y = w
                corrections[i] = w - y
                displacement = max(displacement, float(np.linalg.norm(y - x)))
                x = y
            if displacement <= DYKSTRA_DISPLACEMENT_TOL:
                worst = float(np.min(self.residuals(x) / (1.0 + np.abs(self.b))))
                if worst < -1e-8:
                    raise ProjectionError(
                        'cyclic projection settled on an infeasible point '
                        f'(scaled violation {-worst:.3e}); the set looks empty',
                        iterate=x, displacement=displacement)
                return x
        raise ProjectionError(
            f'cyclic projection did not settle within {DYKSTRA_MAX_CYCLES} cycles '
            f'(last cycle moved {displacement:.3e}); the set may be empty or ill posed',
            iterate=x, displacement=displacement)


def is_feasible_direction(c, x_k, y_k, active_tol):
    """Whether d = y_k - x_k is a feasible direction at y_k.

    For affine constraints this reduces to the active-set inclusion
    I(y_k) subset-of I(x_k); both points must be feasible.
    """
    mask_x = c.active_mask(x_k, active_tol)
    mask_y = c.active_mask(y_k, active_tol)
    return bool(np.all(mask_x[mask_y]))
