"""Euclidean projections onto weighted l1 balls, l1 balls and l0 balls.

The weighted ball is

    B(w, R, Z) = {x : sum_i w_i |x_i| <= R,  x_i = 0 for i in Z}

and its projection has the soft-thresholding form

    x_i = sgn(v_i) * max(|v_i| - theta * w_i, 0)

where ``theta >= 0`` is the root of a piecewise-linear decreasing function.
:func:`project_weighted_l1` finds that root exactly by sorting breakpoints;
:func:`bisection_oracle_project` finds it by bisection and is only meant for
verification.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = ['WeightedL1Ball', 'project_weighted_l1', 'project_l1',
           'hard_threshold', 'bisection_oracle_project', 'guard_pinned',
           'PIN_RATIO']

# free weights at least this many times the smallest free weight are pinned;
# beyond it the squared normalized weights overflow
PIN_RATIO = 1e150


@dataclass(frozen=True)
class WeightedL1Ball:
    """Weighted l1 ball with a set of coordinates forced to zero.

    Parameters
    ----------
    weights : array_like, shape (n,)
        Positive weights. Entries indexed by `fixed_zero` are ignored and may
        hold anything (including ``inf``).
    radius : float
        Ball radius, strictly positive.
    fixed_zero : array_like of int, optional
        Indices whose coordinates must be exactly zero.
    """

    weights: np.ndarray
    radius: float
    fixed_zero: np.ndarray = field(default_factory=lambda: np.zeros(0, int))

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).ravel()
        fz = np.unique(np.asarray(self.fixed_zero, dtype=int).ravel())
        if not np.isfinite(self.radius) or self.radius <= 0:
            raise ValueError(f'radius must be positive, got {self.radius}')
        if fz.size and (fz[0] < 0 or fz[-1] >= w.size):
            raise ValueError('fixed_zero indices out of range')
        free = np.ones(w.size, bool)
        free[fz] = False
        wf = w[free]
        if np.any(np.isnan(wf)) or np.any(wf <= 0):
            raise ValueError('weights must be positive outside fixed_zero')
        object.__setattr__(self, 'weights', w)
        object.__setattr__(self, 'radius', float(self.radius))
        object.__setattr__(self, 'fixed_zero', fz)

    @property
    def free_mask(self):
        mask = np.ones(self.weights.size, bool)
        mask[self.fixed_zero] = False
        return mask

    def norm(self, x):
        """Weighted l1 norm over the free coordinates."""
        m = self.free_mask
        return float(np.sum(self.weights[m] * np.abs(np.asarray(x)[m])))


def _check(v, ball):
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size != ball.weights.size:
        raise ValueError(f'dimension mismatch: v has shape {v.shape}, '
                         f'weights have {ball.weights.size} entries')
    return v


def guard_pinned(ball):
    """Free coordinates the overflow guard forces to zero."""
    free = ball.free_mask
    if not free.any():
        return free
    w = ball.weights
    return free & ~(w < PIN_RATIO * w[free].min())


def _threshold(a, w, radius):
    """Exact root of sum_i w_i max(a_i - theta w_i, 0) = radius.

    `a` are magnitudes, `w` positive weights, and ``sum(w * a) > radius`` is
    assumed.
    """
    t = a / w
    order = np.argsort(-t, kind='stable')
    t = t[order]
    s1 = np.cumsum(w[order] * a[order])
    s2 = np.cumsum(w[order] ** 2)
    theta = (s1 - radius) / s2
    # number of active coordinates: last k with t_k > theta_k
    k = np.flatnonzero(t > theta)[-1]
    return max(theta[k], 0.0)


def project_weighted_l1(v, ball):
    """Project `v` onto a :class:`WeightedL1Ball`.

    Coordinates in ``ball.fixed_zero`` are zeroed; so are free coordinates
    whose weight is at least ``PIN_RATIO`` times the smallest free weight,
    which keeps the squared weights finite. The threshold is
    found exactly in O(n log n) by sorting ``|v_i| / w_i``.

    Parameters
    ----------
    v : array_like, shape (n,)
    ball : WeightedL1Ball

    Returns
    -------
    x : ndarray, shape (n,)
        ``argmin ||x - v||_2`` over the ball.
    """
    v = _check(v, ball)
    keep = ball.free_mask & ~guard_pinned(ball)
    x = np.where(keep, v, 0.0)
    if not np.any(x):
        return x
    # the ball is unchanged by rescaling weights and radius together
    wmin = ball.weights[keep].min()
    w = ball.weights[keep] / wmin
    a = np.abs(x[keep])
    R = ball.radius / wmin
    if np.sum(w * a) <= R:
        return x

    theta = _threshold(a, w, R)
    xa = np.maximum(a - theta * w, 0.0)
    # cancellation in (s1 - R) can leave the result slightly outside
    for _ in range(3):
        excess = np.sum(w * xa) - R
        if excess <= 0:
            break
        act = xa > 0
        theta += excess / np.sum(w[act] ** 2)
        xa = np.maximum(a - theta * w, 0.0)
    s = np.sum(w * xa)
    if s > R:
        xa *= R / s
    x[keep] = np.sign(x[keep]) * xa
    return x


def project_l1(v, radius):
    """Project `v` onto the l1 ball ``{x : ||x||_1 <= radius}``."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise ValueError('v must be one-dimensional')
    return project_weighted_l1(v, WeightedL1Ball(np.ones(v.size), radius))


def hard_threshold(v, k):
    """Keep the `k` largest-magnitude entries of `v` and zero the rest.

    Ties are broken in favour of the lowest index.
    """
    v = np.asarray(v, dtype=float)
    if not 1 <= k <= v.size:
        raise ValueError(f'k must lie in [1, {v.size}], got {k}')
    keep = np.argsort(-np.abs(v), kind='stable')[:k]
    out = np.zeros_like(v)
    out[keep] = v[keep]
    return out


def bisection_oracle_project(v, ball, tol=1e-12):
    """Weighted l1-ball projection by bisection on the threshold.

    Slow reference implementation for tests. Bisection stops once
    ``|g(theta)| <= tol * R`` with ``g(theta) = sum_i w_i max(|v_i| -
    theta w_i, 0) - R``, or when the bracket collapses to machine precision.
    No overflow guard is applied.
    """
    if tol <= 0:
        raise ValueError('tol must be positive')
    v = _check(v, ball)
    free = ball.free_mask
    x = np.where(free, v, 0.0)
    w = np.where(free, ball.weights, 1.0)
    a = np.abs(x)
    R = ball.radius

    def g(theta):
        return np.sum(w * np.maximum(a - theta * w, 0.0)) - R

    if g(0.0) <= 0:
        return x
    lo, hi = 0.0, float(np.max(a / w))
    while True:
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if abs(gm) <= tol * R or mid in (lo, hi):
            break
        if gm > 0:
            lo = mid
        else:
            hi = mid
    return np.sign(x) * np.maximum(a - mid * w, 0.0)
