"""First-order stationarity for problems over the l_p ball.

For ``min f(x)`` subject to ``||x||_p^p <= r`` with ``0 < p < 1`` a point is
first-order optimal if either

* it is interior and ``grad f(x) = 0``, or
* it is on the boundary and there is ``lam >= 0`` with
  ``grad_i f(x) * x_i + lam * p * |x_i|^p = 0`` on the support of `x`.

The product form of the boundary condition is used throughout, so
``|x_i|^(p-1)`` is never evaluated at tiny ``x_i``. The reported residuals
divide each condition by ``max(1, |x_i|)``; this scaling is a convention of
this package, not a standard measure.
"""

import enum
from dataclasses import dataclass

import numpy as np

__all__ = ['ZERO_TOL', 'Position', 'StationarityReport', 'lp_norm_p',
           'support_mask', 'classify_point', 'multiplier_estimate',
           'boundary_kkt_residual', 'interior_kkt_residual',
           'normal_cone_check', 'stationarity_report']

# magnitudes at or below this are treated as exact zeros
ZERO_TOL = 1e-14


class Position(str, enum.Enum):
    BOUNDARY = 'Boundary'
    INTERIOR = 'Interior'


@dataclass(frozen=True)
class StationarityReport:
    case: Position
    lam: float
    residual: float
    feasibility_gap: float


def lp_norm_p(x, p):
    """``sum_i |x_i|^p`` for ``0 < p < 1`` (the p-th power of the quasi-norm)."""
    if not 0 < p < 1:
        raise ValueError(f'p must lie in (0,1), got {p}')
    return float(np.sum(np.abs(np.asarray(x, dtype=float)) ** p))


def support_mask(x):
    return np.abs(x) > ZERO_TOL


def classify_point(x, p, r, boundary_tol):
    """Boundary iff ``|r - ||x||_p^p| <= boundary_tol``.

    Raises ``ValueError`` if `x` lies outside the ball by more than
    `boundary_tol`.
    """
    nrm = lp_norm_p(x, p)
    if nrm > r + boundary_tol:
        raise ValueError(f'infeasible point: ||x||_p^p = {nrm!r} exceeds '
                         f'r = {r!r} by more than {boundary_tol!r}')
    if abs(r - nrm) <= boundary_tol:
        return Position.BOUNDARY
    return Position.INTERIOR


def multiplier_estimate(x_prev, x_next, grad_prev, beta, ball, p):
    """Multiplier of the weighted-ball constraint in one subproblem.

    `x_next` solves ``min <g, x - x_prev> + beta/2 ||x - x_prev||^2`` over
    `ball`. Multiplying the subproblem stationarity condition by ``x_i`` and
    summing over the free coordinates gives

        lam = -sum_i x_i (g_i + beta (x_i - x_prev_i)) / (p sum_i w_i |x_i|)

    Returns 0 when the constraint is inactive or the denominator vanishes.
    """
    x_prev = np.asarray(x_prev, dtype=float)
    x_next = np.asarray(x_next, dtype=float)
    g = np.asarray(grad_prev, dtype=float)
    n = ball.weights.size
    if not x_prev.shape == x_next.shape == g.shape == (n,):
        raise ValueError('dimension mismatch')
    free = ball.free_mask & (x_next != 0)
    xs = x_next[free]
    den = p * np.sum(ball.weights[free] * np.abs(xs))
    if den < 1e-300 or ball.norm(x_next) < ball.radius * (1 - 1e-10):
        return 0.0
    num = -np.sum(xs * (g[free] + beta * (xs - x_prev[free])))
    return max(float(num / den), 0.0)


def boundary_kkt_residual(x, lam, grad, p, r):
    """Max of ``|||x||_p^p - r|`` and the scaled stationarity violations."""
    if lam < 0:
        raise ValueError('lam must be nonnegative')
    x = np.asarray(x, dtype=float)
    g = np.asarray(grad, dtype=float)
    res = abs(lp_norm_p(x, p) - r)
    s = support_mask(x)
    if s.any():
        xs = x[s]
        viol = np.abs(g[s] * xs + lam * p * np.abs(xs) ** p)
        res = max(res, float(np.max(viol / np.maximum(1.0, np.abs(xs)))))
    return res


def interior_kkt_residual(x, grad, p, r):
    """``||grad||_inf`` at an interior point."""
    if lp_norm_p(x, p) >= r:
        raise ValueError('x is not in the interior of the ball')
    return float(np.max(np.abs(grad), initial=0.0))


def normal_cone_check(x_bar, eta, p, r, tol, boundary_tol=1e-8):
    """Test whether `eta` lies in the Frechet normal cone of the ball at `x_bar`.

    At interior points the cone is ``{0}``. At boundary points it consists of
    vectors equal to ``mu * p |x_i|^(p-1) sgn(x_i)`` on the support for some
    ``mu >= 0`` and arbitrary off the support. The best ``mu`` is fitted in
    least squares and the fit accepted if the max deviation is at most `tol`.
    """
    x_bar = np.asarray(x_bar, dtype=float)
    eta = np.asarray(eta, dtype=float)
    if eta.shape != x_bar.shape:
        raise ValueError('dimension mismatch')
    if classify_point(x_bar, p, r, boundary_tol) is Position.INTERIOR:
        return bool(np.max(np.abs(eta), initial=0.0) <= tol)
    s = support_mask(x_bar)
    if not s.any():
        return True
    b = p * np.abs(x_bar[s]) ** (p - 1) * np.sign(x_bar[s])
    mu = max(float(eta[s] @ b / (b @ b)), 0.0)
    return bool(np.max(np.abs(eta[s] - mu * b)) <= tol)


def stationarity_report(x, obj, p, r, boundary_tol=1e-8, relaxed=False):
    """Measure how far `x` is from first-order optimality.

    By default the optimality system is chosen by :func:`classify_point`:
    boundary points get the boundary residual with the multiplier fitted by
    nonnegative least squares over the scaled stationarity conditions,
    interior points get ``||grad||_inf`` and ``lam = 0``.

    With `relaxed`, an interior point is also scored against the boundary
    system and the smaller residual is reported. The boundary residual
    contains ``|r - ||x||_p^p|``, so this certifies points a little inside
    the ball whose gradient is aligned with the boundary normal, which is
    where iterations stopped by a displacement test usually end.

    Raises ``ValueError`` if `x` is infeasible by more than `boundary_tol`.
    """
    x = np.asarray(x, dtype=float)
    case = classify_point(x, p, r, boundary_tol)
    g = obj.gradient(x)
    gap = lp_norm_p(x, p) - r
    if case is Position.INTERIOR:
        res_i = interior_kkt_residual(x, g, p, r)
        if not relaxed:
            return StationarityReport(case, 0.0, res_i, gap)
    s = support_mask(x)
    lam = 0.0
    if s.any():
        xs = x[s]
        scale = np.maximum(1.0, np.abs(xs))
        a = g[s] * xs / scale
        b = p * np.abs(xs) ** p / scale
        lam = max(float(-(a @ b) / (b @ b)), 0.0)
    res_b = boundary_kkt_residual(x, lam, g, p, r)
    if case is Position.INTERIOR and res_i <= res_b:
        return StationarityReport(case, 0.0, res_i, gap)
    return StationarityReport(Position.BOUNDARY, lam, res_b, gap)
