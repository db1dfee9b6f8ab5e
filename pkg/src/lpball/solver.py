"""Iteratively reweighted l1-ball method (IR1B) and projected-gradient baselines.

IR1B minimizes a smooth ``f`` over ``{x : sum_i |x_i|^p <= r}``, ``0 < p < 1``.
Each iteration takes a gradient step ``x - grad f(x) / beta`` and projects it
onto a weighted l1 ball that under-approximates the l_p ball around the
current iterate:

* boundary iterate: weights ``|x_i|^(p-1)`` on the support, radius ``r``,
  zero coordinates stay zero;
* interior iterate: the same weights on the support, weight
  ``eps^(p-1)`` on zero coordinates, radius ``r_k``, where ``eps`` and
  ``r_k`` are driven by the constraint residual.

The baselines IHT (hard thresholding onto ``||x||_0 <= k``) and GPM
(projection onto ``||x||_1 <= R``) share the same stopping rule.
"""

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .optimality import (Position, classify_point, lp_norm_p,
                         multiplier_estimate)
from .projection import (WeightedL1Ball, guard_pinned, hard_threshold,
                         project_l1, project_weighted_l1)

__all__ = ['SolverConfig', 'SolveReport', 'IterRecord', 'Status', 'Branch',
           'Subproblem', 'lp_norm_p', 'classify_iterate', 'epsilon_k',
           'radius_k', 'build_subproblem', 'ir1b_solve', 'iht_solve',
           'gpm_solve', 'default_init_recovery']


class Status(str, enum.Enum):
    CONVERGED = 'Converged'
    MAX_ITER = 'MaxIterReached'


class Branch(str, enum.Enum):
    P1 = 'P1'  # boundary subproblem
    P2 = 'P2'  # interior subproblem


@dataclass(frozen=True)
class SolverConfig:
    """IR1B parameters. Defaults follow the sparse-recovery experiments."""

    p: float = 0.5
    r: float = 1.0
    c: float = 0.95
    beta_factor: float = 1.1
    tol: float = 1e-5
    boundary_tol: float = 1e-8
    max_iter: int = 100_000
    seed: int = 0

    def __post_init__(self):
        checks = [
            ('p', 0 < self.p < 1, 'p must lie in (0,1)'),
            ('r', self.r > 0, 'r must be positive'),
            ('c', 0 < self.c < 1, 'c must lie in (0,1)'),
            ('beta_factor', self.beta_factor > 1,
             'beta_factor must be greater than 1'),
            ('tol', self.tol > 0, 'tol must be positive'),
            ('boundary_tol', self.boundary_tol > 0,
             'boundary_tol must be positive'),
            ('max_iter', self.max_iter >= 1, 'max_iter must be at least 1'),
        ]
        for key, ok, msg in checks:
            value = getattr(self, key)
            if not ok or (isinstance(value, float) and math.isnan(value)):
                raise ValueError(f'{msg} (got {key} = {value!r})')


@dataclass
class IterRecord:
    """One step ``x_k -> x_{k+1}``.

    `objective` and `lp_norm` refer to ``x_{k+1}``; `branch`, `epsilon` and
    `multiplier` to the subproblem built at ``x_k``. `model_decrease` is
    ``phi(x_k; x_k) - phi(x_{k+1}; x_k)``.
    """

    objective: float
    displacement: float
    lp_norm: float
    branch: Optional[Branch] = None
    epsilon: Optional[float] = None
    multiplier: float = 0.0
    model_decrease: float = 0.0
    pinned: int = 0


@dataclass
class SolveReport:
    x_final: np.ndarray
    lambda_final: float
    status: Status
    initial_objective: float
    beta: float
    trace: list = field(default_factory=list)

    @property
    def iterations(self):
        return len(self.trace)

    @property
    def objective(self):
        return self.trace[-1].objective if self.trace else \
            self.initial_objective

    def objectives(self):
        """``f(x_0), f(x_1), ...`` as an array."""
        return np.array([self.initial_objective] +
                        [t.objective for t in self.trace])


class Subproblem(NamedTuple):
    ball: WeightedL1Ball
    step_point: np.ndarray
    branch: Branch
    epsilon: Optional[float]


def classify_iterate(x, cfg):
    return classify_point(x, cfg.p, cfg.r, cfg.boundary_tol)


def epsilon_k(x, cfg):
    """``c * ((r - ||x||_p^p) / (|A(x)| + 1))^(1/p)``, ``A`` the zero set."""
    res = cfg.r - lp_norm_p(x, cfg.p)
    if res < -cfg.boundary_tol:
        raise ValueError(f'negative constraint residual {res!r}')
    n_zero = int(np.count_nonzero((x == 0)))
    return cfg.c * (max(res, 0.0) / (n_zero + 1)) ** (1 / cfg.p)


def radius_k(x, eps, cfg):
    """Radius of the interior subproblem ball.

    ``(r + (p - 1) ||x||_p^p - |A(x)| eps^p) / p``, which exceeds
    ``(1 - c^p) / p * (r - ||x||_p^p)`` whenever `eps` comes from
    :func:`epsilon_k`.
    """
    p = cfg.p
    nrm = lp_norm_p(x, p)
    n_zero = int(np.count_nonzero((x == 0)))
    rk = (cfg.r + (p - 1) * nrm - n_zero * eps ** p) / p
    if not rk > 0:
        raise ValueError(f'nonpositive subproblem radius {rk!r}')
    return rk


def build_subproblem(x_k, grad, cfg, beta):
    """Weighted l1 ball and gradient-step point for the iterate `x_k`.

    Minimizing the quadratic model ``<grad, x - x_k> + beta/2 ||x - x_k||^2``
    over the ball is the same as projecting ``x_k - grad / beta`` onto it.
    """
    x_k = np.asarray(x_k, dtype=float)
    p = cfg.p
    # exact zeros only: tiny entries must stay in the support or the
    # interior iterates stall short of the boundary for small p
    s = x_k != 0
    step = x_k - np.asarray(grad, dtype=float) / beta
    w = np.full(x_k.size, np.inf)
    w[s] = np.abs(x_k[s]) ** (p - 1)
    if classify_iterate(x_k, cfg) is Position.BOUNDARY:
        ball = WeightedL1Ball(w, cfg.r, np.flatnonzero(~s))
        return Subproblem(ball, step, Branch.P1, None)
    eps = epsilon_k(x_k, cfg)
    w[~s] = eps ** (p - 1)
    ball = WeightedL1Ball(w, radius_k(x_k, eps, cfg))
    return Subproblem(ball, step, Branch.P2, eps)


def _finite(value, what):
    if not np.all(np.isfinite(value)):
        raise FloatingPointError(f'non-finite {what} encountered')
    return value


def ir1b_solve(obj, cfg, x0=None, beta=None):
    """Run IR1B from a feasible `x0` (zeros by default).

    Parameters
    ----------
    obj : SmoothObjective
    cfg : SolverConfig
    x0 : array_like, optional
        Must satisfy ``||x0||_p^p <= r`` (up to ``cfg.boundary_tol``).
    beta : float, optional
        Overrides ``cfg.beta_factor * obj.lipschitz()``.

    Returns
    -------
    SolveReport
        Stops when ``||x_{k+1} - x_k||_2 <= cfg.tol`` or after
        ``cfg.max_iter`` iterations.
    """
    x = np.zeros(obj.dim) if x0 is None else np.asarray(x0, dtype=float)
    classify_iterate(x, cfg)
    if beta is None:
        beta = cfg.beta_factor * obj.lipschitz()
    f = _finite(obj.value(x), 'objective')
    report = SolveReport(x, 0.0, Status.MAX_ITER, f, beta)
    for _ in range(cfg.max_iter):
        g = _finite(obj.gradient(x), 'gradient')
        sub = build_subproblem(x, g, cfg, beta)
        x_new = project_weighted_l1(sub.step_point, sub.ball)
        lam = multiplier_estimate(x, x_new, g, beta, sub.ball, cfg.p)
        d = x_new - x
        dd = float(d @ d)
        f = _finite(obj.value(x_new), 'objective')
        report.trace.append(IterRecord(
            objective=f, displacement=math.sqrt(dd),
            lp_norm=lp_norm_p(x_new, cfg.p), branch=sub.branch,
            epsilon=sub.epsilon, multiplier=lam,
            model_decrease=-(float(g @ d) + 0.5 * beta * dd),
            pinned=int(np.count_nonzero(guard_pinned(sub.ball)))))
        x = x_new
        report.lambda_final = lam
        if math.sqrt(dd) <= cfg.tol:
            report.status = Status.CONVERGED
            break
    report.x_final = x
    return report


def _projected_gradient(obj, project, beta, tol, max_iter, x0, multiplier,
                        measure):
    if tol <= 0:
        raise ValueError('tol must be positive')
    if max_iter < 1:
        raise ValueError('max_iter must be at least 1')
    x = np.zeros(obj.dim) if x0 is None else np.asarray(x0, dtype=float)
    f = _finite(obj.value(x), 'objective')
    report = SolveReport(x, 0.0, Status.MAX_ITER, f, beta)
    for _ in range(max_iter):
        g = _finite(obj.gradient(x), 'gradient')
        x_new = project(x - g / beta)
        d = x_new - x
        dd = float(d @ d)
        f = _finite(obj.value(x_new), 'objective')
        lam = multiplier(x, x_new, g)
        report.trace.append(IterRecord(
            objective=f, displacement=math.sqrt(dd),
            lp_norm=measure(x_new),
            multiplier=lam,
            model_decrease=-(float(g @ d) + 0.5 * beta * dd)))
        x = x_new
        report.lambda_final = lam
        if math.sqrt(dd) <= tol:
            report.status = Status.CONVERGED
            break
    report.x_final = x
    return report


def iht_solve(obj, sparsity_k, beta_factor=1.1, tol=1e-5, max_iter=100_000,
              x0=None):
    """Iterative hard thresholding onto ``{x : ||x||_0 <= sparsity_k}``.

    The trace's `lp_norm` field holds the number of nonzeros.
    """
    if not 1 <= sparsity_k <= obj.dim:
        raise ValueError(f'sparsity_k must lie in [1, {obj.dim}]')
    if beta_factor <= 1:
        raise ValueError('beta_factor must be greater than 1')
    beta = beta_factor * obj.lipschitz()
    x0 = None if x0 is None else hard_threshold(x0, sparsity_k)
    return _projected_gradient(
        obj, lambda v: hard_threshold(v, sparsity_k), beta, tol, max_iter, x0,
        lambda *_: 0.0, lambda x: float(np.count_nonzero(x)))


def gpm_solve(obj, radius, beta_factor=1.1, tol=1e-5, max_iter=100_000,
              x0=None):
    """Projected gradient onto the l1 ball ``{x : ||x||_1 <= radius}``.

    The trace's `lp_norm` field holds ``||x||_1``.
    """
    if not radius > 0:
        raise ValueError('radius must be positive')
    if beta_factor <= 1:
        raise ValueError('beta_factor must be greater than 1')
    beta = beta_factor * obj.lipschitz()
    ones = WeightedL1Ball(np.ones(obj.dim), radius)
    x0 = None if x0 is None else project_l1(x0, radius)
    return _projected_gradient(
        obj, lambda v: project_l1(v, radius), beta, tol, max_iter, x0,
        lambda xp, xn, g: multiplier_estimate(xp, xn, g, beta, ones, 1.0),
        lambda x: float(np.sum(np.abs(x))))


def default_init_recovery(n, d, p, rng):
    """Random start with ``||x0||_p^p = 0.9^p * d``.

    ``x0_i = 0.9 * (d * nu_i / ||nu||_1)^(1/p)`` with ``nu`` uniform on
    ``[0, 1)^n``. ``p = 1`` is accepted for the l1 baseline.
    """
    if n < 1 or d < 1:
        raise ValueError('n and d must be at least 1')
    if not 0 < p <= 1:
        raise ValueError(f'p must lie in (0,1], got {p}')
    nu = rng.random(n)
    while not nu.any():
        nu = rng.random(n)
    return 0.9 * (d * nu / nu.sum()) ** (1 / p)
