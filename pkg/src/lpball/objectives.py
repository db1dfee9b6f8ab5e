"""Smooth objectives consumed by the solvers.

Every objective exposes ``value(x)``, ``gradient(x)`` and ``lipschitz()``,
the last one an upper estimate of the Lipschitz constant of the gradient.
"""

import warnings
from dataclasses import dataclass
from typing import Protocol

import numpy as np
from scipy.special import expit

__all__ = ['SmoothObjective', 'LeastSquaresData', 'LogisticData',
           'LeastSquares', 'Logistic', 'Quadratic', 'least_squares_objective',
           'logistic_objective', 'power_iteration_lambda_max']


class SmoothObjective(Protocol):
    def value(self, x: np.ndarray) -> float: ...
    def gradient(self, x: np.ndarray) -> np.ndarray: ...
    def lipschitz(self) -> float: ...


@dataclass(frozen=True)
class LeastSquaresData:
    A: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        y = np.asarray(self.y, dtype=float).ravel()
        if A.ndim != 2 or A.shape[0] != y.size:
            raise ValueError(f'dimension mismatch: A is {A.shape}, '
                             f'y has {y.size} entries')
        object.__setattr__(self, 'A', A)
        object.__setattr__(self, 'y', y)


@dataclass(frozen=True)
class LogisticData:
    """Feature rows `X` with labels in {-1, +1}.

    Labels given as {0, 1} are mapped to {-1, +1}.
    """

    X: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        X = np.atleast_2d(np.asarray(self.X, dtype=float))
        s = np.asarray(self.labels, dtype=float).ravel()
        if X.shape[0] != s.size:
            raise ValueError(f'dimension mismatch: X is {X.shape}, '
                             f'{s.size} labels')
        vals = set(np.unique(s).tolist())
        if vals <= {0.0, 1.0}:
            s = 2 * s - 1
        elif not vals <= {-1.0, 1.0}:
            raise ValueError(f'labels must be binary, got values '
                             f'{sorted(vals)}')
        object.__setattr__(self, 'X', X)
        object.__setattr__(self, 'labels', s)

    @property
    def n_samples(self):
        return self.X.shape[0]


def power_iteration_lambda_max(apply, n, tol=1e-8, max_iter=5000):
    """Largest eigenvalue of a symmetric PSD operator.

    Parameters
    ----------
    apply : callable
        ``v -> M v``.
    n : int
        Dimension of `v`.
    tol : float
        Stop when the Rayleigh quotient changes by less than ``tol`` relative.
    max_iter : int

    Returns
    -------
    lam : float
    converged : bool
        False if `max_iter` was hit; a ``RuntimeWarning`` is also issued.
    """
    if n < 1:
        raise ValueError('dimension must be positive')
    if tol <= 0:
        raise ValueError('tol must be positive')
    # fixed-seed start: an all-ones start is orthogonal to the top
    # eigenvector of e.g. [[2, -1], [-1, 2]]
    v = np.random.default_rng(0).standard_normal(n)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        w = apply(v)
        lam_new = float(v @ w)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0, True
        v = w / nw
        if abs(lam_new - lam) <= tol * abs(lam_new):
            return lam_new, True
        lam = lam_new
    warnings.warn('power iteration did not converge', RuntimeWarning)
    return lam, False


class LeastSquares:
    """``f(x) = 0.5 * ||A x - y||^2``."""

    def __init__(self, data: LeastSquaresData):
        self.data = data
        self._L = None

    @property
    def dim(self):
        return self.data.A.shape[1]

    def value(self, x):
        r = self.data.A @ x - self.data.y
        return 0.5 * float(r @ r)

    def gradient(self, x):
        A = self.data.A
        return A.T @ (A @ x - self.data.y)

    def lipschitz(self):
        if self._L is None:
            A = self.data.A
            self._L, _ = power_iteration_lambda_max(
                lambda v: A.T @ (A @ v), A.shape[1])
        return self._L


class Logistic:
    """``f(theta) = sum_i log(1 + exp(-s_i <theta, x_i>))``, no intercept."""

    def __init__(self, data: LogisticData):
        self.data = data
        self._L = None

    @property
    def dim(self):
        return self.data.X.shape[1]

    def value(self, theta):
        z = self.data.labels * (self.data.X @ theta)
        return float(np.sum(np.logaddexp(0.0, -z)))

    def gradient(self, theta):
        s = self.data.labels
        z = s * (self.data.X @ theta)
        return -self.data.X.T @ (s * expit(-z))

    def lipschitz(self):
        if self._L is None:
            X = self.data.X
            lam, _ = power_iteration_lambda_max(
                lambda v: X.T @ (X @ v), X.shape[1])
            self._L = 0.25 * lam
        return self._L


def least_squares_objective(data: LeastSquaresData) -> LeastSquares:
    return LeastSquares(data)


def logistic_objective(data: LogisticData) -> Logistic:
    return Logistic(data)


class Quadratic:
    """``f(x) = 0.5 * ||x - a||^2``; handy for closed-form checks."""

    def __init__(self, a):
        self.a = np.asarray(a, dtype=float)

    @property
    def dim(self):
        return self.a.size

    def value(self, x):
        d = x - self.a
        return 0.5 * float(d @ d)

    def gradient(self, x):
        return x - self.a

    def lipschitz(self):
        return 1.0

