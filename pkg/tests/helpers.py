"""Instance generators shared by the test modules."""

import numpy as np

from lpball import (LeastSquares, LeastSquaresData, Logistic, LogisticData,
                    WeightedL1Ball, default_init_recovery)

SUITE_SIZE = 50
SUITE_PS = (0.3, 0.5, 0.7)


def random_ball_instance(rng, n_lo=2, n_hi=50):
    """Random ``(v, ball)`` with log-uniform weights in [1e-3, 1e3] and an
    active constraint."""
    n = int(rng.integers(n_lo, n_hi + 1))
    v = rng.standard_normal(n) * 10 ** rng.uniform(-2, 2)
    w = 10 ** rng.uniform(-3, 3, n)
    total = float(np.sum(w * np.abs(v)))
    radius = total * rng.uniform(0.01, 0.99)
    return v, WeightedL1Ball(w, radius)


def suite_instance(i):
    """Instance ``i`` of the 50-problem invariant suite.

    Even ``i``: noisy sparse least squares with ``r = d`` and the recovery
    initialization. Odd ``i``: logistic regression from zero with a random
    radius. ``p`` cycles through 0.3, 0.5, 0.7 and ``n <= 256``.
    Returns ``(kind, p, r, objective, x0)``.
    """
    rng = np.random.default_rng(1000 + i)
    p = SUITE_PS[i % 3]
    n = int(rng.integers(16, 257))
    if i % 2 == 0:
        m, d = max(4, n // 2), max(1, n // 16)
        A = rng.standard_normal((m, n))
        x_true = np.zeros(n)
        x_true[rng.choice(n, d, replace=False)] = rng.choice([-1.0, 1.0], d)
        y = A @ x_true + 1e-2 * rng.standard_normal(m)
        x0 = default_init_recovery(n, d, p, rng)
        return 'ls', p, float(d), LeastSquares(LeastSquaresData(A, y)), x0
    m = 2 * n
    X = rng.standard_normal((m, n))
    theta = rng.standard_normal(n)
    s = np.where(X @ theta + rng.standard_normal(m) >= 0, 1.0, -1.0)
    r = float(rng.uniform(1, 5))
    return 'logistic', p, r, Logistic(LogisticData(X, s)), np.zeros(n)


def central_diff_gradient(f, x, h=1e-6):
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2 * h)
    return g
