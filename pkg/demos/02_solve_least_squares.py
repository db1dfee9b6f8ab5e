"""
Sparse least squares with IR1B
==============================

Minimize ``0.5 ||A x - y||^2`` over the l_p ball for a random Gaussian
design and a 4-sparse signal, then compare with the l1-ball and
hard-thresholding baselines.
"""

import numpy as np

from lpball import (LeastSquares, LeastSquaresData, SolverConfig,
                    default_init_recovery, gpm_solve, iht_solve, ir1b_solve)

rng = np.random.default_rng(0)
n, m, d = 128, 48, 4
x_true = np.zeros(n)
x_true[rng.choice(n, d, replace=False)] = rng.choice([-1.0, 1.0], d)
A = rng.standard_normal((m, n))
y = A @ x_true + 1e-2 * rng.standard_normal(m)
f = LeastSquares(LeastSquaresData(A, y))

# the ball radius is the sparsity level, which is exactly ||x_true||_p^p
cfg = SolverConfig(p=0.5, r=d, tol=1e-8)
x0 = default_init_recovery(n, d, cfg.p, rng)
rep = ir1b_solve(f, cfg, x0)
print(f'IR1B   status={rep.status.value} iterations={rep.iterations}')


def rel_err(x):
    return np.linalg.norm(x - x_true) / np.linalg.norm(x_true)


print('  relative error', rel_err(rep.x_final))
print('  support size  ', np.count_nonzero(rep.x_final))

# the objective decreases monotonically along the run
f_hist = rep.objectives()
print('  monotone      ', bool(np.all(np.diff(f_hist) <= 1e-12 * f_hist[:-1])))

iht = iht_solve(f, d)
gpm = gpm_solve(f, np.abs(x_true).sum())
print('IHT  relative error', rel_err(iht.x_final))
print('GPM  relative error', rel_err(gpm.x_final), '(biased by the l1 ball)')
