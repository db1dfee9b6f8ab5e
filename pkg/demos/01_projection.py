"""
Projecting onto a weighted l1 ball
==================================

Every IR1B step reduces to one Euclidean projection onto
``{x : sum_i w_i |x_i| <= radius}``. This script projects a small vector,
checks the answer against a bisection reference and shows what happens to
coordinates that are pinned at zero.
"""

import numpy as np

from lpball import (WeightedL1Ball, bisection_oracle_project, project_l1,
                    project_weighted_l1)

v = np.array([1.2, -0.7, 0.4])
ball = WeightedL1Ball(np.array([2.0, 1.0, 0.5]), 1.0)
x = project_weighted_l1(v, ball)
print('projection      ', x)
print('weighted l1 norm', np.sum(ball.weights * np.abs(x)))

# the sort-based result agrees with a slow bisection on the threshold
ref = bisection_oracle_project(v, ball)
print('max gap to bisection', np.max(np.abs(x - ref)))

# signs never flip and small coordinates are shrunk to exactly zero
print('plain l1 ball, radius 1:', project_l1(np.array([0.9, -0.6, 0.3]), 1.0))

# coordinates listed in fixed_zero stay at zero whatever v says
pinned = WeightedL1Ball(np.ones(3), 1.0, fixed_zero=[0])
print('with x_0 pinned:', project_weighted_l1(v, pinned))
