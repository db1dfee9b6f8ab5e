"""
Checking first-order stationarity
=================================

A point on the boundary of the l_p ball is stationary when the gradient,
restricted to the support, is a nonnegative multiple of the gradient of
``sum_i |x_i|^p``. The report below fits that multiple and returns the
scaled residual. Interior points just need a vanishing gradient on their
support.
"""

import numpy as np

from lpball import LeastSquares, LeastSquaresData, Quadratic, \
    stationarity_report

# A = I, y = (20, 0, 0), p = 1/2, r = 4: the minimizer is (16, 0, 0)
f = LeastSquares(LeastSquaresData(np.eye(3), [20.0, 0, 0]))
rep = stationarity_report(np.array([16.0, 0, 0]), f, 0.5, 4.0)
print('at the minimizer:', rep)

# (4, 0, 0) lies inside the ball and its gradient is not zero
rep = stationarity_report(np.array([4.0, 0, 0]), f, 0.5, 4.0)
print('inside, not stationary: residual', rep.residual)

# iterates that stop just short of the boundary score badly under the
# strict interior test; relaxed=True also tries the boundary system
x = np.array([(1 - 1e-7) ** 2, 0.0])
q = Quadratic(np.array([2.0, 0.0]))
print('strict ', stationarity_report(x, q, 0.5, 1.0))
print('relaxed', stationarity_report(x, q, 0.5, 1.0, relaxed=True))
