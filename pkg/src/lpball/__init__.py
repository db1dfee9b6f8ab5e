"""Smooth minimization over the nonconvex l_p ball, 0 < p < 1.

The main entry point is :func:`ir1b_solve`, an iteratively reweighted
l1-ball method: every step projects a gradient step onto a weighted l1 ball
that locally approximates ``{x : sum_i |x_i|^p <= r}``. Baselines
(:func:`iht_solve`, :func:`gpm_solve`), stationarity certification and the
sparse-recovery / logistic-regression experiment harness are also exported.
"""

from .objectives import (Logistic, LogisticData, LeastSquares,
                         LeastSquaresData, Quadratic, SmoothObjective,
                         least_squares_objective, logistic_objective,
                         power_iteration_lambda_max)
from .optimality import (Position, StationarityReport, boundary_kkt_residual,
                         classify_point, interior_kkt_residual, lp_norm_p,
                         multiplier_estimate, normal_cone_check,
                         stationarity_report)
from .projection import (WeightedL1Ball, bisection_oracle_project,
                         hard_threshold, project_l1, project_weighted_l1)
from .solver import (Branch, IterRecord, SolveReport, SolverConfig, Status,
                     build_subproblem, default_init_recovery, epsilon_k,
                     gpm_solve, iht_solve, ir1b_solve, radius_k)
from .experiments import (RecoverySpec, SweepResult, SweepRow,
                          gen_recovery_instance, load_csv_dataset,
                          logistic_sweep, persist_results, predict_accuracy,
                          read_results, recovery_success, recovery_sweep,
                          train_test_split)

__version__ = '0.1.0'
