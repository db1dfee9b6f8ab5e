"""
Sparse logistic regression
==========================

Test accuracy on the bundled breast-cancer data as a function of the ball
radius, for p = 0.5 and the l1 ball. Features are standardized and 40% of
the samples are held out.
"""

from lpball import SolverConfig, load_csv_dataset, logistic_sweep

data = load_csv_dataset()
print('samples, features:', data.X.shape)

r_grid = [2, 5, 10, 20, 30]
cfg = SolverConfig(seed=0, max_iter=2000)
result = logistic_sweep(data, r_grid, [0.5, 1.0], cfg)

print(f'{"r":>4}{"p=0.5":>8}{"p=1":>8}')
ir1b = result.values('ir1b', 0.5)
gpm = result.values('gpm', 1.0)
for r in r_grid:
    print(f'{r:>4}{ir1b[r]:>8.3f}{gpm[r]:>8.3f}')
