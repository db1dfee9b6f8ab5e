"""Sparse-recovery and logistic-regression experiment harness.

Two sweeps are provided:

* :func:`recovery_sweep` estimates the empirical probability of recovering a
  random ``d``-sparse ``+-1`` signal from ``m`` noisy Gaussian measurements,
  for IR1B at several ``p`` and the IHT (``L0``) and GPM (``L1``) baselines;
* :func:`logistic_sweep` fits radius-constrained logistic regression on a
  train split for a grid of radii and records the test accuracy.

Every trial draws its randomness from ``SeedSequence(seed, spawn_key=...)``
keyed by its grid position, so results do not depend on the number of
worker threads or on scheduling order.
"""

import csv
import dataclasses
import io
import json
import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .objectives import (LeastSquares, LeastSquaresData, Logistic,
                         LogisticData)
from .solver import (SolverConfig, default_init_recovery, gpm_solve,
                     iht_solve, ir1b_solve)

__all__ = ['RecoverySpec', 'SweepRow', 'SweepResult', 'gen_recovery_instance',
           'recovery_success', 'recovery_sweep', 'load_csv_dataset',
           'bundled_dataset_path', 'train_test_split', 'predict_accuracy',
           'logistic_sweep', 'persist_results', 'read_results', 'parse_method',
           'available_threads', 'FORMATS', 'format_value',
           'COLUMNS']

log = logging.getLogger(__name__)

COLUMNS = ('method', 'p', 'param', 'metric', 'value', 'trials', 'seed')
BUNDLED_SHAPE = (569, 30)


def parse_method(token):
    """Map a p-list entry to ``(method, p)``.

    ``'L0'`` or 0 selects IHT, ``'L1'`` or 1 selects GPM, and anything in
    (0, 1) selects IR1B at that p.
    """
    if isinstance(token, str):
        t = token.strip().upper()
        if t == 'L0':
            return 'iht', 0.0
        if t == 'L1':
            return 'gpm', 1.0
        try:
            token = float(t)
        except ValueError:
            raise ValueError(f'unknown method marker {token!r}') from None
    p = float(token)
    if p == 0:
        return 'iht', 0.0
    if p == 1:
        return 'gpm', 1.0
    if 0 < p < 1:
        return 'ir1b', p
    raise ValueError(f'p must lie in (0,1) or be a baseline marker L0/L1, '
                     f'got {token!r}')


@dataclass(frozen=True)
class RecoverySpec:
    n: int = 1024
    d: int = 25
    m_grid: tuple = tuple(range(50, 1001, 50))
    noise_std: float = 1e-2
    p_list: tuple = (0.3, 0.5, 0.7, 'L0', 'L1')
    trials: int = 50
    success_threshold: float = 1e-3
    seed: int = 0
    c: float = 0.95
    beta_factor: float = 1.1
    tol: float = 1e-5
    boundary_tol: float = 1e-8
    max_iter: int = 100_000

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError('trials must be at least 1')
        if not self.success_threshold > 0:
            raise ValueError('success_threshold must be positive')
        if self.noise_std < 0:
            raise ValueError('noise_std must be nonnegative')
        if not 1 <= self.d <= self.n:
            raise ValueError('d must lie in [1, n]')
        if not self.m_grid or min(self.m_grid) < 1:
            raise ValueError('m_grid must hold positive integers')
        for tok in self.p_list:
            parse_method(tok)


@dataclass(frozen=True)
class SweepRow:
    method: str
    p: float
    param: float
    metric: str
    value: float
    trials: int
    seed: int
    mean_iterations: float = float('nan')
    mean_time: float = float('nan')
    errors: int = 0


@dataclass
class SweepResult:
    rows: list = field(default_factory=list)

    def values(self, method, p=None, metric=None):
        """``{param: value}`` for one method (and p)."""
        return {r.param: r.value for r in self.rows
                if r.method == method and (p is None or r.p == p)
                and (metric is None or r.metric == metric)}


def gen_recovery_instance(n, m, d, noise_std, rng):
    """Random ``(A, y, x_true)`` with ``y = A x_true + noise``.

    `x_true` has `d` nonzeros equal to +-1 at uniformly random positions and
    `A` has i.i.d. standard normal entries.
    """
    if not 0 <= d <= n:
        raise ValueError(f'd must lie in [0, n], got d={d}, n={n}')
    x_true = np.zeros(n)
    idx = rng.choice(n, size=d, replace=False)
    x_true[idx] = rng.choice([-1.0, 1.0], size=d)
    A = rng.standard_normal((m, n))
    y = A @ x_true
    if noise_std > 0:
        y = y + noise_std * rng.standard_normal(m)
    return A, y, x_true


def recovery_success(x_star, x_true, threshold):
    """True iff ``||x_star - x_true|| / ||x_true|| < threshold``."""
    nt = np.linalg.norm(x_true)
    if nt == 0:
        raise ValueError('x_true must be nonzero')
    return bool(np.linalg.norm(np.asarray(x_star) - x_true) / nt < threshold)


def _method_key(method, p):
    return {'iht': (1,), 'gpm': (2,)}.get(method, (3, round(p * 10**6)))


def _recovery_trial(spec, method, p, m, trial):
    ss = np.random.SeedSequence(spec.seed, spawn_key=(m, trial))
    A, y, x_true = gen_recovery_instance(spec.n, m, spec.d, spec.noise_std,
                                         np.random.default_rng(ss))
    rng = np.random.default_rng(np.random.SeedSequence(
        spec.seed, spawn_key=(m, trial) + _method_key(method, p)))
    obj = LeastSquares(LeastSquaresData(A, y))
    t0 = time.perf_counter()
    try:
        if method == 'iht':
            rep = iht_solve(obj, spec.d, spec.beta_factor, spec.tol,
                            spec.max_iter)
        elif method == 'gpm':
            x0 = default_init_recovery(spec.n, spec.d, 1.0, rng)
            rep = gpm_solve(obj, spec.d, spec.beta_factor, spec.tol,
                            spec.max_iter, x0)
        else:
            cfg = SolverConfig(p=p, r=spec.d, c=spec.c,
                               beta_factor=spec.beta_factor, tol=spec.tol,
                               boundary_tol=spec.boundary_tol,
                               max_iter=spec.max_iter, seed=spec.seed)
            x0 = default_init_recovery(spec.n, spec.d, p, rng)
            rep = ir1b_solve(obj, cfg, x0)
    except (ValueError, ArithmeticError) as exc:
        log.warning('trial %s p=%s m=%d #%d failed: %s', method, p, m, trial,
                    exc)
        return False, 0, time.perf_counter() - t0, True
    ok = recovery_success(rep.x_final, x_true, spec.success_threshold)
    return ok, rep.iterations, time.perf_counter() - t0, False


def available_threads():
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


def _pool_map(fn, items, threads):
    if threads is None:
        threads = available_threads()
    if threads < 1:
        raise ValueError('threads must be at least 1')
    if threads == 1 or len(items) <= 1:
        return [fn(*it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(lambda it: fn(*it), items))


def recovery_sweep(spec, threads=None):
    """Success rate of every method at every ``m`` in ``spec.m_grid``.

    All methods see the same instance for a given ``(m, trial)``.
    """
    methods = [parse_method(t) for t in spec.p_list]
    items = [(spec, meth, p, m, t) for meth, p in methods
             for m in spec.m_grid for t in range(spec.trials)]
    out = iter(_pool_map(_recovery_trial, items, threads))
    result = SweepResult()
    for meth, p in methods:
        for m in spec.m_grid:
            trials = [next(out) for _ in range(spec.trials)]
            ok, its, secs, err = (np.array(c) for c in zip(*trials))
            result.rows.append(SweepRow(
                meth, p, m, 'success_rate', float(ok.mean()), spec.trials,
                spec.seed, float(its.mean()), float(secs.mean()),
                int(err.sum())))
    return result


def bundled_dataset_path():
    """Path of the bundled Wisconsin diagnostic breast cancer CSV.

    Columns are the 30 real-valued features (mean, standard error and
    worst value of ten nucleus measurements) followed by the label,
    1 for benign and 0 for malignant.
    """
    return Path(str(resources.files('lpball') / 'data' / 'wdbc.csv'))


def _is_number(s):
    try:
        float(s)
    except ValueError:
        return False
    return True


def load_csv_dataset(path=None, standardize=True):
    """Read a numeric CSV with the label in the last column.

    A non-numeric first row is taken as a header. Labels may be {0, 1} or
    {-1, +1}. With `standardize`, every feature column is shifted to zero
    mean and scaled to unit variance; constant columns become zeros.

    Parameters
    ----------
    path : str or Path, optional
        Defaults to the bundled breast cancer dataset, whose 569 x 30 shape
        is verified.
    """
    bundled = path is None
    path = bundled_dataset_path() if bundled else Path(path)
    with open(path, newline='', encoding='utf-8') as fh:
        rows = [(i, r) for i, r in enumerate(csv.reader(fh), start=1)
                if r and any(c.strip() for c in r)]
    if rows and not all(_is_number(c) for c in rows[0][1]):
        rows = rows[1:]
    if not rows:
        raise ValueError(f'{path}: no data rows')
    width = len(rows[0][1])
    if width < 2:
        raise ValueError(f'{path}: need at least one feature and a label')
    data = []
    for lineno, r in rows:
        if len(r) != width:
            raise ValueError(f'{path}:{lineno}: expected {width} fields, '
                             f'got {len(r)}')
        try:
            data.append([float(c) for c in r])
        except ValueError as exc:
            raise ValueError(f'{path}:{lineno}: {exc}') from None
    arr = np.array(data)
    X, labels = arr[:, :-1], arr[:, -1]
    if bundled and X.shape != BUNDLED_SHAPE:
        raise ValueError(f'bundled dataset has shape {X.shape}, '
                         f'expected {BUNDLED_SHAPE}')
    if standardize:
        mu = X.mean(axis=0)
        sd = X.std(axis=0)
        X = np.where(sd > 0, (X - mu) / np.where(sd > 0, sd, 1.0), 0.0)
    return LogisticData(X, labels)


def train_test_split(data, test_frac, rng):
    """Random partition into ``(train, test)``.

    The test part has ``ceil(m * test_frac)`` rows.
    """
    if not 0 < test_frac < 1:
        raise ValueError('test_frac must lie in (0,1)')
    m = data.n_samples
    n_test = math.ceil(round(m * test_frac, 9))
    if not 0 < n_test < m:
        raise ValueError(f'degenerate split: {n_test} test rows out of {m}')
    perm = rng.permutation(m)
    te, tr = perm[:n_test], perm[n_test:]
    return (LogisticData(data.X[tr], data.labels[tr]),
            LogisticData(data.X[te], data.labels[te]))


def predict_accuracy(theta, test):
    """Fraction of test rows whose label matches ``sigmoid(x.theta) >= 0.5``."""
    if test.n_samples == 0:
        raise ValueError('empty test set')
    theta = np.asarray(theta, dtype=float)
    if theta.size != test.X.shape[1]:
        raise ValueError('dimension mismatch')
    z = test.X @ theta
    pred = np.where(1.0 / (1.0 + np.exp(-z)) >= 0.5, 1.0, -1.0)
    return float(np.mean(pred == test.labels))


def _logistic_fit(train, test, method, p, r, cfg):
    obj = Logistic(train)
    t0 = time.perf_counter()
    if method == 'gpm':
        rep = gpm_solve(obj, r, cfg.beta_factor, cfg.tol, cfg.max_iter)
    elif method == 'ir1b':
        rep = ir1b_solve(obj, dataclasses.replace(cfg, p=p, r=r))
    else:
        raise ValueError('logistic sweep supports IR1B and L1 only')
    return (predict_accuracy(rep.x_final, test), rep.iterations,
            time.perf_counter() - t0)


def logistic_sweep(data, r_grid, p_list, cfg, test_frac=0.4, threads=None):
    """Test accuracy over a grid of radii, starting from ``theta = 0``.

    `data` is split once with ``default_rng(cfg.seed)``. Entries of `p_list`
    in (0, 1) run IR1B; ``1`` or ``'L1'`` runs GPM. ``cfg.p`` and ``cfg.r``
    are ignored.
    """
    r_grid = list(r_grid)
    if not r_grid:
        raise ValueError('r_grid must be nonempty')
    train, test = train_test_split(data, test_frac,
                                   np.random.default_rng(cfg.seed))
    methods = [parse_method(t) for t in p_list]
    items = [(train, test, meth, p, float(r), cfg)
             for meth, p in methods for r in r_grid]
    out = _pool_map(_logistic_fit, items, threads)
    result = SweepResult()
    for (_, _, meth, p, r, _), (acc, its, secs) in zip(items, out):
        result.rows.append(SweepRow(meth, p, r, 'accuracy', acc, 1, cfg.seed,
                                    float(its), secs))
    return result


def _records(result, include_stats):
    for row in result.rows:
        yield row
        if include_stats:
            yield dataclasses.replace(row, metric='mean_iterations',
                                      value=row.mean_iterations)


FORMATS = ('csv', 'json', 'tsv')


def persist_results(result, path, format='csv', include_stats=False):
    """Write a sweep with columns :data:`COLUMNS`.

    `format` is ``'csv'``, ``'json'`` (an array of records) or ``'tsv'``
    (tab-separated, convenient for plotting tools). Floats are written in
    shortest round-trip form (at most 17 significant digits) and wall-clock
    timings are never written, so files are reproducible byte for byte. With
    `include_stats`, a ``mean_iterations`` row follows each metric row.
    """
    if format not in FORMATS:
        raise ValueError(f'unknown format {format!r}; expected one of '
                         f'{", ".join(FORMATS)}')
    recs = [{k: getattr(row, k) for k in COLUMNS}
            for row in _records(result, include_stats)]
    if format == 'json':
        text = json.dumps(recs, indent=1) + '\n'
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator='\n',
                       delimiter='\t' if format == 'tsv' else ',')
        w.writerow(COLUMNS)
        for rec in recs:
            w.writerow([format_value(rec[k]) for k in COLUMNS])
        text = buf.getvalue()
    with open(path, 'w', encoding='utf-8', newline='\n') as fh:
        fh.write(text)


def format_value(v):
    # repr is the shortest string that round-trips (at most 17 digits)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def read_results(path):
    """Read a file written by :func:`persist_results` into a list of dicts."""
    path = Path(path)
    text = path.read_text(encoding='utf-8')
    if text.lstrip().startswith('['):
        recs = json.loads(text)
    else:
        delim = '\t' if '\t' in text.partition('\n')[0] else ','
        recs = list(csv.DictReader(io.StringIO(text), delimiter=delim))
    out = []
    for rec in recs:
        out.append({'method': rec['method'], 'p': float(rec['p']),
                    'param': float(rec['param']), 'metric': rec['metric'],
                    'value': float(rec['value']),
                    'trials': int(rec['trials']), 'seed': int(rec['seed'])})
    return out
