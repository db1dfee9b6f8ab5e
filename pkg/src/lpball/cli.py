"""Command-line front end: ``python -m lpball <command> [options]``.

Commands
--------
solve           run IR1B on a least-squares or logistic problem read from CSV
project         project a vector onto a weighted l1 ball
recover-sweep   sparse-recovery success rate versus number of measurements
logistic-sweep  test accuracy of radius-constrained logistic regression
certify         first-order stationarity report for a given point

Settings are resolved in the order defaults < ``--config`` file < flags. A
config file holds ``key = value`` lines with ``#`` comments; keys use
underscores (``beta_factor = 1.1``). Exit status is 0 on success, 1 on bad
input and 2 when the solver or an experiment fails at run time.
"""

import argparse
import configparser
import json
import os
import sys
from dataclasses import fields

import numpy as np

from . import experiments as ex
from .objectives import (LeastSquares, LeastSquaresData, Logistic,
                         LogisticData)
from .optimality import stationarity_report
from .projection import WeightedL1Ball, project_weighted_l1
from .solver import SolverConfig, ir1b_solve

__all__ = ['main', 'run_cli', 'load_config', 'build_parser', 'CONFIG_KEYS']


class UsageError(ValueError):
    pass


def _int_list(text):
    return [int(t) for t in text.split(',') if t.strip()]


def _float_list(text):
    return [float(t) for t in text.split(',') if t.strip()]


def _p_list(text):
    out = [t.strip() for t in text.split(',') if t.strip()]
    return [t if t.upper() in ('L0', 'L1') else float(t) for t in out]


def _r_grid(text):
    """``'2:35'`` (inclusive, step 1), ``'2:35:3'`` or a comma list."""
    if ':' in text:
        parts = [float(t) for t in text.split(':')]
        if len(parts) not in (2, 3):
            raise ValueError(f'bad range {text!r}')
        lo, hi = parts[:2]
        step = parts[2] if len(parts) == 3 else 1.0
        if step <= 0:
            raise ValueError('range step must be positive')
        k = int(np.floor((hi - lo) / step + 1e-9))
        return [lo + i * step for i in range(k + 1)]
    return _float_list(text)


# key -> parser; shared by the config file and the corresponding flags
CONFIG_KEYS = {
    'p': float, 'r': float, 'c': float, 'beta_factor': float, 'tol': float,
    'boundary_tol': float, 'max_iter': int, 'seed': int, 'threads': int,
    'format': str, 'n': int, 'd': int, 'm': _int_list, 'p_list': _p_list,
    'trials': int, 'noise_std': float, 'success_threshold': float,
    'r_grid': _r_grid, 'test_frac': float,
}
SOLVER_KEYS = tuple(f.name for f in fields(SolverConfig))


def load_config(path):
    """Parse a flat ``key = value`` file into a dict of typed values.

    Unknown keys are rejected all at once; values are converted with the
    parsers in :data:`CONFIG_KEYS`.
    """
    with open(path, encoding='utf-8') as fh:
        text = fh.read()
    cp = configparser.ConfigParser(comment_prefixes=('#', ';'),
                                   inline_comment_prefixes=('#',),
                                   interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string('[lpball]\n' + text, source=str(path))
    except configparser.Error as exc:
        raise UsageError(f'{path}: {exc}') from None
    raw = dict(cp['lpball'])
    unknown = sorted(set(raw) - set(CONFIG_KEYS))
    if unknown:
        raise UsageError(f'{path}: unknown config keys: {", ".join(unknown)}')
    out = {}
    for key, val in raw.items():
        val = val.strip().strip('"\'')
        try:
            out[key] = CONFIG_KEYS[key](val)
        except ValueError:
            raise UsageError(f'{path}: bad value for {key}: {val!r}') from None
    return out


def _add_common(sp, solver=True):
    sp.add_argument('--config', help='flat key = value settings file')
    sp.add_argument('--seed', type=int)
    sp.add_argument('--out', help='output file')
    sp.add_argument('--format', choices=ex.FORMATS)
    if solver:
        sp.add_argument('--p', type=float)
        sp.add_argument('--r', type=float)
        sp.add_argument('--c', type=float)
        sp.add_argument('--beta-factor', dest='beta_factor', type=float)
        sp.add_argument('--tol', type=float)
        sp.add_argument('--boundary-tol', dest='boundary_tol', type=float)
        sp.add_argument('--max-iter', dest='max_iter', type=int)
    sp.add_argument('--threads', type=int,
                    help='worker threads (default: $LPBALL_THREADS, else '
                         'the number of available CPUs)')


def _add_problem(sp):
    sp.add_argument('--objective', choices=('ls', 'logistic'), default='ls')
    sp.add_argument('--matrix', help='CSV matrix A (ls)')
    sp.add_argument('--rhs', help='CSV vector y (ls)')
    sp.add_argument('--data', help='CSV dataset, label last (logistic); '
                                   'defaults to the bundled dataset')
    sp.add_argument('--no-standardize', action='store_true',
                    help='use logistic features as given')


def build_parser():
    ap = argparse.ArgumentParser(
        prog='lpball',
        description='Smooth minimization over the l_p ball (0 < p < 1).')
    sub = ap.add_subparsers(dest='command', required=True)

    sp = sub.add_parser('solve', help='run IR1B')
    _add_problem(sp)
    sp.add_argument('--x0', help='CSV starting point (default zeros)')
    _add_common(sp)

    sp = sub.add_parser('project', help='weighted l1-ball projection')
    sp.add_argument('--vector', required=True, help='CSV vector v')
    sp.add_argument('--weights', help='CSV weights (default all ones)')
    sp.add_argument('--radius', type=float, required=True)
    sp.add_argument('--fixed-zero', dest='fixed_zero', type=_int_list,
                    default=[], help='comma-separated indices kept at zero')
    sp.add_argument('--out')

    sp = sub.add_parser('recover-sweep', help='sparse-recovery phase transition')
    sp.add_argument('--n', type=int)
    sp.add_argument('--d', type=int)
    sp.add_argument('--m', type=_int_list, help='comma-separated m values')
    sp.add_argument('--p', dest='p_list', type=_p_list,
                    help='comma list of p values and L0/L1 baselines')
    sp.add_argument('--trials', type=int)
    sp.add_argument('--noise-std', dest='noise_std', type=float)
    sp.add_argument('--success-threshold', dest='success_threshold',
                    type=float)
    sp.add_argument('--stats', action='store_true',
                    help='also write mean iteration counts')
    _add_common(sp, solver=False)
    for flag in ('--c', '--beta-factor', '--tol', '--boundary-tol',
                 '--max-iter'):
        sp.add_argument(flag, dest=flag[2:].replace('-', '_'),
                        type=int if flag == '--max-iter' else float)

    sp = sub.add_parser('logistic-sweep', help='accuracy versus radius')
    sp.add_argument('--data', help='CSV dataset (default bundled)')
    sp.add_argument('--r-grid', dest='r_grid', type=_r_grid,
                    help="'lo:hi[:step]' or a comma list (default 2:35)")
    sp.add_argument('--p', dest='p_list', type=_p_list,
                    help='comma list of p values; 1 or L1 runs GPM')
    sp.add_argument('--test-frac', dest='test_frac', type=float)
    sp.add_argument('--stats', action='store_true')
    _add_common(sp, solver=False)
    for flag in ('--c', '--beta-factor', '--tol', '--boundary-tol',
                 '--max-iter'):
        sp.add_argument(flag, dest=flag[2:].replace('-', '_'),
                        type=int if flag == '--max-iter' else float)

    sp = sub.add_parser('certify', help='stationarity report for a point')
    _add_problem(sp)
    sp.add_argument('--x', required=True, help='CSV point to certify')
    _add_common(sp)
    return ap


def _settings(args):
    cfg = load_config(args.config) if getattr(args, 'config', None) else {}
    for key in CONFIG_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    return cfg


def _threads(cfg):
    if 'threads' in cfg:
        t = cfg['threads']
    elif os.environ.get('LPBALL_THREADS', '').strip():
        try:
            t = int(os.environ['LPBALL_THREADS'])
        except ValueError:
            raise UsageError('LPBALL_THREADS must be an integer') from None
    else:
        t = ex.available_threads()
    if t < 1:
        raise UsageError(f'threads must be at least 1 (got threads = {t})')
    return t


def _solver_config(cfg):
    return SolverConfig(**{k: cfg[k] for k in SOLVER_KEYS if k in cfg})


def _read_array(path, ndim):
    arr = np.loadtxt(path, delimiter=',', ndmin=ndim, dtype=float)
    if ndim == 1:
        arr = arr.ravel()
    return arr


def _objective(args):
    if args.objective == 'ls':
        if not (args.matrix and args.rhs):
            raise UsageError('--objective ls needs --matrix and --rhs')
        return LeastSquares(LeastSquaresData(_read_array(args.matrix, 2),
                                             _read_array(args.rhs, 1)))
    data = ex.load_csv_dataset(args.data, standardize=not args.no_standardize)
    return Logistic(data)


def _write_vector(x, path, fmt):
    if fmt == 'json':
        text = json.dumps([float(v) for v in x]) + '\n'
    else:
        text = ''.join(ex.format_value(float(v)) + '\n' for v in x)
    with open(path, 'w', encoding='utf-8', newline='\n') as fh:
        fh.write(text)


def _write_record(rec, path, fmt):
    if fmt == 'json':
        text = json.dumps(rec, indent=1) + '\n'
    else:
        sep = '\t' if fmt == 'tsv' else ','
        text = sep.join(rec) + '\n' + sep.join(
            ex.format_value(v) for v in rec.values()) + '\n'
    with open(path, 'w', encoding='utf-8', newline='\n') as fh:
        fh.write(text)


def _cmd_solve(args, cfg):
    sc = _solver_config(cfg)
    obj = _objective(args)
    x0 = _read_array(args.x0, 1) if args.x0 else None
    if x0 is not None and x0.size != obj.dim:
        raise UsageError(f'x0 has {x0.size} entries, expected {obj.dim}')
    rep = ir1b_solve(obj, sc, x0)
    cert = stationarity_report(rep.x_final, obj, sc.p, sc.r, sc.boundary_tol,
                              relaxed=True)
    if args.out:
        _write_vector(rep.x_final, args.out, cfg.get('format', 'csv'))
    print(f'status={rep.status.value} iterations={rep.iterations} '
          f'objective={rep.objective:.10g} residual={cert.residual:.3e} '
          f'case={cert.case.value} lambda={rep.lambda_final:.10g}')


def _cmd_certify(args, cfg):
    sc = _solver_config(cfg)
    obj = _objective(args)
    x = _read_array(args.x, 1)
    if x.size != obj.dim:
        raise UsageError(f'x has {x.size} entries, expected {obj.dim}')
    cert = stationarity_report(x, obj, sc.p, sc.r, sc.boundary_tol,
                              relaxed=True)
    if args.out:
        _write_record({'case': cert.case.value, 'lambda': cert.lam,
                       'residual': cert.residual,
                       'feasibility_gap': cert.feasibility_gap},
                      args.out, cfg.get('format', 'csv'))
    print(f'iterations=0 objective={obj.value(x):.10g} '
          f'residual={cert.residual:.3e} case={cert.case.value} '
          f'lambda={cert.lam:.10g} gap={cert.feasibility_gap:.3e}')


def _cmd_project(args, cfg):
    v = _read_array(args.vector, 1)
    w = _read_array(args.weights, 1) if args.weights else np.ones(v.size)
    ball = WeightedL1Ball(w, args.radius, args.fixed_zero)
    x = project_weighted_l1(v, ball)
    if args.out:
        _write_vector(x, args.out, 'csv')
    print(f'iterations=0 objective={0.5 * float((x - v) @ (x - v)):.10g} '
          f'residual={max(ball.norm(x) - ball.radius, 0.0):.3e} '
          f'norm={ball.norm(x):.10g}')


def _sweep_summary(result):
    its = [r.mean_iterations for r in result.rows]
    errors = sum(r.errors for r in result.rows)
    print(f'rows={len(result.rows)} '
          f'iterations={np.mean(its) if its else 0.0:.1f} '
          f'objective=n/a residual=n/a errors={errors}')


def _solver_kwargs(cfg):
    keys = ('c', 'beta_factor', 'tol', 'boundary_tol', 'max_iter', 'seed')
    return {k: cfg[k] for k in keys if k in cfg}


def _cmd_recover(args, cfg):
    kw = _solver_kwargs(cfg)
    for k in ('n', 'd', 'trials', 'noise_std', 'success_threshold'):
        if k in cfg:
            kw[k] = cfg[k]
    if 'm' in cfg:
        kw['m_grid'] = tuple(cfg['m'])
    if 'p_list' in cfg:
        kw['p_list'] = tuple(cfg['p_list'])
    spec = ex.RecoverySpec(**kw)
    threads = _threads(cfg)
    result = ex.recovery_sweep(spec, threads)
    if args.out:
        ex.persist_results(result, args.out, cfg.get('format', 'csv'),
                           args.stats)
    _sweep_summary(result)


def _cmd_logistic(args, cfg):
    sc = _solver_config(cfg)
    threads = _threads(cfg)
    data = ex.load_csv_dataset(args.data)
    result = ex.logistic_sweep(
        data, cfg.get('r_grid', list(range(2, 36))),
        cfg.get('p_list', [0.5, 1.0]), sc, cfg.get('test_frac', 0.4),
        threads)
    if args.out:
        ex.persist_results(result, args.out, cfg.get('format', 'csv'),
                           args.stats)
    _sweep_summary(result)


COMMANDS = {'solve': _cmd_solve, 'certify': _cmd_certify,
            'project': _cmd_project, 'recover-sweep': _cmd_recover,
            'logistic-sweep': _cmd_logistic}


def run_cli(argv=None):
    """Run one command and return its exit status."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; report those as bad input
        return 0 if exc.code == 0 else 1
    try:
        cfg = _settings(args)
        COMMANDS[args.command](args, cfg)
    except (ValueError, OSError) as exc:
        print(f'error: {exc}', file=sys.stderr)
        return 1
    except (ArithmeticError, RuntimeError) as exc:
        print(f'solver error: {exc}', file=sys.stderr)
        return 2
    return 0


def main():
    sys.exit(run_cli())
