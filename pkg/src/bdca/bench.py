"""Experiment harness reproducing the benchmark data as CSV files.

Three sweep experiments plus a one-off solve:

* ``horn_copositive``    multi-start copositivity runs on Horn matrices
* ``horn_noncopositive`` same matrices at mu < 2, stopping on negativity
* ``tr_subproblem``      random l_inf trust-region subproblems
* ``single_solve``       one problem from matrix/vector/constraint files

For every (size, start) the DCA and BDCA runs receive bitwise-identical
starting points, and the per-start wall-time ratio DCA/BDCA is summarized by
its median, one row per size. Wall time covers only the solver call; problem
construction (including the spectral estimate) is shared by both algorithms
and excluded. Rerunning with the same config and seed reproduces every
non-timing CSV column bitwise.
"""

import csv
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .applications import (copositivity_problem, horn_family, quad_form,
                           quad_form_rounding_guard, random_box_start,
                           random_orthant_ball_start, random_tr_instance,
                           tr_problem)
from .fileio import (fmt, kkt_csv_fields, read_constraints, read_matrix,
                     read_vector, write_trace_csv, write_vector)
from .kkt import kkt_residual
from .model import SolverConfig, build_problem
from .solver import run_bdca, run_dca

__all__ = ('ExperimentConfig', 'ConfigError', 'run_experiment')

EXPERIMENTS = ('horn_copositive', 'horn_noncopositive', 'tr_subproblem',
               'single_solve')

RUNS_HEADER = ('experiment', 'n', 'mu', 'radius', 'sigma', 'start',
               'algorithm', 'status', 'iterations', 'phi_star',
               'kkt_stationarity', 'kkt_complementarity', 'kkt_feasibility',
               'wall_time_s', 'error')

SUMMARY_HEADER = ('experiment', 'n', 'mu', 'n_starts',
                  'median_time_ratio_dca_over_bdca', 'median_time_dca_s',
                  'median_time_bdca_s', 'median_iterations_dca',
                  'median_iterations_bdca', 'median_rel_objective_gap')

VERDICT_HEADER = ('matrix_id', 'n', 'mu', 'algorithm', 'n_starts', 'verdict',
                  'witness_phi', 'wall_time_s', 'iterations_total')


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    """Sweep description; see the module docstring for the experiments."""

    experiment: str
    sizes: list = field(default_factory=list)
    n_starts: int = 20
    seed: int = 0
    mu: float | None = None
    threshold: float | None = None
    algorithm: str = 'both'
    out_dir: str = 'bench-out'
    solver: dict = field(default_factory=dict)
    matrix_path: str | None = None
    vector_path: str | None = None
    constraints_path: str | None = None
    workers: int = 1


def _validate(cfg):
    if cfg.experiment not in EXPERIMENTS:
        raise ConfigError(f'unknown experiment {cfg.experiment!r}; '
                          f'choose from {EXPERIMENTS}')
    if cfg.algorithm not in ('dca', 'bdca', 'both'):
        raise ConfigError(f'unknown algorithm {cfg.algorithm!r}')
    if cfg.experiment == 'single_solve':
        missing = [name for name, p in (('--matrix', cfg.matrix_path),
                                        ('--vector', cfg.vector_path),
                                        ('--constraints', cfg.constraints_path))
                   if p is None]
        if missing:
            raise ConfigError(f'single solve requires {" ".join(missing)}')
        return
    if not cfg.sizes:
        raise ConfigError('sizes must be nonempty')
    if cfg.experiment.startswith('horn') and any(n < 3 for n in cfg.sizes):
        raise ConfigError('Horn experiments need sizes >= 3')
    if cfg.n_starts < 1:
        raise ConfigError('n_starts must be >= 1')
    if cfg.workers < 1:
        raise ConfigError('workers must be >= 1')
    unknown = set(cfg.solver) - set(SolverConfig.__dataclass_fields__)
    if unknown:
        raise ConfigError(f'unknown solver overrides: {sorted(unknown)}')


def _algorithms(cfg):
    return ('dca', 'bdca') if cfg.algorithm == 'both' else (cfg.algorithm,)


def _solver_config(cfg):
    base = {}
    if cfg.experiment == 'horn_copositive':
        base = {'d_tol': 1e-9}
    elif cfg.experiment == 'horn_noncopositive':
        threshold = cfg.threshold if cfg.threshold is not None else 0.0
        base = {'d_tol': 1e-9, 'objective_stop': threshold}
    elif cfg.experiment == 'tr_subproblem':
        base = {'d_tol': 1e-8, 'gamma': 4.0}  # larger step growth for boxes
    base.update(cfg.solver)
    try:
        return SolverConfig(**base)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f'bad solver overrides: {exc}') from None


def _start_seed(cfg, n, start, stream):
    return np.random.SeedSequence(entropy=cfg.seed, spawn_key=(n, start, stream))


_RUNNERS = {'dca': run_dca, 'bdca': run_bdca}


def _timed_run(algorithm, problem, x0, solver_cfg):
    """One solver run with timing and KKT verification of the terminal."""
    t0 = time.perf_counter()
    result = _RUNNERS[algorithm](problem, x0, solver_cfg)
    wall = time.perf_counter() - t0
    report = kkt_residual(problem, result.x_star, solver_cfg.active_tol)
    result.kkt_residual = report.stationarity_residual
    return result, report, wall


def _sweep_task(task):
    """Paired runs for one (size, start); shaped for executor.map."""
    problem, extra, n, start, algorithms, solver_cfg, x0 = task
    out = {}
    for alg in algorithms:
        try:
            result, report, wall = _timed_run(alg, problem, x0, solver_cfg)
            out[alg] = {
                'status': result.status.value,
                'iterations': result.n_iterations,
                'phi_star': result.phi_star,
                'sigma': problem.sigma,
                'kkt': (report.stationarity_residual,
                        report.complementarity_residual,
                        report.feasibility_violation),
                'wall': wall,
                'x_star': result.x_star,
                'trace': result.iterations if start == 0 else None,
                'error': '',
            }
        except Exception as exc:  # record and keep sweeping
            out[alg] = {'status': 'error', 'iterations': '', 'phi_star': '',
                        'sigma': problem.sigma, 'kkt': ('', '', ''),
                        'wall': '', 'x_star': None, 'trace': None,
                        'error': str(exc)}
    return (n, start, extra, out)


def _run_rows(experiment, n, mu, radius, start, outcomes, algorithms):
    rows = []
    for alg in algorithms:
        o = outcomes[alg]
        rows.append([
            experiment, n,
            fmt(mu) if mu is not None else '',
            fmt(radius) if radius is not None else '',
            fmt(o['sigma']),
            start, alg, o['status'], o['iterations'],
            fmt(o['phi_star']) if o['phi_star'] != '' else '',
            fmt(o['kkt'][0]) if o['kkt'][0] != '' else '',
            fmt(o['kkt'][1]) if o['kkt'][1] != '' else '',
            fmt(o['kkt'][2]) if o['kkt'][2] != '' else '',
            fmt(o['wall']) if o['wall'] != '' else '',
            o['error'],
        ])
    return rows


def _write_csv(path, header, rows):
    with open(path, 'w', newline='') as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _map_tasks(tasks, workers):
    if workers <= 1:
        return [_sweep_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sweep_task, tasks))


def _summarize(experiment, n, mu, n_starts, per_start, algorithms):
    """Per-size summary row; ratio statistics need both algorithms."""
    row = [experiment, n, fmt(mu) if mu is not None else '', n_starts]
    if 'dca' in algorithms and 'bdca' in algorithms:
        pairs = [(s['dca'], s['bdca']) for s in per_start
                 if s['dca']['status'] != 'error' and s['bdca']['status'] != 'error']
        if pairs:
            ratios = [d['wall'] / b['wall'] for d, b in pairs]
            gaps = [abs(b['phi_star'] - d['phi_star']) / (1.0 + abs(d['phi_star']))
                    for d, b in pairs]
            row += [fmt(np.median(ratios)),
                    fmt(np.median([d['wall'] for d, _ in pairs])),
                    fmt(np.median([b['wall'] for _, b in pairs])),
                    fmt(np.median([d['iterations'] for d, _ in pairs])),
                    fmt(np.median([b['iterations'] for _, b in pairs])),
                    fmt(np.median(gaps))]
            return row
    row += [''] * 6
    return row


def _horn_verdict_rows(matrix_id, A, n, mu, threshold, per_start, algorithms,
                       out_dir):
    rows = []
    for alg in algorithms:
        outcomes = [s[alg] for s in per_start if s[alg]['status'] != 'error']
        wall = sum(o['wall'] for o in outcomes)
        iters = sum(o['iterations'] for o in outcomes)
        witness = None
        value = None
        for o in outcomes:
            if o['phi_star'] < threshold and o['x_star'] is not None:
                candidate = np.maximum(o['x_star'], 0.0)
                form = quad_form(A, candidate)
                if form < -quad_form_rounding_guard(A, candidate):
                    witness, value = candidate, form
                    break
        if witness is not None:
            sidecar = Path(out_dir) / f'witness_{matrix_id}_{alg}.txt'
            write_vector(sidecar, witness)
            rows.append([matrix_id, n, fmt(mu), alg, len(outcomes),
                         'non_copositive', fmt(value), fmt(wall), iters])
        else:
            rows.append([matrix_id, n, fmt(mu), alg, len(outcomes),
                         'undecided', '', fmt(wall), iters])
    return rows


def _run_horn(cfg, out_dir):
    mu = cfg.mu if cfg.mu is not None else (
        2.0 if cfg.experiment == 'horn_copositive' else 1.9)
    threshold = cfg.threshold if cfg.threshold is not None else 0.0
    solver_cfg = _solver_config(cfg)
    algorithms = _algorithms(cfg)

    run_rows, summary_rows, verdict_rows, files = [], [], [], []
    for n in cfg.sizes:
        A = horn_family(n, mu)
        problem = copositivity_problem(A)
        tasks = []
        for start in range(cfg.n_starts):
            x0 = random_orthant_ball_start(n, _start_seed(cfg, n, start, 0))
            tasks.append((problem, None, n, start, algorithms, solver_cfg, x0))
        results = _map_tasks(tasks, cfg.workers)
        per_start = []
        for (size, start, _extra, outcomes) in results:
            per_start.append(outcomes)
            run_rows += _run_rows(cfg.experiment, size, mu, None, start,
                                  outcomes, algorithms)
            for alg in algorithms:
                trace = outcomes[alg]['trace']
                if trace is not None:
                    path = out_dir / f'trace_{cfg.experiment}_n{size}_{alg}.csv'
                    write_trace_csv(path, trace)
                    files.append(path)
        summary_rows.append(_summarize(cfg.experiment, n, mu, cfg.n_starts,
                                       per_start, algorithms))
        verdict_rows += _horn_verdict_rows(f'horn_n{n}_mu{fmt(mu)}', A, n, mu,
                                           threshold, per_start, algorithms,
                                           out_dir)
    return run_rows, summary_rows, verdict_rows, files


def _run_tr(cfg, out_dir):
    solver_cfg = _solver_config(cfg)
    algorithms = _algorithms(cfg)
    run_rows, summary_rows, files = [], [], []
    for n in cfg.sizes:
        tasks = []
        for start in range(cfg.n_starts):
            inst = random_tr_instance(n, _start_seed(cfg, n, start, 0))
            x0 = random_box_start(n, inst.r, _start_seed(cfg, n, start, 1))
            problem = tr_problem(inst)
            tasks.append((problem, inst.r, n, start, algorithms, solver_cfg, x0))
        results = _map_tasks(tasks, cfg.workers)
        per_start = []
        for (size, start, radius, outcomes) in results:
            per_start.append(outcomes)
            run_rows += _run_rows(cfg.experiment, size, None, radius, start,
                                  outcomes, algorithms)
            for alg in algorithms:
                trace = outcomes[alg]['trace']
                if trace is not None:
                    path = out_dir / f'trace_{cfg.experiment}_n{size}_{alg}.csv'
                    write_trace_csv(path, trace)
                    files.append(path)
        summary_rows.append(_summarize(cfg.experiment, n, None, cfg.n_starts,
                                       per_start, algorithms))
    return run_rows, summary_rows, [], files


def _run_single(cfg, out_dir):
    Q = read_matrix(cfg.matrix_path)
    q = read_vector(cfg.vector_path)
    constraints = read_constraints(cfg.constraints_path)
    problem = build_problem(Q, q, constraints)
    solver_cfg = _solver_config(cfg)
    x0 = constraints.project(np.zeros(problem.n))
    rows = []
    files = []
    for alg in _algorithms(cfg):
        result, report, wall = _timed_run(alg, problem, x0, solver_cfg)
        trace_path = out_dir / f'trace_single_{alg}.csv'
        write_trace_csv(trace_path, result.iterations)
        files.append(trace_path)
        rows.append([alg, result.status.value, result.n_iterations,
                     fmt(result.phi_star), fmt(wall)] + kkt_csv_fields(report))
    path = out_dir / 'solve_summary.csv'
    _write_csv(path, ('algorithm', 'status', 'iterations', 'phi_star',
                      'wall_time_s', 'kkt_stationarity', 'kkt_complementarity',
                      'kkt_feasibility', 'kkt_multipliers'), rows)
    files.append(path)
    return {'runs': rows, 'summaries': [], 'verdicts': [], 'files': files}


def run_experiment(cfg):
    """Run a configured sweep; returns row data and the files written.

    Raises ConfigError for invalid configurations and OSError for output
    problems; per-run solver failures are recorded in the runs CSV without
    aborting the sweep.
    """
    _validate(cfg)
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if cfg.experiment == 'single_solve':
        return _run_single(cfg, out_dir)
    if cfg.experiment in ('horn_copositive', 'horn_noncopositive'):
        run_rows, summary_rows, verdict_rows, files = _run_horn(cfg, out_dir)
    else:
        run_rows, summary_rows, verdict_rows, files = _run_tr(cfg, out_dir)

    runs_path = out_dir / f'runs_{cfg.experiment}.csv'
    _write_csv(runs_path, RUNS_HEADER, run_rows)
    files.append(runs_path)
    summary_path = out_dir / f'summary_{cfg.experiment}.csv'
    _write_csv(summary_path, SUMMARY_HEADER, summary_rows)
    files.append(summary_path)
    if verdict_rows:
        verdict_path = out_dir / f'verdicts_{cfg.experiment}.csv'
        _write_csv(verdict_path, VERDICT_HEADER, verdict_rows)
        files.append(verdict_path)
    return {'runs': run_rows, 'summaries': summary_rows,
            'verdicts': verdict_rows, 'files': files}
