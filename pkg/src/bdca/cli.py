"""Benchmark command line.

    bdca-bench copositivity  [--config cfg.json] [--sizes 1000,1250] [--mu 2.0] ...
    bdca-bench trust-region  [--config cfg.json] [--sizes 1000] [--starts 20] ...
    bdca-bench solve         --matrix Q.txt --vector q.txt --constraints F.txt ...

Flags override values from the JSON config file. Exit codes: 0 on sweep
completion, 2 on configuration errors, 3 on I/O errors. The environment
variable BDCA_WORKERS sets the worker-process count (default 1, which keeps
timings deterministic).
"""

import argparse
import json
import os
import sys

from .bench import ConfigError, ExperimentConfig, run_experiment
from .fileio import FileFormatError

_EXPERIMENT_BY_COMMAND = {
    'copositivity': 'horn_copositive',
    'trust-region': 'tr_subproblem',
    'solve': 'single_solve',
}


def _parse_sizes(text):
    try:
        return [int(tok) for tok in text.replace(',', ' ').split()]
    except ValueError:
        raise ConfigError(f'--sizes expects integers, got {text!r}') from None


def _build_parser():
    parser = argparse.ArgumentParser(
        prog='bdca-bench',
        description='DCA/BDCA benchmark sweeps with CSV output')
    sub = parser.add_subparsers(dest='command', required=True)
    for command in _EXPERIMENT_BY_COMMAND:
        p = sub.add_parser(command)
        p.add_argument('--config', help='JSON file of ExperimentConfig fields')
        p.add_argument('--sizes', help='comma-separated problem sizes')
        p.add_argument('--starts', type=int, help='starting points per size')
        p.add_argument('--seed', type=int)
        p.add_argument('--mu', type=float, help='Horn-family parameter')
        p.add_argument('--threshold', type=float,
                       help='negativity stop for non-copositivity runs')
        p.add_argument('--algorithm', choices=('dca', 'bdca', 'both'))
        p.add_argument('--out', help='output directory')
        if command == 'copositivity':
            p.add_argument('--noncopositive', action='store_true',
                           help='run the mu<2 negativity experiment instead')
        if command == 'solve':
            p.add_argument('--matrix', help='matrix file (required)')
            p.add_argument('--vector', help='vector file (required)')
            p.add_argument('--constraints', help='constraint file (required)')
    return parser


def _config_from_args(args):
    fields = {}
    if args.config:
        try:
            with open(args.config) as fh:
                fields = json.load(fh)
        except OSError as exc:
            raise FileFormatError(f'cannot read config: {exc}') from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f'config is not valid JSON: {exc}') from None
        if not isinstance(fields, dict):
            raise ConfigError('config must be a JSON object of key-value pairs')

    experiment = _EXPERIMENT_BY_COMMAND[args.command]
    if getattr(args, 'noncopositive', False):
        experiment = 'horn_noncopositive'
    elif args.command == 'copositivity' and fields.get('experiment') in (
            'horn_copositive', 'horn_noncopositive'):
        experiment = fields['experiment']
    fields['experiment'] = experiment

    if args.sizes is not None:
        fields['sizes'] = _parse_sizes(args.sizes)
    if args.starts is not None:
        fields['n_starts'] = args.starts
    if args.seed is not None:
        fields['seed'] = args.seed
    if args.mu is not None:
        fields['mu'] = args.mu
    if args.threshold is not None:
        fields['threshold'] = args.threshold
    if args.algorithm is not None:
        fields['algorithm'] = args.algorithm
    if args.out is not None:
        fields['out_dir'] = args.out
    if args.command == 'solve':
        if args.matrix is not None:
            fields['matrix_path'] = args.matrix
        if args.vector is not None:
            fields['vector_path'] = args.vector
        if args.constraints is not None:
            fields['constraints_path'] = args.constraints

    try:
        default_workers = int(os.environ.get('BDCA_WORKERS', '1'))
    except ValueError:
        raise ConfigError('BDCA_WORKERS must be an integer') from None
    fields.setdefault('workers', default_workers)
    known = set(ExperimentConfig.__dataclass_fields__)
    unknown = set(fields) - known
    if unknown:
        raise ConfigError(f'unknown config keys: {sorted(unknown)}')
    return ExperimentConfig(**fields)


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        outcome = run_experiment(cfg)
    except (OSError, FileFormatError) as exc:
        print(f'i/o error: {exc}', file=sys.stderr)
        return 3
    except (ConfigError, ValueError) as exc:
        # bad flags, bad JSON, or inconsistent problem files
        print(f'config error: {exc}', file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f'solver error: {exc}', file=sys.stderr)
        return 1
    for row in outcome['summaries']:
        print('summary:', ','.join(str(v) for v in row))
    for row in outcome['verdicts']:
        print('verdict:', ','.join(str(v) for v in row))
    for path in outcome['files']:
        print('wrote', path)
    return 0


if __name__ == '__main__':
    sys.exit(main())
