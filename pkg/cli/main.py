"""
Command line: ``run``, ``sweep`` and ``describe``.

Exit codes: 0 when every verdict holds, 2 when any verdict is violated,
1 on a config or execution error.
"""
import argparse

import constants
from errors import LevyError
from log import log_exception
from .describe import describe
from .runner import run, sweep


def build_parser():
    parser = argparse.ArgumentParser(
        prog='levymax',
        description='Monte Carlo checks of maximal inequalities for Poisson '
                    'and Levy stochastic integrals, and a stochastic '
                    'quasi-geostrophic solver.',
    )
    commands = parser.add_subparsers(dest='command', required=True)

    def common(sub):
        sub.add_argument('config', help='experiment config (TOML)')
        sub.add_argument('--seed', type=int, help='override the config seed')
        sub.add_argument('--out-dir', help='output directory')
        sub.add_argument('--jobs', type=int,
                         help='worker threads, default all cores')

    common(commands.add_parser('run', help='run one experiment'))
    sweep_parser = commands.add_parser(
        'sweep', help='run an experiment over a parameter grid'
    )
    common(sweep_parser)
    sweep_parser.add_argument(
        '--grid', action='append', required=True, metavar='KEY=V1,V2',
        help='sweep values for p, scale, lam, R or dt; repeat for a product'
    )
    describe_parser = commands.add_parser(
        'describe', help='print what an experiment kind checks'
    )
    describe_parser.add_argument('kind')
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    constants.load_overrides()
    try:
        if args.command == 'describe':
            print(describe(args.kind))
            return 0
        if args.command == 'run':
            return run(args.config, args.seed, args.out_dir, args.jobs)
        return sweep(args.config, args.grid, args.seed, args.out_dir,
                     args.jobs)
    except (LevyError, OSError):
        log_exception('cli', 'in {}'.format(args.command))
        return 1
