"""Command-line interface for the FlipIt simulation lab.

Subcommands run experiments and sweeps, compute the optimal benefit against
Periodic and Exponential opponents, and check configuration files.
"""
import argparse
import sys
from typing import List, Optional

from core import ExperimentProcessor
from errors import ConfigurationError, DropoutOptimalError
from oracles import oracle_exp, oracle_per
from utils import configure_logging
from version import __version__

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2


class _Parser(argparse.ArgumentParser):
    """ArgumentParser reporting usage errors as validation errors (exit code 1)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"[ERROR] {message}", file=sys.stderr)
        raise SystemExit(EXIT_VALIDATION)


def build_parser() -> argparse.ArgumentParser:
    """Create the argument parser with all subcommands.

    Returns:
        argparse.ArgumentParser: The parser
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, metavar='N', default=argparse.SUPPRESS,
                        help='Base seed (overrides the file and FLIPIT_LAB_SEED)')
    common.add_argument('--runs', type=int, metavar='N', default=argparse.SUPPRESS,
                        help='Number of independent runs')
    common.add_argument('--horizon', type=int, metavar='TICKS', default=argparse.SUPPRESS,
                        help='Ticks per run')
    common.add_argument('--out', metavar='PATH', default=argparse.SUPPRESS,
                        help='Output folder')
    common.add_argument('--jobs', '-j', type=int, metavar='N', default=argparse.SUPPRESS,
                        help='Worker processes (default 1)')
    common.add_argument('--verbose', '-v', action='count', default=argparse.SUPPRESS,
                        help='More log output (-vv for debug)')

    parser = _Parser(
        prog='flipit-lab',
        description='Discrete-time FlipIt simulation lab: QFlip, Greedy and renewal opponents',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        parents=[common],
        epilog="""
Examples:
  %(prog)s simulate configs/periodic_anchor.json
  %(prog)s sweep configs/eps_p_heatmap.json --runs 10 --jobs 4
  %(prog)s oracle exp --lambda 0.01 --cost 10
  %(prog)s validate configs/greedy_vs_qflip.json

Exit Codes:
  0 - Success
  1 - Validation error (arguments or configuration)
  2 - Runtime error
        """
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    commands = parser.add_subparsers(dest='command', metavar='COMMAND')
    commands.required = True

    simulate = commands.add_parser('simulate', parents=[common], help='Run one experiment file')
    simulate.add_argument('config', metavar='CONFIG', help='Experiment file (JSON or YAML)')

    sweep = commands.add_parser('sweep', parents=[common], help='Run a parameter sweep file')
    sweep.add_argument('config', metavar='CONFIG', help='Sweep file (JSON or YAML)')

    validate = commands.add_parser('validate', parents=[common], help='Check an experiment file without running it')
    validate.add_argument('config', metavar='CONFIG', help='Experiment file (JSON or YAML)')

    oracle = commands.add_parser('oracle', parents=[common], help='Optimal benefit against a renewal opponent')
    opponents = oracle.add_subparsers(dest='opponent', metavar='OPPONENT')
    opponents.required = True
    per = opponents.add_parser('per', parents=[common], help='Periodic opponent')
    per.add_argument('--delta', type=int, required=True, metavar='D', help='Opponent period')
    per.add_argument('--cost', type=float, required=True, metavar='C', help='Agent move cost')
    exp = opponents.add_parser('exp', parents=[common], help='Exponential opponent')
    exp.add_argument('--lambda', dest='rate', type=float, required=True, metavar='L', help='Opponent rate')
    exp.add_argument('--cost', type=float, required=True, metavar='C', help='Agent move cost')
    return parser


def _overrides(args: argparse.Namespace) -> dict:
    return {
        'base_seed': getattr(args, 'seed', None),
        'runs': getattr(args, 'runs', None),
        'game.horizon': getattr(args, 'horizon', None),
        'output_dir': getattr(args, 'out', None),
    }


def _report_failure(result: dict) -> int:
    print(f"[ERROR] {result['error']}", file=sys.stderr)
    if result['error_kind'] == 'validation':
        print("   Fix the configuration and run again", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_RUNTIME


def _oracle(args: argparse.Namespace) -> int:
    try:
        if args.opponent == 'per':
            label = f"Per(delta={args.delta}), cost {args.cost}"
            value = oracle_per(args.delta, args.cost)
            print(f"[OK] {label}: move one tick after each opponent move")
            print(f"   optimal average benefit {value!r}")
        else:
            label = f"Exp(lambda={args.rate}), cost {args.cost}"
            period, value = oracle_exp(args.rate, args.cost)
            print(f"[OK] {label}: play Periodic with period {period}")
            print(f"   optimal average benefit {value!r}")
    except DropoutOptimalError as exc:
        print(f"[OK] {label}: dropping out is optimal")
        print(f"   optimal average benefit {exc.benefit!r} ({exc})")
    except ConfigurationError as exc:
        print(f"[ERROR] {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def _validate(processor: ExperimentProcessor) -> int:
    result = processor.validate()
    if not result['success']:
        return _report_failure(result)
    config = result['config']
    reference = 'unknown' if config.reference is None else repr(config.reference)
    seeds = result['seeds']
    shown = ", ".join(str(seed) for seed in seeds[:5]) + (", ..." if len(seeds) > 5 else "")
    print(f"[OK] {processor.config_path} is valid")
    print(f"   opponent {config.opponent.describe()} (mean gap {config.opponent.mean()!r})")
    print(f"   agent {config.agent.kind.value}, scheme {config.agent.scheme.value}, "
          f"horizon {config.game.horizon}, cost_1 {config.game.cost_1}")
    print(f"   reference benefit {reference}; {config.runs} run(s), seeds {shown}")
    return EXIT_OK


def _simulate(processor: ExperimentProcessor, verbose: int) -> int:
    result = processor.simulate()
    if not result['success']:
        return _report_failure(result)
    config = result['config']
    summary = result['summary']
    print(f"[OK] Simulation finished: {summary.runs} run(s) x {config.game.horizon} ticks")
    line = (f"   average benefit {summary.mean_benefit_1:.6f} "
            f"(min {summary.min_benefit_1:.6f}, max {summary.max_benefit_1:.6f})")
    if summary.reference is not None:
        line += f", reference {summary.reference:.6f}, non-optimal {summary.non_optimal_count}/{summary.runs}"
    print(line)
    if verbose:
        for name, path in result['files'].items():
            print(f"   {name}: {path}")
    else:
        print(f"   Results: {config.output_dir}")
    return EXIT_OK


def _sweep(processor: ExperimentProcessor) -> int:
    result = processor.sweep()
    if not result['success']:
        return _report_failure(result)
    print(f"[OK] Sweep finished: {len(result['points'])} grid point(s)")
    print(f"   Results: {result['output_dir']}")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the CLI.

    Args:
        argv: Arguments without the program name, sys.argv[1:] if None

    Returns:
        int: Exit code (0 success, 1 validation error, 2 runtime error)
    """
    # Parse arguments and set up logging
    args = build_parser().parse_args(argv)
    verbose = getattr(args, 'verbose', 0)
    configure_logging(verbose)

    # Oracles need no configuration file
    if args.command == 'oracle':
        return _oracle(args)

    # Validate inputs
    jobs = getattr(args, 'jobs', 1)
    if jobs < 1:
        print("[ERROR] --jobs must be >= 1", file=sys.stderr)
        return EXIT_VALIDATION

    # Dispatch to the subcommand
    processor = ExperimentProcessor(args.config, _overrides(args), jobs)
    if args.command == 'validate':
        return _validate(processor)
    if args.command == 'simulate':
        return _simulate(processor, verbose)
    return _sweep(processor)


if __name__ == "__main__":
    sys.exit(main())
