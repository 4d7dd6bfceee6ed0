"""
Command-line interface.

    run --example N --scheme {1|2|3|A} [--nx ...] [--tfinal ...] [--out DIR]
    run --config FILE
    steady --example N [--scheme ...]
    compare --example N
    converge --model M --meshes a,b,c
"""

import argparse
import logging
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

from src.errors import SolverError
from src.experiments.config import DEFAULT_OUTPUT_DIR, example_config, load_config
from src.experiments.convergence import convergence_study, write_convergence
from src.experiments.presets import CONVERGENCE_PRESETS
from src.experiments.runner import compare, run, steady_state_builder
from src.scheme.variants import SchemeOptions, SchemeVariant


logger = logging.getLogger(__name__)


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    return {
        'grid': {'nx': getattr(args, 'nx', None)},
        'time': {'t_final': getattr(args, 'tfinal', None)},
        'output': {'directory': getattr(args, 'out', None)},
    }


def _meshes(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Invalid mesh list: {text}. Expected e.g. 40,80,160")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='Well-balanced fifth-order A-WENO solver')
    sub = parser.add_subparsers(dest='command', required=True)

    def overrides(p):
        p.add_argument('--nx', type=int, help='Number of cells per direction')
        p.add_argument('--tfinal', type=float, help='Final time')
        p.add_argument('--out', help=f'Output directory (default: {DEFAULT_OUTPUT_DIR})')

    run_parser = sub.add_parser('run', help='Run one example')
    source = run_parser.add_mutually_exclusive_group(required=True)
    source.add_argument('--example', type=int, help='Example number 1-8')
    source.add_argument('--config', help='Config file of key = value lines')
    run_parser.add_argument('--scheme', help='Scheme variant: 1, 2, 3 or A (default: 1)')
    overrides(run_parser)

    steady_parser = sub.add_parser('steady', help='Build and store an example steady state')
    steady_parser.add_argument('--example', type=int, required=True)
    steady_parser.add_argument('--scheme', default='1', help='Scheme whose equilibrium is settled (example 4)')
    overrides(steady_parser)

    compare_parser = sub.add_parser('compare', help='Run an example with each of its schemes')
    compare_parser.add_argument('--example', type=int, required=True)
    compare_parser.add_argument('--schemes', help='Comma-separated variants (default: the example\'s)')
    overrides(compare_parser)

    converge_parser = sub.add_parser('converge', help='Self-convergence study on a smooth preset')
    converge_parser.add_argument('--model', required=True, choices=sorted(CONVERGENCE_PRESETS))
    converge_parser.add_argument('--meshes', type=_meshes, default=[40, 80, 160, 320])
    converge_parser.add_argument('--scheme', default='1')
    converge_parser.add_argument('--reconstruction', default='weno')
    converge_parser.add_argument('--no-corrections', action='store_true')
    converge_parser.add_argument('--tfinal', type=float)
    converge_parser.add_argument('--out', default=DEFAULT_OUTPUT_DIR)
    return parser


def _run(args) -> None:
    overrides = _overrides(args)
    if args.config:
        overrides['scheme'] = {'variant': args.scheme}
        config = load_config(args.config, overrides)
    else:
        config = example_config(args.example, args.scheme or '1', overrides)
    report = run(config)
    print(f"✓ {report.problem} {report.scheme}: linf={report.linf:.3e}, "
          f"oscillations={report.oscillations}, steps={report.steps}")


def _compare(args) -> None:
    variants = [SchemeVariant.parse(v.strip()).value for v in args.schemes.split(',')] if args.schemes else None
    reports = compare(args.example, _overrides(args), variants)
    for report in reports:
        print(f"  {report.scheme:>8}: linf={report.linf:.3e}  tv={report.total_variation:.3e}  "
              f"oscillations={report.oscillations}")


def _converge(args) -> None:
    options = SchemeOptions(args.scheme, args.reconstruction, not args.no_corrections)
    table = convergence_study(args.model, options, args.meshes, args.tfinal)
    path = write_convergence(table, args.out, args.model, options.variant.label)
    print(table.to_string(index=False))
    print(f"✓ Convergence table saved to {path}")


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(level=logging.INFO)
    load_dotenv()
    args = build_parser().parse_args(argv)
    try:
        if args.command == 'run':
            _run(args)
        elif args.command == 'steady':
            path = steady_state_builder(example_config(args.example, args.scheme, _overrides(args)))
            print(f"✓ Steady state saved to {path}")
        elif args.command == 'compare':
            _compare(args)
        else:
            _converge(args)
    except SolverError as e:
        logger.error(f"{args.command} failed: {str(e)}")
        print(f"✗ {args.command} failed: {str(e)}")
        return 1
    return 0
