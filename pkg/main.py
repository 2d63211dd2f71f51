#!/usr/bin/env python3
"""
Main script for the epidemic toolkit
Subcommands: ingest, metrics, stage, simulate, sweep.
"""

import argparse
import logging
import sys
from typing import Dict, List, Optional

from epikit import EpiKit
from models.registry import AVAILABLE_MODELS
from utils.config import SWEEP_PARAMETERS, RunConfig, resolve_config
from utils.errors import EpiKitError

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"


def setup_logging(verbose: bool = False) -> None:
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING,
                        format=LOG_FORMAT, force=True)


def _common_parser() -> argparse.ArgumentParser:
    """Flags shared by every subcommand. Defaults are None so that
    environment and config-file values can fill the gaps."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='Flat key=value config file (default: $EPIKIT_CONFIG)')
    common.add_argument('--out-dir', '-o', help='Output directory (default: output)')
    common.add_argument('--format', choices=['csv', 'json'], help='Table and series format (default: csv)')
    common.add_argument('--no-timestamp', action='store_true', default=None,
                        help='Omit generation time from outputs for byte-identical reruns')
    common.add_argument('--jobs', type=int,
                        help='Worker processes for parameter sweeps; other subcommands run in one process (default: 1)')
    common.add_argument('--verbose', '-v', action='store_true', default=None, help='Enable debug logging')

    data = common.add_argument_group('data')
    data.add_argument('--input', '-i', help="Case-record CSV file, '-' for standard input")
    data.add_argument('--region', help='Region code or state name to report on')
    data.add_argument('--as-of', help='Cut-off date, YYYY-MM-DD or DD/MM/YYYY')
    data.add_argument('--iso-dates', action='store_true', default=None,
                      help='Input dates are YYYY-MM-DD instead of DD/MM/YYYY')
    data.add_argument('--k-max', type=int, help='Contact histogram buckets (default: 20)')
    data.add_argument('--warnings-jsonl', help='Write parse warnings as JSON lines to this file')

    model = common.add_argument_group('model')
    model.add_argument('--r0', type=float, help='Calibrate tau = r0 * alpha2 (overrides --rc/--pt)')
    model.add_argument('--alpha2', type=float, help='Recovery rate per day (default: 1/14)')
    model.add_argument('--gamma', type=float, help='Death rate per day (default: 0)')
    model.add_argument('--alpha', type=float, help='SIS recovery-to-susceptible rate (default: 0)')
    model.add_argument('--rc', type=float, help='Contacts per person per day (default: 1)')
    model.add_argument('--pt', type=float, help='Transmission probability per contact (default: 0.3)')
    model.add_argument('--foi-scaling', choices=['paper', 'fractional'],
                       help='Force of infection: tau*I/M (fractional, default) or tau*I/M*100 (paper)')
    model.add_argument('--dt', type=float, help='RK4 step in days (default: 0.1)')
    model.add_argument('--horizon', type=float, help='Days to integrate (default: 365)')
    model.add_argument('--population', type=float, help='Population size M (default: 1000)')
    model.add_argument('--i0', type=float, help='Initially infectious persons (default: 10)')
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Epidemic spread metrics, transmission states and compartmental models",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Validate a case-record file
  python main.py ingest --input data/covid19_india_sample.csv

  # Reproduction number and fatality tables
  python main.py metrics --input data/covid19_india_sample.csv --out-dir out

  # SIR end time for the India calibration
  python main.py simulate --calibrate-india

  # Sweep the transmission probability
  python main.py sweep --sweep p_t --values 0.1,0.2,0.3
        """
    )
    common = _common_parser()
    subparsers = parser.add_subparsers(dest='command', required=True)

    ingest = subparsers.add_parser('ingest', parents=[common], help='Parse and validate case records')
    ingest.add_argument('--normalized-out', help='Write the normalized records as CSV to this file')

    subparsers.add_parser('metrics', parents=[common], help='R0 and case fatality tables and series')
    subparsers.add_parser('stage', parents=[common], help='Transmission-state classification')

    simulate = subparsers.add_parser('simulate', parents=[common], help='Integrate a compartmental model')
    simulate.add_argument('--model', choices=AVAILABLE_MODELS, help='Model to integrate (default: sir)')
    simulate.add_argument('--eps-i', type=float, help='Disease-free threshold in persons (default: 1)')
    simulate.add_argument('--eps-deriv', type=float, help='Equilibrium derivative threshold (default: 0.001)')
    simulate.add_argument('--calibrate-india', action='store_true', default=None,
                          help='Use the shipped India calibration (R0 1.79, 12079 active cases)')

    sweep = subparsers.add_parser('sweep', parents=[common], help='Empirical parameter studies')
    sweep.add_argument('--sweep', choices=SWEEP_PARAMETERS, help='Parameter to sweep (default: susceptible_pct)')
    sweep.add_argument('--values', help='Comma-separated sweep values')
    sweep.add_argument('--infectious', type=float, help='Infectious persons I (default: 10)')
    sweep.add_argument('--susceptible', type=float, help='Susceptible persons S (default: population)')
    sweep.add_argument('--recovery-slope', type=float, help='Recovery-rate ramp per day (default: 0.002)')
    sweep.add_argument('--fatality-slope', type=float, help='Death-rate ramp per day (default: 0.0005)')
    return parser


def load_run_config(args: argparse.Namespace) -> RunConfig:
    values = {k: v for k, v in vars(args).items() if k not in ('command', 'config')}
    return resolve_config(values, subcommand=args.command, config_path=args.config).validate()


def run_command(kit: EpiKit, command: str) -> Dict:
    """Run one subcommand and print its summary."""
    if command == 'ingest':
        report = kit.ingest()
        print(f"✓ Records: {report['records']}")
        print(f"✓ Edges: {report['edges']}")
        print(f"✓ Warnings: {report['warning_count']}")
        return report

    if command == 'metrics':
        result = kit.metrics()
        national = result['table2'][-1]
        if national['avg_r0'] is not None:
            print(f"✓ National R0: {national['avg_r0']:.2f}")
        cfr = result['table3'][-1]['cfr_percent']
        if cfr is not None:
            print(f"✓ National case fatality rate: {cfr:.2f}%")
        for name, check in result['reference'].items():
            if check['within_tolerance'] is not None:
                verdict = "within" if check['within_tolerance'] else "outside"
                print(f"✓ {name} vs published {check['reference']}: {verdict} {check['tolerance']:.0%}")
    elif command == 'stage':
        result = kit.stage()
        national = result['summary'][-1]
        print(f"✓ State 1/2/3: {national['state1_pct']:.2f}% / {national['state2_pct']:.2f}% / "
              f"{national['state3_pct']:.2f}%")
        print(f"✓ Unclassified (source unknown): {national['unclassified']}")
    elif command == 'simulate':
        result = kit.simulate()
        if 'end_time' in result:
            print(f"✓ {result['end_time'].message}")
    else:
        result = kit.sweep()

    for path in result['paths']:
        print(f"✓ Wrote {path}")
    return result


def main(argv: Optional[List[str]] = None) -> int:
    """Main function with command line interface."""
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(bool(args.verbose))

    try:
        config = load_run_config(args)
        kit = EpiKit(config)
        run_command(kit, args.command)
        print(f"📁 Output directory: {config.out_dir}")
        return 0
    except EpiKitError as e:
        print(f"✗ {type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code
    except KeyboardInterrupt:
        print("\nProcessing interrupted by user.", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
