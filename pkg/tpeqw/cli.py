"""
Command line front end.

    tpeqw [--config PATH] [--out DIR] [--seed N] [--format {json,text}] [-v] COMMAND

Commands: rate, sweep, bell, events, schema. Every command but `schema` writes
its result document to DIR/<command>.json and prints it to standard output.

Exit status: 0 on success, 1 when a computation fails, 2 for configuration and
argument errors. Warnings never change the exit status.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from .artifacts import write_curve_csv, write_document, write_events_csv
from .bands import PolarizationGeometry
from .config import RunConfig, load_config
from .entanglement import OPTIMAL_SETTINGS, accidental_degraded_state, chsh_value, mc_chsh
from .errors import ConfigError, ConvergenceError, DomainError, TpeqwException
from .events import MAX_SEED, overlap_fraction, simulate_events
from .logging import log
from .rate import (
    closed_form_rate,
    pair_overlap_probability,
    pdc_comparison,
    quadrature_rate,
    spectral_sweep,
)
from .schemas import ResultDocument, make_config_template

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

NO_PAIRS = 'The pair rate is zero at this operating point'


def _warn(warnings: List[str], message: str):
    if message:
        log.warning(message)
        warnings.append(message)


def _document(config: RunConfig, command: str, outputs: Dict[str, object], warnings: List[str]) -> ResultDocument:
    return ResultDocument(command=command, inputs=config.echo(), outputs=outputs, warnings=tuple(warnings))


def cmd_rate(config: RunConfig) -> ResultDocument:
    """Closed-form rate at the configured operating point, with its derived figures"""
    warnings: List[str] = []
    inputs = config.rate_inputs()
    _warn(warnings, inputs.cavity.separation_warning())
    result = closed_form_rate(inputs)
    tau_cav = config.tau_cav
    outputs = {
        'rate': result.rate,
        'rate_detected': result.rate_detected,
        'tau_2ph': result.tau_2ph if result.rate > 0 else None,
        'cavity_lifetime': tau_cav,
        'pair_overlap_probability': pair_overlap_probability(result.rate, tau_cav),
        'carrier_number': inputs.carrier_number,
        'cell_count': inputs.geometry.cell_count,
    }
    if result.rate > 0:
        outputs['pdc_orders'] = pdc_comparison(result.rate, config.run.pdc_baseline)
    else:
        _warn(warnings, f'{NO_PAIRS}, tau_2ph, pdc_orders and quadrature_ratio are not reported')
    for geom in PolarizationGeometry:
        outputs[f'rate_{geom.value}'] = closed_form_rate(inputs, geom).rate
    try:
        quadrature = quadrature_rate(inputs, config.run.quadrature_grid)
    except ConvergenceError as e:
        _warn(warnings, str(e))
    else:
        outputs['quadrature_rate'] = quadrature
        if result.rate > 0:
            outputs['quadrature_ratio'] = quadrature / result.rate
    return _document(config, 'rate', outputs, warnings)


def cmd_sweep(config: RunConfig, out: Path) -> Tuple[ResultDocument, Path]:
    """Rate against the signal wavelength, written to DIR/sweep.csv"""
    warnings: List[str] = []
    run = config.run
    lambda_min, lambda_max = config.sweep_range()
    curve = spectral_sweep(config.rate_inputs(), lambda_min, lambda_max, run.sweep_steps, workers=run.workers)
    if curve.unresolved:
        _warn(warnings, f'{curve.unresolved} sweep points have overlapping signal and idler resonances')
    path = write_curve_csv(curve, out / 'sweep.csv')
    peak_lambda, peak_rate = curve.peak()
    outputs = {
        'points': len(curve.rates),
        'peak_lambda_s_nm': peak_lambda,
        'peak_rate': peak_rate,
        'min_rate': min(curve.rates),
        'csv': str(path),
    }
    return _document(config, 'sweep', outputs, warnings), path


def _overlap(config: RunConfig, rate: float) -> float:
    if config.run.overlap_probability is not None:
        return config.run.overlap_probability
    return pair_overlap_probability(rate, config.tau_cav)


def cmd_bell(config: RunConfig) -> ResultDocument:
    """Analytic and Monte Carlo CHSH values for the accidental-degraded state"""
    warnings: List[str] = []
    inputs = config.rate_inputs()
    rate = closed_form_rate(inputs).rate
    overlap = _overlap(config, rate)
    state = accidental_degraded_state(inputs.cavity.omega_i, inputs.cavity.omega_s, overlap)
    analytic = chsh_value(state, *OPTIMAL_SETTINGS)
    if analytic <= 2:
        _warn(warnings, f'S = {analytic:.6f} does not violate the classical bound 2')
    outputs = {
        'chsh_analytic': analytic,
        'purity': state.purity,
        'overlap_probability': overlap,
        'events': 0,
    }
    if rate > 0:
        trace = simulate_events(rate, config.run.duration, config.run.seed)
        estimate = mc_chsh(trace, state, OPTIMAL_SETTINGS, seed=(config.run.seed + 1) % MAX_SEED)
        outputs.update(chsh_mc=estimate.value, chsh_mc_error=estimate.standard_error, events=estimate.events)
    else:
        _warn(warnings, f'{NO_PAIRS}, no events to estimate S from')
    return _document(config, 'bell', outputs, warnings)


def cmd_events(config: RunConfig, out: Path) -> Tuple[ResultDocument, Path]:
    """Simulated emission times written to DIR/events.csv"""
    warnings: List[str] = []
    rate = closed_form_rate(config.rate_inputs()).rate
    tau_cav = config.tau_cav
    trace = simulate_events(rate, config.run.duration, config.run.seed) if rate > 0 else None
    path = write_events_csv(trace, out / 'events.csv')
    count = trace.count if trace is not None else 0
    outputs = {
        'count': count,
        'expected_count': rate * config.run.duration,
        'overlap_probability': pair_overlap_probability(rate, tau_cav),
        'cavity_lifetime': tau_cav,
        'csv': str(path),
    }
    if rate == 0:
        _warn(warnings, f'{NO_PAIRS}, the event trace is empty')
    if count >= 2:
        outputs['overlap_fraction'] = overlap_fraction(trace, tau_cav)
    else:
        _warn(warnings, f'{count} events are too few for an overlap fraction')
    return _document(config, 'events', outputs, warnings), path


def _seed(text: str) -> int:
    seed = int(text)
    if not 0 <= seed < MAX_SEED:
        raise argparse.ArgumentTypeError(f'seed must be an unsigned 64-bit integer, got {text}')
    return seed


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=Path, default=argparse.SUPPRESS, help='INI configuration file')
    common.add_argument('--out', type=Path, default=argparse.SUPPRESS, help='directory for result files')
    common.add_argument('--seed', type=_seed, default=argparse.SUPPRESS, help='override the configured seed')
    common.add_argument('--format', choices=['json', 'text'], default=argparse.SUPPRESS, help='standard output format')
    common.add_argument('-v', '--verbose', action='store_true', default=argparse.SUPPRESS, help='debug logging')

    parser = argparse.ArgumentParser(
        prog='tpeqw',
        description='Entangled photon pairs from two-photon emission in a quantum well cavity',
        parents=[common],
    )
    commands = parser.add_subparsers(dest='command', required=True)
    commands.add_parser('rate', parents=[common], help='pair generation rate at the operating point')
    commands.add_parser('sweep', parents=[common], help='rate against the signal wavelength')
    commands.add_parser('bell', parents=[common], help='CHSH value with accidental pairs')
    commands.add_parser('events', parents=[common], help='simulated pair emission times')
    commands.add_parser('schema', parents=[common], help='print a configuration template')
    return parser


def _configure_logging(verbose: bool):
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter('%(levelname)s %(name)s: %(message)s'))
    log.handlers[:] = [handler]
    log.setLevel(logging.DEBUG if verbose else logging.WARNING)


COMMANDS: Dict[str, Callable] = {
    'rate': lambda config, out: (cmd_rate(config), None),
    'sweep': cmd_sweep,
    'bell': lambda config, out: (cmd_bell(config), None),
    'events': cmd_events,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(getattr(args, 'verbose', False))
    fmt = getattr(args, 'format', 'json')

    if args.command == 'schema':
        print(make_config_template())
        return EXIT_OK

    try:
        config = load_config(getattr(args, 'config', None))
        if hasattr(args, 'seed'):
            config = config.with_run(seed=args.seed)
    except ConfigError as e:
        print(f'tpeqw: {e}', file=sys.stderr)
        return EXIT_USAGE
    except (ValidationError, DomainError) as e:
        print(f'tpeqw: invalid override: {e}', file=sys.stderr)
        return EXIT_USAGE

    out = getattr(args, 'out', Path('.'))
    try:
        document, _ = COMMANDS[args.command](config, out)
        write_document(document, out / f'{args.command}.json')
    except TpeqwException as e:
        print(f'tpeqw {args.command}: {e}', file=sys.stderr)
        return EXIT_FAILURE
    except OSError as e:
        print(f'tpeqw {args.command}: cannot write results: {e}', file=sys.stderr)
        return EXIT_FAILURE

    print(document.to_json() if fmt == 'json' else document.to_text())
    return EXIT_OK
