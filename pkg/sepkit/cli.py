"""
Command-line entry point: sepkit analyze|decompose|ensemble|minimize.
"""
import argparse
import logging
import os
import sys

from . import __version__
from .commands import (
    AnalyzeCommand, DecomposeCommand, EnsembleCommand, MinimizeCommand, EXIT_INVALID_STATE, EXIT_IO,
)
from .corr3 import MinimizeConfig
from .decomposition import InconsistentCriteria
from .density import BadSubsystem, InvalidDensityMatrix, RejectionLimit
from .ensemble import COLUMNS, KINDS, STUDY_CONFIG, TIMING_COLUMN, UnknownKind
from .linalg import NotHermitian
from .middleware import InputError, ResponseError


THREADS_VARIABLE = 'SEPKIT_THREADS'

ENSEMBLE_EPILOG = '''\
CSV columns: {0} (plus {1} with --timings).
Floats are written with full round-trip precision; empty cells mean the
criterion does not apply. The last line starts with "#" and holds the
verdict fractions, the fraction of rows with a nonnegative partial
transpose and the number of rows where the separability form and the
partial-transpose test disagree.
'''.format(', '.join(COLUMNS), TIMING_COLUMN)

logger = logging.getLogger('sepkit')
_handler = None


def configure_logging(verbose):
    global _handler
    if _handler is not None:
        logger.removeHandler(_handler)
    _handler = logging.StreamHandler(sys.stderr)
    _handler.setFormatter(logging.Formatter('%(levelname)s %(name)s: %(message)s'))
    logger.addHandler(_handler)
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)


def resolve_threads(requested=None, environ=None):
    """
    Worker process count: --threads wins, then SEPKIT_THREADS; 0 or unset
    means one per CPU.
    """
    environ = os.environ if environ is None else environ
    value = requested
    if value is None:
        raw = environ.get(THREADS_VARIABLE, '').strip()
        try:
            value = int(raw) if raw else 0
        except ValueError:
            logger.warning('Ignoring {0}={1!r}: not an integer'.format(THREADS_VARIABLE, raw))
            value = 0
    if value <= 0:
        value = os.cpu_count() or 1
    return value


def _minimize_config(args):
    return MinimizeConfig(restarts=args.restarts, max_iters=args.max_iters, seed=args.seed)


def _emit(body):
    if body is not None:
        sys.stdout.write(body + '\n')


def do_analyze(args, threads):
    command = AnalyzeCommand(cuts=args.cut, config=_minimize_config(args), threads=threads)
    code, body = command.execute(args.path)
    _emit(body)
    return code


def do_decompose(args, threads):
    command = DecomposeCommand(out=args.out, pure=args.pure, config=_minimize_config(args), threads=threads)
    code, body = command.execute(args.path)
    _emit(body)
    return code


def do_ensemble(args, threads):
    config = MinimizeConfig(restarts=args.restarts, max_iters=args.max_iters, seed=args.seed)
    command = EnsembleCommand(args.kind, args.count, args.seed, args.qubits, config, args.timings, threads=threads)
    code, _ = command.execute(args.csv)
    return code


def do_minimize(args, threads):
    command = MinimizeCommand(config=_minimize_config(args), threads=threads)
    code, body = command.execute(args.path)
    _emit(body)
    return code


def _add_minimizer_flags(parser, restarts, max_iters=2000):
    parser.add_argument('--restarts', type=int, default=restarts, help='minimizer restarts for three-qubit states')
    parser.add_argument('--max-iters', type=int, default=max_iters, help='Nelder-Mead iterations per restart')
    parser.add_argument('--seed', type=int, default=0, help='seed for random restarts and samples')


def build_parser():
    parser = argparse.ArgumentParser(prog='sepkit', description='Separability criteria and certificates for two- and three-qubit states')
    parser.add_argument('--version', action='version', version='%(prog)s {0}'.format(__version__))
    parser.add_argument('-v', '--verbose', action='store_true', help='debug logging on standard error')
    parser.add_argument('--threads', type=int, default=None, help='worker processes (default: ${0}, 0 = one per CPU)'.format(THREADS_VARIABLE))
    subparsers = parser.add_subparsers(dest='command')
    subparsers.required = True

    analyze = subparsers.add_parser('analyze', help='run every applicable criterion and print a JSON report')
    analyze.add_argument('path', help='state file (JSON)')
    analyze.add_argument('--cut', type=int, action='append', help='qubit whose partial transpose is tested (repeatable; default all)')
    _add_minimizer_flags(analyze, 32)
    analyze.set_defaults(handler=do_analyze)

    decompose = subparsers.add_parser('decompose', help='write a verified separable ensemble')
    decompose.add_argument('path', help='state file (JSON)')
    decompose.add_argument('--out', help='certificate file (default: standard output)')
    decompose.add_argument('--pure', action='store_true', help='split mixed factors so every term is a pure product state')
    _add_minimizer_flags(decompose, 32)
    decompose.set_defaults(handler=do_decompose)

    ensemble = subparsers.add_parser(
        'ensemble', help='criteria statistics over random states (CSV)',
        epilog=ENSEMBLE_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    ensemble.add_argument('--kind', choices=KINDS, required=True)
    ensemble.add_argument('--count', type=int, required=True)
    ensemble.add_argument('--qubits', type=int, choices=(2, 3), default=2, help='qubits for mixed and separable kinds')
    ensemble.add_argument('--csv', default='-', help='output path (default: standard output)')
    ensemble.add_argument('--timings', action='store_true', help='add a per-row seconds column (not deterministic)')
    _add_minimizer_flags(ensemble, STUDY_CONFIG.restarts, STUDY_CONFIG.max_iters)
    ensemble.set_defaults(handler=do_ensemble)

    minimize = subparsers.add_parser('minimize', help='minimize sum |G_abc| over local rotations')
    minimize.add_argument('path', help='three-qubit state file (JSON)')
    _add_minimizer_flags(minimize, 32)
    minimize.set_defaults(handler=do_minimize)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)
    threads = resolve_threads(args.threads)

    try:
        return args.handler(args, threads)
    except (InvalidDensityMatrix, NotHermitian) as error:
        logger.error('Not a valid density matrix: {0}'.format(error))
        return EXIT_INVALID_STATE
    except (InputError, ResponseError, BadSubsystem, UnknownKind, RejectionLimit) as error:
        logger.error(str(error))
        return EXIT_IO
    except (IOError, OSError) as error:
        logger.error('I/O error: {0}'.format(error))
        return EXIT_IO
    except InconsistentCriteria as error:
        logger.error('Criteria disagree: {0}'.format(error))
        return EXIT_IO
    except ValueError as error:
        logger.error('Invalid argument: {0}'.format(error))
        return EXIT_IO
