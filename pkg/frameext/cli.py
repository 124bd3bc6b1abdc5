'''The ``frameext`` command line.

.. code-block:: bash

    frameext analyze seq.json
    frameext complete parseval seq.json --out added.json
    frameext lab extendability --gen shift_plus_identity --dims 16,64,256

Every invocation prints one JSON report on stdout::

    {"command": ..., "inputs": {...}, "tolerances": {...}, "exit_code": 0, "payload": {...}, "error": null}

Exit codes: ``0`` ok, ``2`` a mathematical precondition failed, ``3`` the input (file,
flag or generator name) could not be used.

The parser is generated from the command functions below. Each takes its tolerance
flags as ``**kw`` traced to :func:`tolerances_from_flags`.
'''
from __future__ import annotations
import logging
import sys
from dataclasses import dataclass, field
from typing import Any, Sequence
import numpy as np

from .core import (
    DEFAULT_TOLERANCES, Tolerances, InputError, PreconditionError, ValidationError, VectorSequence)
from .spectral import diagnostics, optimal_bounds, canonical_dual
from .extension import (
    parseval_completion, tight_completion, minimal_frame_extension, parseval_perturbation,
    verify_tight, verify_parseval)
from .excess import riesz_extraction, excess_via_canonical, energy_identity, defect_series
from . import lab
from .io import read_sequence, write_sequence, dumps
from .signature import traceto, divide, as_args_kwargs
from .argparse import from_any, resolve

log = logging.getLogger(__name__)

__all__ = ['RunReport', 'tolerances_from_flags', 'build_parser', 'main']

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_INPUT = 3


@dataclass
class RunReport:
    command: str|None = None
    inputs: dict = field(default_factory=dict)
    tolerances: Tolerances|None = None
    exit_code: int = EXIT_OK
    payload: Any = None
    error: str|None = None


def tolerances_from_flags(tol_rel: float = DEFAULT_TOLERANCES.rank_rtol,
                          tol_abs: float = DEFAULT_TOLERANCES.rank_atol,
                          verify_tol: float = DEFAULT_TOLERANCES.verify_tol,
                          bound_slack: float = DEFAULT_TOLERANCES.bound_slack) -> Tolerances:
    '''Build :class:`Tolerances` from the command line flags.

    Arguments:
        tol_rel: relative part of the rank cutoff.
        tol_abs: absolute part of the rank cutoff.
        verify_tol: residual allowed on operator identities.
        bound_slack: slack allowed on the B <= 1 precondition.
    '''
    return Tolerances(rank_rtol=tol_rel, rank_atol=tol_abs, verify_tol=verify_tol, bound_slack=bound_slack)


def _tolerances(kw: dict) -> Tolerances:
    (flags,) = divide(kw, tolerances_from_flags)
    return tolerances_from_flags(**flags)


def _int_list(text: str|None, name: str = 'dims') -> tuple|None:
    if text is None:
        return None
    try:
        return tuple(int(x) for x in text.split(',') if x.strip())
    except ValueError:
        raise ValidationError('--{} must be a comma-separated list of integers, got {!r}'.format(name, text)) from None


# -------------------------------- Sequences -------------------------------- #

@traceto(tolerances_from_flags)
def cmd_analyze(path: str, /, **kw):
    '''Bounds, rank, deficit and excess of a sequence file.

    Arguments:
        path: sequence file (JSON, or CSV with a .csv suffix).
    '''
    return diagnostics(read_sequence(path), _tolerances(kw))


@traceto(tolerances_from_flags)
def cmd_complete(path: str, /, mode: str, *, slots: int|None = None, out: str|None = None, **kw) -> dict:
    '''Extend a sequence: ``parseval``, ``tight`` or ``frame``.

    The payload carries the number of added vectors, their energy and the residual of
    the identity the extension is supposed to satisfy (``S = I``, ``S = B I``, or
    unchanged ``B`` for ``frame``).
    '''
    tol = _tolerances(kw)
    if mode not in ('parseval', 'tight', 'frame'):
        raise ValidationError('unknown completion mode {!r}'.format(mode))
    if slots is not None and (mode != 'parseval' or slots < 0):
        raise ValidationError('slots must be a nonnegative integer and only apply to parseval mode')
    seq = read_sequence(path)
    B = optimal_bounds(seq, tol).upper

    if mode == 'parseval':
        ext = parseval_completion(seq, slots, tol)
        ok, residual = verify_parseval(ext.apply(seq), tol)
    elif mode == 'tight':
        ext = tight_completion(seq, tol)
        ok, residual = verify_tight(ext.apply(seq), B, tol)
    else:
        ext = minimal_frame_extension(seq, tol)
        extended = diagnostics(ext.apply(seq), tol)
        residual = abs(extended.bounds.upper - B)
        ok = extended.is_frame and residual <= tol.verify_tol * max(1.0, B)

    log.info('%s completion: added %d vectors (k=%s), residual %.3g', mode, len(ext), ext.k_minimal, residual)
    if out:
        write_sequence(out, ext)
    return {
        'mode': mode, 'B': B, 'k': ext.k_minimal, 'slots': len(ext),
        'added_energy': ext.energy(), 'verified': ok, 'residual': residual,
        'extension': ext, 'out': out,
    }


@traceto(tolerances_from_flags)
def complete_parseval(path: str, /, *, slots: int|None = None, out: str|None = None, **kw) -> dict:
    '''Prepend the fewest vectors that make the sequence a Parseval frame.

    Arguments:
        path: sequence file.
        slots: number of vectors to add; slots past the minimal count are zero vectors.
        out: write the added vectors to this file.
    '''
    return cmd_complete(path, 'parseval', slots=slots, out=out, **kw)


@traceto(tolerances_from_flags)
def complete_tight(path: str, /, *, out: str|None = None, **kw) -> dict:
    '''Prepend vectors that make the sequence B-tight, B its optimal upper bound.

    Arguments:
        path: sequence file.
        out: write the added vectors to this file.
    '''
    return cmd_complete(path, 'tight', out=out, **kw)


@traceto(tolerances_from_flags)
def complete_frame(path: str, /, *, out: str|None = None, **kw) -> dict:
    '''Prepend sqrt(B) times an orthonormal basis of the missed directions.

    Arguments:
        path: sequence file.
        out: write the added vectors to this file.
    '''
    return cmd_complete(path, 'frame', out=out, **kw)


@traceto(tolerances_from_flags)
def dual_canonical(path: str, /, *, out: str|None = None, **kw) -> dict:
    '''The canonical dual frame S^-1 f_n.

    Arguments:
        path: sequence file.
        out: write the dual frame to this file.
    '''
    tol = _tolerances(kw)
    seq = read_sequence(path)
    dual = canonical_dual(seq, tol)
    # x = sum <x, f~_n> f_n  <=>  U_f* U_dual = I
    residual = float(np.linalg.norm(seq.synthesis @ dual.vectors.conj() - np.eye(seq.dim)))
    if out:
        write_sequence(out, dual)
    return {
        'dual': dual, 'verified': residual <= tol.verify_tol * np.sqrt(seq.dim),
        'reconstruction_residual': residual, 'out': out,
    }


@traceto(tolerances_from_flags)
def perturb_parseval(path: str, /, *, out: str|None = None, **kw) -> dict:
    '''The perturbation g_n, inside Im(I - S), that makes f_n + g_n Parseval.

    Arguments:
        path: sequence file.
        out: write the perturbed (Parseval) sequence to this file.
    '''
    tol = _tolerances(kw)
    seq = read_sequence(path)
    result = parseval_perturbation(seq, tol)
    ok, residual = verify_parseval(result.perturbed, tol)
    if out:
        write_sequence(out, result.perturbed)
    return {
        'perturbations': result.perturbations, 'subspace_rank': len(result.subspace),
        'max_distance': result.max_distance(), 'verified': ok, 'residual': residual, 'out': out,
    }


@traceto(tolerances_from_flags)
def excess_report(path: str, /, **kw) -> dict:
    '''The excess of a frame three ways: n - rank, the canonical Parseval sum, and the removed indices.

    Arguments:
        path: sequence file.
    '''
    tol = _tolerances(kw)
    seq = read_sequence(path)
    info = diagnostics(seq, tol)
    extraction = riesz_extraction(seq, tol)
    return {
        'excess': info.excess,
        'borderline': info.borderline,
        'excess_caveat': info.excess_caveat,
        'excess_via_canonical': excess_via_canonical(seq, tol),
        'removed_indices': extraction.removed_indices,
        'kept_indices': extraction.kept_indices,
    }


@traceto(tolerances_from_flags)
def energy_identity_report(path: str, /, **kw):
    '''Energy of the minimal Parseval completion against sum(1 - |f_n|^2) - excess.

    Arguments:
        path: sequence file.
    '''
    return energy_identity(read_sequence(path), _tolerances(kw))


@traceto(tolerances_from_flags)
def series(path: str, /, *, schedule: str, **kw):
    '''Partial sums of B - |f_n|^2 over prefixes of the sequence.

    Arguments:
        path: sequence file.
        schedule: comma-separated prefix lengths, e.g. 2,4,8.
    '''
    tol = _tolerances(kw)
    return defect_series(read_sequence(path), _int_list(schedule, 'schedule'), tol)


# ----------------------------------- Lab ----------------------------------- #

@traceto(tolerances_from_flags)
def lab_duality(*, left: str, right: str, dims: str|None = None, workers: int|None = None, **kw):
    '''Singular value profiles of I - V*U and I - VU* along truncation sizes.

    Arguments:
        left: generator of f.
        right: generator of g.
        dims: comma-separated truncation sizes.
        workers: threads for the per-size work.
    '''
    return lab.essential_duality_diagnostic(left, right, _int_list(dims), _tolerances(kw), workers=workers)


@traceto(tolerances_from_flags)
def lab_extendability(*, gen: str, dims: str|None = None, workers: int|None = None, **kw):
    '''Smallest singular value, deficit and rank(I - U*U) along truncation sizes.

    Arguments:
        gen: generator name.
        dims: comma-separated truncation sizes.
        workers: threads for the per-size work.
    '''
    return lab.extendability_diagnostic(gen, _int_list(dims), _tolerances(kw), workers=workers)


@traceto(tolerances_from_flags)
def lab_completion_trend(*, gen: str, dims: str|None = None, workers: int|None = None, **kw):
    '''Minimal Parseval completion size k_N along truncation sizes.

    Arguments:
        gen: generator name.
        dims: comma-separated truncation sizes.
        workers: threads for the per-size work.
    '''
    return lab.parseval_completion_trend(gen, _int_list(dims), _tolerances(kw), workers=workers)


COMMANDS = {
    'analyze: Bounds, rank, deficit and excess of a sequence file.': cmd_analyze,
    'complete: Extend a sequence to a Parseval, tight or plain frame.': {
        'parseval': complete_parseval,
        'tight': complete_tight,
        'frame': complete_frame,
    },
    'extend: Extend a sequence to a frame.': {'frame': complete_frame},
    'dual: Dual frames.': {'canonical': dual_canonical},
    'perturb: Perturb a frame.': {'parseval': perturb_parseval},
    'excess': excess_report,
    'energy-identity': energy_identity_report,
    'series': series,
    'lab: Trends of infinite sequences over growing truncations.': {
        'duality': lab_duality,
        'extendability': lab_extendability,
        'completion-trend': lab_completion_trend,
    },
}


# ---------------------------------- Main ----------------------------------- #

def build_parser():
    parser = from_any(COMMANDS, prog='frameext', description=__doc__.split('\n\n')[0])
    parser.add_argument('-v', '--verbose', action='store_true', help='debug logging on stderr')
    return parser


def _setup_logging(verbose: bool) -> None:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter('%(levelname)s %(name)s: %(message)s'))
    root = logging.getLogger(__package__)
    root.handlers[:] = [handler]
    root.setLevel(logging.DEBUG if verbose else logging.WARNING)


def main(argv: Sequence[str]|None = None) -> int:
    '''Run one command and print its report. Returns the exit code.'''
    parser = build_parser()
    report = RunReport()
    try:
        args = vars(parser.parse_args(argv))
        _setup_logging(args.pop('verbose', False))
        names, func, kw = resolve(parser, args)
        report.command = ' '.join(names)
        flags, report.inputs = divide(kw, tolerances_from_flags, mode='separate')
        report.tolerances = tolerances_from_flags(**flags)
        log.debug('%s %s', report.command, report.inputs)

        a, kw = as_args_kwargs(func, kw)
        report.payload = func(*a, **kw)
    except PreconditionError as e:
        log.warning('%s', e)
        report.exit_code, report.error = EXIT_PRECONDITION, str(e)
    except InputError as e:
        log.warning('%s', e)
        report.exit_code, report.error = EXIT_INPUT, str(e)
    print(dumps(report))
    return report.exit_code
