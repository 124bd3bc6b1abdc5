'''Truncation laboratory: infinite-dimensional examples probed on growing finite sections.

A generator produces, for each ``N``, the first ``N`` vectors of a sequence in ``l^2``
compressed to ``span{e_1, ..., e_N}`` (coordinates past ``N`` are dropped). The
diagnostics below report *trends* across a schedule of ``N`` values. A finite section
never decides a question about compactness or closed range; the raw profiles are
returned next to every verdict so other criteria can be applied.

.. code-block:: python

    import frameext.lab as lab

    report = lab.extendability_diagnostic('shift_plus_identity', [16, 64, 256])
    assert report.verdict == lab.NON_EXTENDABLE
    assert all(d == 0 for d in report.deficit)

Generators: ``onb``, ``shift_plus_identity``, ``diag_sqrt_ratio``, ``repeated_first`` and
``onb_damped_first``.
'''
from __future__ import annotations
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence
import numpy as np

from .core import (
    DEFAULT_TOLERANCES, DTYPE, Tolerances, VectorSequence, ValidationError, UpperBoundError,
    analysis_matrix)
from .spectral import singular_values, numerical_rank, optimal_bounds, frame_operator

log = logging.getLogger(__name__)

__all__ = [
    'SequenceGenerator', 'GENERATORS', 'DEFAULT_SCHEDULE',
    'DualityProfile', 'DualityReport', 'ExtendabilityReport', 'CompletionTrend',
    'get_generator', 'generate', 'cross_defects',
    'essential_duality_diagnostic', 'extendability_diagnostic', 'parseval_completion_trend',
]

DEFAULT_SCHEDULE = (16, 32, 64, 128, 256)

FINITE_RANK_STABLE = 'finite-rank-stable'
COMPACT_DECAYING = 'compact-decaying'
NON_DECAYING = 'non-decaying'
EXTENDABLE = 'extendable-trend'
NON_EXTENDABLE = 'non-extendable-trend'

PROFILE_WIDTH = 4


# ------------------------------- Generators -------------------------------- #

@dataclass(frozen=True)
class SequenceGenerator:
    '''A named recipe for the ``N``-th section (``N`` vectors in ``C^N``) of an infinite sequence.'''
    name: str
    build: Callable[[int], np.ndarray]
    description: str = ''

    def __call__(self, N: int) -> VectorSequence:
        if isinstance(N, bool) or not isinstance(N, (int, np.integer)) or N < 1:
            raise ValidationError('truncation size must be a positive integer, got {!r}'.format(N))
        return VectorSequence(int(N), self.build(int(N)))


def _onb(N):
    return np.eye(N, dtype=DTYPE)

def _shift_plus_identity(N):
    F = np.eye(N, dtype=DTYPE)
    F[np.arange(1, N), np.arange(N - 1)] = 1  # f_n = e_{n-1} + e_n
    return F

def _diag_sqrt_ratio(N):
    n = np.arange(1, N + 1)
    return np.diag(np.sqrt(n / (n + 1))).astype(DTYPE)

def _repeated_first(N):
    F = np.zeros((N, N), dtype=DTYPE)
    F[0, 0] = 1
    F[np.arange(1, N), np.arange(N - 1)] = 1  # e_1, e_1, e_2, ..., e_{N-1}
    return F

def _onb_damped_first(N):
    F = np.eye(N, dtype=DTYPE)
    F[0, 0] = 0.5
    return F


GENERATORS = {g.name: g for g in [
    SequenceGenerator('onb', _onb, 'f_n = e_n'),
    SequenceGenerator('shift_plus_identity', _shift_plus_identity, 'f_1 = e_1, f_n = e_{n-1} + e_n (U = I + S)'),
    SequenceGenerator('diag_sqrt_ratio', _diag_sqrt_ratio, 'f_n = sqrt(n/(n+1)) e_n'),
    SequenceGenerator('repeated_first', _repeated_first, 'e_1, e_1, e_2, e_3, ...'),
    SequenceGenerator('onb_damped_first', _onb_damped_first, 'f_1 = e_1 / 2, f_n = e_n'),
]}


def get_generator(gen: str|SequenceGenerator) -> SequenceGenerator:
    if isinstance(gen, SequenceGenerator):
        return gen
    try:
        return GENERATORS[gen]
    except (KeyError, TypeError):
        raise ValidationError('unknown generator {!r}; expected one of {}'.format(
            gen, ', '.join(GENERATORS))) from None


def generate(gen: str|SequenceGenerator, N: int) -> VectorSequence:
    '''The ``N``-th section of a named generator.

    .. code-block:: python

        seq = generate('shift_plus_identity', 3)
        assert (seq.vectors == [[1, 0, 0], [1, 1, 0], [0, 1, 1]]).all()
    '''
    return get_generator(gen)(N)


def _schedule(schedule: Sequence[int]|None, minimum: int = 1) -> tuple:
    schedule = tuple(int(N) for N in (DEFAULT_SCHEDULE if schedule is None else schedule))
    if len(schedule) < minimum:
        raise ValidationError('schedule needs at least {} entries, got {}'.format(minimum, schedule))
    if any(N < 1 for N in schedule):
        raise ValidationError('schedule entries must be positive: {}'.format(schedule))
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValidationError('schedule must be strictly increasing: {}'.format(schedule))
    return schedule


def _map(func, schedule, workers):
    '''Run ``func`` per ``N``; results always come back in schedule order.'''
    if workers and workers > 1 and len(schedule) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(func, schedule))
    return [func(N) for N in schedule]


# --------------------------------- Duality --------------------------------- #

def cross_defects(seq_f: VectorSequence, seq_g: VectorSequence):
    '''``(I - V*U, I - VU*)`` for the analysis operators ``U`` of ``f`` and ``V`` of ``g``.

    The first is the essential-duality defect on ``C^d``, the second the order-swapped
    defect on the coefficient space ``C^n``.
    '''
    if seq_f.dim != seq_g.dim or len(seq_f) != len(seq_g):
        raise ValidationError('cross defects need sequences of equal shape, got {} and {}'.format(
            (len(seq_f), seq_f.dim), (len(seq_g), seq_g.dim)))
    U = analysis_matrix(seq_f).entries
    V = analysis_matrix(seq_g).entries
    left = np.eye(seq_f.dim) - V.conj().T @ U
    right = np.eye(len(seq_f)) - V @ U.conj().T
    return left, right


@dataclass(frozen=True)
class DualityProfile:
    '''Singular values of one defect matrix at one ``N``.'''
    N: int
    rank: int
    singular_values: tuple
    threshold: float

    @property
    def head(self) -> tuple:
        return self.singular_values[:PROFILE_WIDTH]

    @property
    def tail(self) -> tuple:
        return self.singular_values[-PROFILE_WIDTH:]

    @property
    def median(self) -> float:
        return float(np.median(self.singular_values)) if self.singular_values else 0.0


def _profile(N, M, tol):
    s = singular_values(M)
    tau = tol.threshold(s[0]) if len(s) else tol.rank_atol
    return DualityProfile(N, int(np.sum(s > tau)), tuple(float(x) for x in s), tau)


def classify(profiles: Sequence[DualityProfile], tol: Tolerances = DEFAULT_TOLERANCES) -> str:
    '''Trend classification of a defect across a schedule.

    - ``finite-rank-stable``: same rank at the last two ``N`` and the smallest singular
      value at the last ``N`` below the cutoff.
    - ``compact-decaying``: the rank grows, each ``sigma_j`` is non-increasing in ``N``, and
      the median singular value at the largest ``N`` is under half the one at the smallest.
    - ``non-decaying``: anything else.
    '''
    first, last = profiles[0], profiles[-1]
    if len(profiles) > 1 and profiles[-2].rank == last.rank:
        smallest = last.singular_values[-1] if last.singular_values else 0.0
        if smallest <= last.threshold:
            return FINITE_RANK_STABLE

    if last.rank > first.rank:
        non_increasing = all(
            b.singular_values[j] <= a.singular_values[j] + tol.verify_tol
            for a, b in zip(profiles, profiles[1:])
            for j in range(min(len(a.singular_values), len(b.singular_values))))
        if non_increasing and last.median < first.median / 2:
            return COMPACT_DECAYING
    return NON_DECAYING


@dataclass(frozen=True)
class DualityReport:
    '''Defect profiles of ``I - V*U`` (left) and ``I - VU*`` (right) across a schedule.

    ``classification`` describes the left defect (essential duality), ``right_classification``
    the right one (the near-Riesz side).
    '''
    left: str
    right: str
    schedule: tuple
    left_profiles: tuple
    right_profiles: tuple
    classification: str
    right_classification: str

    @property
    def left_defect_ranks(self) -> tuple:
        return tuple(p.rank for p in self.left_profiles)

    @property
    def right_defect_ranks(self) -> tuple:
        return tuple(p.rank for p in self.right_profiles)

    def as_dict(self) -> dict:
        return {
            'left': self.left, 'right': self.right, 'schedule': list(self.schedule),
            'per_N': [{
                'N': l.N,
                'left_defect_rank': l.rank, 'right_defect_rank': r.rank,
                'left_head': l.head, 'left_tail': l.tail, 'left_median': l.median,
                'right_head': r.head, 'right_tail': r.tail, 'right_median': r.median,
            } for l, r in zip(self.left_profiles, self.right_profiles)],
            'classification': self.classification,
            'right_classification': self.right_classification,
        }


def essential_duality_diagnostic(gen_f: str|SequenceGenerator, gen_g: str|SequenceGenerator,
                                 schedule: Sequence[int]|None = None,
                                 tol: Tolerances = DEFAULT_TOLERANCES,
                                 workers: int|None = None) -> DualityReport:
    '''Profile both defects of a generator pair along a schedule and classify the trends.

    .. code-block:: python

        report = essential_duality_diagnostic('diag_sqrt_ratio', 'diag_sqrt_ratio', [8, 16, 32])
        assert report.left_defect_ranks == (8, 16, 32)
        assert report.classification == 'compact-decaying'
    '''
    gf, gg = get_generator(gen_f), get_generator(gen_g)
    schedule = _schedule(schedule, minimum=2)

    def at(N):
        left, right = cross_defects(gf(N), gg(N))
        return _profile(N, left, tol), _profile(N, right, tol)

    results = _map(at, schedule, workers)
    lp = tuple(r[0] for r in results)
    rp = tuple(r[1] for r in results)
    report = DualityReport(
        left=gf.name, right=gg.name, schedule=schedule,
        left_profiles=lp, right_profiles=rp,
        classification=classify(lp, tol), right_classification=classify(rp, tol))
    log.debug('duality %s/%s: ranks %s -> %s', gf.name, gg.name, report.left_defect_ranks, report.classification)
    return report


# ------------------------------ Extendability ------------------------------ #

@dataclass(frozen=True)
class ExtendabilityReport:
    gen: str
    schedule: tuple
    sigma_min: tuple
    deficit: tuple
    defect_rank: tuple
    verdict: str

    def as_dict(self) -> dict:
        return {
            'gen': self.gen, 'schedule': list(self.schedule),
            'per_N': [{'N': N, 'sigma_min': s, 'deficit': d, 'defect_rank': k}
                      for N, s, d, k in zip(self.schedule, self.sigma_min, self.deficit, self.defect_rank)],
            'verdict': self.verdict,
        }


def extendability_diagnostic(gen: str|SequenceGenerator, schedule: Sequence[int]|None = None,
                             tol: Tolerances = DEFAULT_TOLERANCES,
                             workers: int|None = None) -> ExtendabilityReport:
    '''Track ``sigma_min(U_N)``, the deficit and ``rank(I - U_N*U_N)`` along a schedule.

    The verdict is ``non-extendable-trend`` when the deficit stays 0 while ``sigma_min``
    falls by at least a factor 2 from the first to the last ``N`` (a range that is not
    closed looks like this on finite sections), ``extendable-trend`` otherwise.
    '''
    g = get_generator(gen)
    schedule = _schedule(schedule)

    def at(N):
        seq = g(N)
        U = analysis_matrix(seq).entries
        s = singular_values(U)
        rank = numerical_rank(U, tol)
        sigma_min = float(s[-1]) if len(s) == seq.dim else 0.0
        D = np.eye(seq.dim) - frame_operator(seq)
        return sigma_min, seq.dim - rank, numerical_rank(D, tol)

    results = _map(at, schedule, workers)
    sigma = tuple(r[0] for r in results)
    deficits = tuple(r[1] for r in results)
    ranks = tuple(r[2] for r in results)
    collapsing = sigma[-1] <= sigma[0] / 2
    verdict = NON_EXTENDABLE if collapsing and not any(deficits) else EXTENDABLE
    return ExtendabilityReport(g.name, schedule, sigma, deficits, ranks, verdict)


# -------------------------- Parseval completion trend ---------------------- #

@dataclass(frozen=True)
class CompletionTrend:
    gen: str
    schedule: tuple
    k: tuple
    stabilizing: bool

    @property
    def pairs(self) -> list:
        '''``[(N, k_N), ...]``'''
        return list(zip(self.schedule, self.k))

    def as_dict(self) -> dict:
        return {
            'gen': self.gen, 'schedule': list(self.schedule),
            'per_N': [{'N': N, 'k': k} for N, k in self.pairs],
            'stabilizing': self.stabilizing,
        }


def parseval_completion_trend(gen: str|SequenceGenerator, schedule: Sequence[int]|None = None,
                              tol: Tolerances = DEFAULT_TOLERANCES,
                              workers: int|None = None) -> CompletionTrend:
    '''``k_N = rank(I - U_N*U_N)`` along a schedule; stabilizing iff the last two agree.

    Raises:
        UpperBoundError: if a section has ``B > 1 + bound_slack`` (``size`` names ``N``).
    '''
    g = get_generator(gen)
    schedule = _schedule(schedule)

    def at(N):
        seq = g(N)
        B = optimal_bounds(seq, tol).upper
        if B > 1 + tol.bound_slack:
            raise UpperBoundError(B, size=N)
        return numerical_rank(np.eye(N) - frame_operator(seq), tol)

    k = tuple(_map(at, schedule, workers))
    return CompletionTrend(g.name, schedule, k, len(k) > 1 and k[-1] == k[-2])
