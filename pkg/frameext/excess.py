'''Excess of a frame: which vectors can go, what the canonical Parseval frame says about
it, and the energy of Parseval completions.

.. code-block:: python

    import frameext as fx

    seq = fx.make_sequence(2, [(1, 0), (1, 0), (0, 1)])
    assert fx.riesz_extraction(seq).removed_indices == (1,)
    assert abs(fx.excess_via_canonical(seq) - 1) < 1e-12
'''
from __future__ import annotations
import logging
from dataclasses import dataclass
from typing import Sequence
import numpy as np

from .core import (
    DEFAULT_TOLERANCES, Tolerances, VectorSequence, ValidationError, DegenerateScaleError)
from .spectral import (
    numerical_rank, optimal_bounds, parseval_canonical, require_frame, excess as _excess)
from .extension import parseval_completion

log = logging.getLogger(__name__)

__all__ = [
    'RieszExtraction', 'EnergyReport', 'DefectSeriesReport',
    'riesz_extraction', 'excess_via_canonical', 'energy_identity', 'defect_series',
    'remark_inequality', 'scaled_trace_defect',
]

BOUNDED = 'bounded'
GROWING = 'growing'


@dataclass(frozen=True, eq=False)
class RieszExtraction:
    '''The indices ``J`` to remove, and the basis that is left over.'''
    removed_indices: tuple
    kept_indices: tuple
    remaining: VectorSequence

    def __len__(self):
        return len(self.removed_indices)


@dataclass(frozen=True)
class EnergyReport:
    added_energy: float
    defect_sum: float
    excess: int
    identity_residual: float
    k: int


@dataclass(frozen=True)
class DefectSeriesReport:
    '''Partial sums of ``B - ||f_n||^2`` over prefixes of the sequence.

    ``adjusted_sums`` subtract the excess of the whole sequence from each partial sum.
    '''
    B: float
    schedule: tuple
    partial_sums: tuple
    excess: int
    adjusted_sums: tuple
    verdict: str


def riesz_extraction(seq: VectorSequence, tol: Tolerances = DEFAULT_TOLERANCES) -> RieszExtraction:
    '''Keep a spanning, linearly independent subfamily; ``J`` is everything else.

    Vectors are scanned in index order and kept iff they raise the numerical rank of what
    has been kept so far. Once ``dim`` vectors are kept the rest are all removed, so
    ``|J| = n - dim`` is the excess.

    Raises:
        FrameRequiredError: if the sequence does not span.
    '''
    require_frame(seq, tol, 'riesz_extraction')
    kept, removed = [], []
    for i, f in enumerate(seq.vectors):
        if len(kept) < seq.dim and numerical_rank(seq.vectors[kept + [i]], tol) > len(kept):
            kept.append(i)
        else:
            removed.append(i)
    log.debug('riesz extraction: kept %d, removed %s', len(kept), removed)
    return RieszExtraction(tuple(removed), tuple(kept), seq.take(kept))


def excess_via_canonical(seq: VectorSequence, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    '''``sum (1 - ||f-_n||^2)`` over the canonical Parseval frame; equals the excess.'''
    canonical = parseval_canonical(seq, tol)
    return float(np.sum(1 - canonical.norms_squared()))


def energy_identity(seq: VectorSequence, tol: Tolerances = DEFAULT_TOLERANCES) -> EnergyReport:
    '''Compare the energy of the minimal Parseval completion with ``sum (1 - ||f_n||^2) - e``.

    Holds for frames whose optimal upper bound is 1; the bound is checked, never rescaled
    (after rescaling the identity is a different statement).

    Raises:
        FrameRequiredError: if the sequence does not span.
        UpperBoundError: if ``B > 1 + bound_slack``.
    '''
    require_frame(seq, tol, 'energy_identity')
    ext = parseval_completion(seq, None, tol)
    added = ext.energy()
    defect_sum = float(np.sum(1 - seq.norms_squared()))
    e = _excess(seq, tol)
    return EnergyReport(
        added_energy=added, defect_sum=defect_sum, excess=e,
        identity_residual=abs(added - (defect_sum - e)), k=len(ext))


def defect_series(seq: VectorSequence, schedule: Sequence[int],
                  tol: Tolerances = DEFAULT_TOLERANCES) -> DefectSeriesReport:
    '''Partial sums ``sum_{n <= m} (B - ||f_n||^2)`` for each prefix length ``m``.

    ``B`` is the optimal upper bound of the whole sequence. The verdict is ``'growing'``
    when the last two partial sums differ by more than ``verify_tol`` times the gap in
    prefix length, ``'bounded'`` otherwise.

    Raises:
        ValidationError: if the schedule is empty, not increasing, or runs past ``n``.
    '''
    schedule = tuple(int(m) for m in schedule)
    if not schedule:
        raise ValidationError('schedule is empty')
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValidationError('schedule must be strictly increasing: {}'.format(schedule))
    if schedule[0] < 0 or schedule[-1] > len(seq):
        raise ValidationError('schedule {} does not fit a sequence of length {}'.format(schedule, len(seq)))

    B = optimal_bounds(seq, tol).upper
    cumulative = np.concatenate([[0.0], np.cumsum(B - seq.norms_squared())])
    sums = tuple(float(cumulative[m]) for m in schedule)
    e = _excess(seq, tol)

    verdict = BOUNDED
    if len(schedule) > 1:
        gap = schedule[-1] - schedule[-2]
        if abs(sums[-1] - sums[-2]) > tol.verify_tol * gap:
            verdict = GROWING
    return DefectSeriesReport(
        B=B, schedule=schedule, partial_sums=sums, excess=e,
        adjusted_sums=tuple(s - e for s in sums), verdict=verdict)


def remark_inequality(seq: VectorSequence, tol: Tolerances = DEFAULT_TOLERANCES):
    '''Per vector, ``1 - ||f-_n||^2`` and ``1 - ||f_n||^2 / B``; the first never exceeds the second.'''
    B = optimal_bounds(seq, tol).upper
    canonical = parseval_canonical(seq, tol)
    return 1 - canonical.norms_squared(), 1 - seq.norms_squared() / B


def scaled_trace_defect(seq: VectorSequence, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    '''``tr(I - U1 U1*)`` for ``U1 = U / sqrt(B)``, i.e. ``sum (1 - ||f_n||^2 / B)``.

    Raises:
        DegenerateScaleError: if ``B = 0``.
    '''
    B = optimal_bounds(seq, tol).upper
    if B <= 0:
        raise DegenerateScaleError('scaled_trace_defect')
    G = seq.vectors.conj() @ seq.vectors.T / B  # U1 U1*, the (n, n) Gram matrix over B
    return float(np.real(np.trace(np.eye(len(seq)) - G)))
