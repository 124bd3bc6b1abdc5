'''Finite extensions of a sequence: to a frame, to a Parseval frame, to a ``B``-tight frame,
and the finite-dimensional perturbation that turns a frame into a Parseval frame.

Added vectors are always *prepended*: the extended sequence is ``x_1, ..., x_k, f_1, f_2, ...``.

.. code-block:: python

    import numpy as np
    import frameext as fx

    seq = fx.make_sequence(2, [(1, 0), (0, 2 ** -0.5)])
    ext = fx.parseval_completion(seq)
    assert len(ext) == ext.k_minimal == 1
    assert fx.verify_parseval(ext.apply(seq)).ok

The Parseval completion is the minimal one: ``k = rank(I - S)`` vectors
``x_j = (I - S)^1/2 w_j``, where ``w_j`` runs over the eigenvectors of ``I - S`` with
nonzero eigenvalue (largest defect first).
'''
from __future__ import annotations
import logging
from dataclasses import dataclass
from typing import NamedTuple
import numpy as np

from .core import (
    DEFAULT_TOLERANCES, DTYPE, Tolerances, VectorSequence, SubspaceBasis, Extension,
    UpperBoundError, BelowMinimalError, DegenerateScaleError, ValidationError)
from .spectral import (
    HermitianSpectrum, frame_operator, hermitian_spectrum, optimal_bounds, numerical_rank,
    parseval_canonical, kernel_basis, require_frame)

log = logging.getLogger(__name__)

__all__ = [
    'CompletionPlan', 'PerturbationResult', 'ParsevalCheck',
    'defect_spectrum', 'defect_rank', 'completion_plan',
    'minimal_frame_extension', 'parseval_completion', 'tight_completion',
    'parseval_perturbation', 'outer_reconstruction_subspace',
    'verify_parseval', 'verify_tight', 'minimality_certificate',
]


@dataclass(frozen=True, eq=False)
class CompletionPlan:
    '''How a completion will be laid out before any vector is built.

    Slot ``j < k`` receives ``sqrt(defect_values[j]) * defect_basis[j]``; slots
    ``k, ..., slots - 1`` receive zero vectors.
    '''
    k: int
    defect_basis: SubspaceBasis
    defect_values: np.ndarray
    slots: int
    level: float = 1.0

    def build(self) -> np.ndarray:
        dim = self.defect_basis.dim
        added = np.zeros((self.slots, dim), dtype=DTYPE)
        added[:self.k] = np.sqrt(self.defect_values)[:, None] * self.defect_basis.basis
        return added


@dataclass(frozen=True, eq=False)
class PerturbationResult:
    '''``g_n`` such that ``f_n + g_n`` is Parseval, all inside ``L = Im(I - S)``.'''
    perturbations: VectorSequence
    subspace: SubspaceBasis
    perturbed: VectorSequence

    def __len__(self):
        return len(self.perturbations)

    def max_distance(self) -> float:
        '''Largest distance of a ``g_n`` from ``L``.'''
        if not len(self.perturbations):
            return 0.0
        P = self.subspace.projector()
        G = self.perturbations.synthesis
        return float(np.max(np.linalg.norm(G - P @ G, axis=0)))


class ParsevalCheck(NamedTuple):
    ok: bool
    residual: float


# -------------------------------- Defects ---------------------------------- #

def defect_spectrum(seq: VectorSequence, level: float = 1.0, tol: Tolerances = DEFAULT_TOLERANCES):
    '''Spectrum of ``level I - S`` and the mask of its numerically nonzero eigenvalues.

    An eigenvalue counts as nonzero when ``|mu| > tau`` with ``tau`` taken relative to the
    largest ``|mu|``, so the mask agrees with the singular-value rank of ``level I - S``.
    '''
    D = level * np.eye(seq.dim) - frame_operator(seq)
    spec = hermitian_spectrum(D, tol)
    mags = np.abs(spec.eigenvalues)
    mask = mags > tol.threshold(mags.max() if len(mags) else 0.0)
    return spec, mask


def defect_rank(seq: VectorSequence, level: float = 1.0, tol: Tolerances = DEFAULT_TOLERANCES) -> int:
    '''``rank(level I - S)``'''
    return int(np.sum(defect_spectrum(seq, level, tol)[1]))


def _checked_upper_bound(seq: VectorSequence, tol: Tolerances) -> float:
    B = optimal_bounds(seq, tol).upper
    if B > 1 + tol.bound_slack:
        raise UpperBoundError(B)
    return B


def completion_plan(seq: VectorSequence, slots: int|None = None, tol: Tolerances = DEFAULT_TOLERANCES,
                    *, level: float = 1.0) -> CompletionPlan:
    '''Work out ``k = rank(level I - S)`` and the defect basis of a completion.

    Eigenvalues of ``level I - S`` that are slightly negative (``S`` a hair above ``level``)
    are clamped to zero first; the callers have already checked ``B`` against the slack.

    Raises:
        BelowMinimalError: if ``slots < k``.
    '''
    spec, _ = defect_spectrum(seq, level, tol)
    values = np.clip(spec.eigenvalues, 0, None)
    mask = values > tol.threshold(values.max() if len(values) else 0.0)
    spec = HermitianSpectrum(values, spec.eigenvectors).select(mask)
    k = len(spec)
    if slots is None:
        slots = k
    if isinstance(slots, bool) or not isinstance(slots, (int, np.integer)) or slots < 0:
        raise ValidationError('slots must be a nonnegative integer, got {!r}'.format(slots))
    if slots < k:
        raise BelowMinimalError(int(slots), k)
    log.debug('completion plan: level=%r k=%d slots=%d', level, k, slots)
    return CompletionPlan(k=k, defect_basis=spec.subspace(), defect_values=spec.eigenvalues,
                          slots=int(slots), level=level)


# ------------------------------- Extensions -------------------------------- #

def minimal_frame_extension(seq: VectorSequence, tol: Tolerances = DEFAULT_TOLERANCES) -> Extension:
    '''Extend to a frame with ``deficit`` vectors ``sqrt(B) w_j``, ``w_j`` an ONB of ``Ker U``.

    The optimal upper bound is unchanged: on ``Ker U`` the added vectors contribute exactly
    ``B``, on its complement nothing.

    Raises:
        DegenerateScaleError: if the sequence is empty or all zero (``B = 0``).

    .. code-block:: python

        ext = minimal_frame_extension(make_sequence(2, [(0.5, 0)]))
        assert np.allclose(ext.added, [[0, 0.5]])
    '''
    if not len(seq) or numerical_rank(seq.vectors, tol) == 0:
        raise DegenerateScaleError('minimal_frame_extension')
    B = optimal_bounds(seq, tol).upper
    kernel = kernel_basis(seq, tol)
    log.debug('frame extension: B=%r deficit=%d', B, len(kernel))
    return Extension(seq.dim, np.sqrt(B) * kernel.basis, k_minimal=len(kernel))


def parseval_completion(seq: VectorSequence, slots: int|None = None,
                        tol: Tolerances = DEFAULT_TOLERANCES) -> Extension:
    '''Prepend vectors so that the extended sequence is a Parseval frame.

    Without ``slots`` this adds exactly ``k = rank(I - S)`` vectors, the least possible.
    With ``slots = l > k`` the same ``k`` vectors fill the first slots and ``l - k`` zero
    vectors follow.

    Raises:
        UpperBoundError: if ``B > 1 + bound_slack`` (``bound`` carries ``B``).
        BelowMinimalError: if ``slots < k`` (``k`` is attached).
    '''
    _checked_upper_bound(seq, tol)
    plan = completion_plan(seq, slots, tol)
    return Extension(seq.dim, plan.build(), k_minimal=plan.k)


def tight_completion(seq: VectorSequence, tol: Tolerances = DEFAULT_TOLERANCES) -> Extension:
    '''Prepend ``rank(B I - S)`` vectors making the sequence ``B``-tight (``S = B I``).

    Raises:
        DegenerateScaleError: if ``B = 0``.
    '''
    if not len(seq) or numerical_rank(seq.vectors, tol) == 0:
        raise DegenerateScaleError('tight_completion')
    B = optimal_bounds(seq, tol).upper
    plan = completion_plan(seq, None, tol, level=B)
    return Extension(seq.dim, plan.build(), k_minimal=plan.k)


def parseval_perturbation(seq: VectorSequence, tol: Tolerances = DEFAULT_TOLERANCES) -> PerturbationResult:
    '''``g_n = (S^-1/2 - I) f_n``: the canonical Parseval frame minus the frame.

    Every ``g_n`` lies in ``L = Im(I - S)`` because ``S^-1/2`` is the identity on ``Ker(I - S)``.

    Raises:
        FrameRequiredError: if the sequence does not span.
    '''
    require_frame(seq, tol, 'parseval_perturbation')
    canonical = parseval_canonical(seq, tol)
    g = VectorSequence(seq.dim, canonical.vectors - seq.vectors)
    spec, mask = defect_spectrum(seq, 1.0, tol)
    return PerturbationResult(perturbations=g, subspace=spec.subspace(mask), perturbed=canonical)


def outer_reconstruction_subspace(seq: VectorSequence, tol: Tolerances = DEFAULT_TOLERANCES) -> SubspaceBasis:
    '''ONB of ``M = Ker(I - S)``, where ``x = sum <x, f_n> f_n`` holds.

    The codimension of ``M`` equals ``rank(I - S)``.
    '''
    spec, mask = defect_spectrum(seq, 1.0, tol)
    return spec.subspace(~mask)


def verify_tight(seq: VectorSequence, bound: float, tol: Tolerances = DEFAULT_TOLERANCES) -> ParsevalCheck:
    '''Check ``S = bound I`` in Frobenius norm against ``verify_tol sqrt(d) max(1, bound)``.'''
    residual = float(np.linalg.norm(frame_operator(seq) - bound * np.eye(seq.dim)))
    return ParsevalCheck(residual <= tol.verify_tol * np.sqrt(seq.dim) * max(1.0, bound), residual)


def verify_parseval(seq: VectorSequence, tol: Tolerances = DEFAULT_TOLERANCES) -> ParsevalCheck:
    '''``(||S - I||_F <= verify_tol sqrt(d), ||S - I||_F)``

    .. code-block:: python

        ok, residual = verify_parseval(make_sequence(2, [(1, 0)]))
        assert not ok and residual == 1
    '''
    return verify_tight(seq, 1.0, tol)


def minimality_certificate(seq: VectorSequence, candidate: Extension,
                           tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    '''Check a candidate Parseval extension against the minimal count ``k = rank(I - S)``.

    True iff the candidate has at least ``k`` vectors and, whenever it does produce a
    Parseval frame, its vectors span at least ``k`` dimensions (the image of ``I - S`` is
    exactly the span of what was added).
    '''
    k = defect_rank(seq, 1.0, tol)
    if len(candidate) < k:
        return False
    if verify_parseval(candidate.apply(seq), tol).ok:
        return k <= numerical_rank(candidate.added, tol)
    return True
