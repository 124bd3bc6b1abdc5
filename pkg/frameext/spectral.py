'''Spectral computations on the frame operator ``S = U*U``.

Ranks are always decided on singular values with the cutoff
``tau = rank_rtol * sigma_max + rank_atol`` (see :meth:`Tolerances.threshold`).
Rank questions about a sequence are asked of its rectangular analysis matrix, not
of the Gram matrix, which squares the condition number.

.. code-block:: python

    import frameext as fx

    seq = fx.make_sequence(2, [(1, 0), (1, 0), (0, 1)])
    info = fx.diagnostics(seq)
    assert (info.rank, info.deficit, info.excess) == (2, 0, 1)
    assert np.allclose(fx.optimal_bounds(seq), (1.0, 2.0))
'''
from __future__ import annotations
import logging
from dataclasses import dataclass
import numpy as np
import scipy.linalg

from .core import (
    DEFAULT_TOLERANCES, DTYPE, Tolerances, VectorSequence, FrameBounds, SubspaceBasis,
    FrameRequiredError, NotPositiveSemidefiniteError, ValidationError, analysis_matrix)

log = logging.getLogger(__name__)

__all__ = [
    'HermitianSpectrum', 'SequenceDiagnostics',
    'frame_operator', 'optimal_bounds', 'singular_values', 'numerical_rank',
    'hermitian_spectrum', 'diagnostics', 'deficit', 'excess',
    'hermitian_sqrt', 'canonical_dual', 'parseval_canonical', 'pseudo_inverse',
    'kernel_basis', 'kernel_projection', 'require_frame',
]


@dataclass(frozen=True, eq=False)
class HermitianSpectrum:
    '''Eigenvalues in descending order and the matching orthonormal eigenvectors (as rows).'''
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __len__(self):
        return len(self.eigenvalues)

    def reconstruct(self, values=None) -> np.ndarray:
        '''``sum_i g(lambda_i) v_i v_i*``, with ``g(lambda_i)`` given by ``values``.'''
        w = self.eigenvalues if values is None else np.asarray(values)
        V = self.eigenvectors
        return (V.T * w) @ V.conj()

    def select(self, mask) -> 'HermitianSpectrum':
        mask = np.asarray(mask, dtype=bool)
        return HermitianSpectrum(self.eigenvalues[mask], self.eigenvectors[mask])

    def subspace(self, mask=None) -> SubspaceBasis:
        V = self.eigenvectors if mask is None else self.eigenvectors[np.asarray(mask, dtype=bool)]
        return SubspaceBasis(self.eigenvectors.shape[1], V)


@dataclass(frozen=True)
class SequenceDiagnostics:
    '''Everything :func:`diagnostics` knows about a sequence.

    ``excess_caveat`` is set for non-frames: the count ``n - rank`` is reported, but for a
    Bessel sequence that does not span it is not the frame-preserving excess.
    ``borderline`` is set when a retained singular value sits within ``10 tau`` of the
    cutoff, i.e. the rank decision depended on the tolerances.
    '''
    dim: int
    n: int
    bounds: FrameBounds
    rank: int
    deficit: int
    excess: int
    is_frame: bool
    is_parseval: bool
    parseval_residual: float
    excess_caveat: bool
    borderline: bool


# ------------------------------- Operators --------------------------------- #

def _hermitize(M: np.ndarray) -> np.ndarray:
    return (M + M.conj().T) / 2


def frame_operator(seq: VectorSequence) -> np.ndarray:
    '''``S = U*U = sum_n f_n f_n*`` as a ``(d, d)`` Hermitian matrix.

    .. code-block:: python

        S = frame_operator(make_sequence(2, [(1, 0), (1, 0), (0, 1)]))
        assert np.allclose(S, np.diag([2, 1]))
    '''
    F = seq.synthesis
    return _hermitize(F @ F.conj().T)


def singular_values(M) -> np.ndarray:
    '''Singular values in descending order (empty for an empty matrix).'''
    M = np.asarray(M, dtype=DTYPE)
    if M.size == 0:
        return np.zeros(0)
    return scipy.linalg.svd(M, compute_uv=False)


def _rank_from_singular_values(s: np.ndarray, tol: Tolerances) -> int:
    if not len(s):
        return 0
    return int(np.sum(s > tol.threshold(s[0])))


def numerical_rank(M, tol: Tolerances = DEFAULT_TOLERANCES) -> int:
    '''Count the singular values above ``tau = rank_rtol * sigma_max + rank_atol``.

    .. code-block:: python

        assert numerical_rank(np.eye(3)) == 3
        assert numerical_rank(np.diag([1, 1e-15, 0])) == 1
    '''
    return _rank_from_singular_values(singular_values(M), tol)


def hermitian_spectrum(M, tol: Tolerances = DEFAULT_TOLERANCES) -> HermitianSpectrum:
    '''Eigendecomposition of a Hermitian matrix, sorted descending.

    Each eigenvector is rotated so its first coordinate of modulus above ``tau`` is real
    and positive. Ties keep the solver's order (the sort is stable).
    '''
    M = _hermitize(np.asarray(M, dtype=DTYPE))
    if M.size == 0:
        return HermitianSpectrum(np.zeros(0), np.zeros((0, M.shape[0] if M.ndim == 2 else 0), dtype=DTYPE))
    w, V = scipy.linalg.eigh(M)
    order = np.argsort(-w, kind='stable')
    w, V = w[order], V[:, order].T.copy()

    tau = tol.threshold(1.0)
    for v in V:
        big = np.flatnonzero(np.abs(v) > tau)
        if len(big):
            c = v[big[0]]
            v *= np.conj(c) / abs(c)
    return HermitianSpectrum(w, V)


def optimal_bounds(seq: VectorSequence, tol: Tolerances = DEFAULT_TOLERANCES) -> FrameBounds:
    '''Optimal frame bounds: ``B = sigma_max(U)^2``, ``A = sigma_min(U)^2``.

    The singular values are the ones :func:`numerical_rank` counts, so ``A > 0`` exactly
    when the sequence spans.
    '''
    s = singular_values(analysis_matrix(seq).entries)
    if not len(s):
        return FrameBounds(0.0, 0.0)
    spans = _rank_from_singular_values(s, tol) == seq.dim
    return FrameBounds(float(s[seq.dim - 1]) ** 2 if spans else 0.0, float(s[0]) ** 2)


def parseval_residual(seq: VectorSequence, bound: float = 1.0) -> float:
    '''``||U*U - bound I||_F``'''
    return float(np.linalg.norm(frame_operator(seq) - bound * np.eye(seq.dim)))


def diagnostics(seq: VectorSequence, tol: Tolerances = DEFAULT_TOLERANCES) -> SequenceDiagnostics:
    '''Bounds, rank, deficit (``dim Ker U``) and excess (``dim Ker U*``) of a sequence.

    .. code-block:: python

        info = diagnostics(make_sequence(2, [(0.5, 0)]))
        assert (info.rank, info.deficit, info.excess, info.is_frame) == (1, 1, 0, False)
    '''
    s = singular_values(analysis_matrix(seq).entries)
    rank = _rank_from_singular_values(s, tol)
    tau = tol.threshold(s[0]) if len(s) else tol.threshold(0)
    kept = s[:rank]
    borderline = bool(np.any(kept - tau <= 10 * tau))

    residual = parseval_residual(seq)
    is_frame = rank == seq.dim
    info = SequenceDiagnostics(
        dim=seq.dim, n=len(seq),
        bounds=optimal_bounds(seq, tol),
        rank=rank,
        deficit=seq.dim - rank,
        excess=len(seq) - rank,
        is_frame=is_frame,
        is_parseval=residual <= tol.verify_tol * np.sqrt(seq.dim),
        parseval_residual=residual,
        excess_caveat=not is_frame,
        borderline=borderline)
    log.debug('diagnostics: %s', info)
    return info


def deficit(seq: VectorSequence, tol: Tolerances = DEFAULT_TOLERANCES) -> int:
    '''``dim Ker U``: how many vectors must be added before the sequence spans.'''
    return seq.dim - numerical_rank(analysis_matrix(seq).entries, tol)


def excess(seq: VectorSequence, tol: Tolerances = DEFAULT_TOLERANCES) -> int:
    '''``dim Ker U*``: how many vectors can be deleted without losing the span.'''
    return len(seq) - numerical_rank(analysis_matrix(seq).entries, tol)


def require_frame(seq: VectorSequence, tol: Tolerances = DEFAULT_TOLERANCES, operation=None) -> None:
    '''Raise :class:`FrameRequiredError` unless the sequence spans.'''
    missing = deficit(seq, tol)
    if missing:
        raise FrameRequiredError(missing, operation)


# --------------------------- Functions of S -------------------------------- #

def hermitian_sqrt(M, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    '''The positive semidefinite square root of a Hermitian PSD matrix.

    Eigenvalues in ``[-verify_tol, 0)`` are treated as rounding noise and clipped to 0.

    Raises:
        NotPositiveSemidefiniteError: if an eigenvalue is below ``-verify_tol``.
    '''
    spec = hermitian_spectrum(M, tol)
    if len(spec) and spec.eigenvalues[-1] < -tol.verify_tol:
        raise NotPositiveSemidefiniteError(float(spec.eigenvalues[-1]))
    return _hermitize(spec.reconstruct(np.sqrt(np.clip(spec.eigenvalues, 0, None))))


def _frame_power(seq: VectorSequence, power: float, tol: Tolerances, operation: str) -> np.ndarray:
    '''``S^power = V diag(s^(2 power)) V*`` for a frame, from the SVD of ``U``.'''
    require_frame(seq, tol, operation)
    _, s, Vh = scipy.linalg.svd(analysis_matrix(seq).entries, full_matrices=False)
    return _hermitize((Vh.conj().T * s ** (2 * power)) @ Vh)


def canonical_dual(seq: VectorSequence, tol: Tolerances = DEFAULT_TOLERANCES) -> VectorSequence:
    '''The canonical dual ``f~_n = S^-1 f_n``; ``x = sum <x, f~_n> f_n``.

    Raises:
        FrameRequiredError: if the sequence does not span (``deficit`` is attached).
    '''
    S_inv = _frame_power(seq, -1.0, tol, 'canonical_dual')
    return VectorSequence(seq.dim, (S_inv @ seq.synthesis).T)


def parseval_canonical(seq: VectorSequence, tol: Tolerances = DEFAULT_TOLERANCES) -> VectorSequence:
    '''The canonical Parseval frame ``f-_n = S^-1/2 f_n``.

    Raises:
        FrameRequiredError: if the sequence does not span.
    '''
    S_isqrt = _frame_power(seq, -0.5, tol, 'parseval_canonical')
    return VectorSequence(seq.dim, (S_isqrt @ seq.synthesis).T)


def pseudo_inverse(M, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    '''Moore-Penrose pseudo-inverse; singular values at or below ``tau`` count as zero.

    .. code-block:: python

        assert np.allclose(pseudo_inverse([[0.5, 0]]), [[2], [0]])
    '''
    M = np.asarray(M, dtype=DTYPE)
    if M.ndim != 2:
        raise ValidationError('pseudo_inverse expects a matrix, got shape {}'.format(M.shape))
    if M.size == 0:
        return np.zeros(M.shape[::-1], dtype=DTYPE)
    W, s, Vh = scipy.linalg.svd(M, full_matrices=False)
    r = _rank_from_singular_values(s, tol)
    return (Vh[:r].conj().T / s[:r]) @ W[:, :r].conj().T


def kernel_basis(seq: VectorSequence, tol: Tolerances = DEFAULT_TOLERANCES) -> SubspaceBasis:
    '''Orthonormal basis of ``Ker U``, the directions the sequence misses.'''
    U = analysis_matrix(seq).entries
    if not len(seq):
        return SubspaceBasis(seq.dim, np.eye(seq.dim, dtype=DTYPE))
    _, s, Vh = scipy.linalg.svd(U, full_matrices=True)
    r = _rank_from_singular_values(s, tol)
    K = Vh[r:].conj()  # rows of Vh are conj of right singular vectors
    # canonical phases, as for eigenvectors
    return hermitian_spectrum(K.T @ K.conj(), tol).subspace(np.arange(seq.dim) < len(K))


def kernel_projection(seq: VectorSequence, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    '''``P = I - U^dagger U``, the orthogonal projection onto ``Ker U``.'''
    U = analysis_matrix(seq).entries
    return np.eye(seq.dim) - pseudo_inverse(U, tol) @ U
