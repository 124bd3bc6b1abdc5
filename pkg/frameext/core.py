'''The data model: finite vector sequences in a complex inner-product space.

Everything downstream works with a :class:`VectorSequence` (the vectors ``f_1, ..., f_n``
in ``C^d``) and a :class:`Tolerances` object that decides every numerical rank and
every "is this equal to that" check.

.. code-block:: python

    import frameext

    seq = frameext.make_sequence(2, [(1, 0), (1, 0), (0, 1)])
    U = frameext.analysis_matrix(seq)
    assert U.shape == (3, 2)
    assert (U.adjoint[:, 1] == seq.vectors[1]).all()  # U* e_n = f_n

The inner product is linear in the first argument, ``<x, f> = sum_j x_j conj(f_j)``,
so the analysis operator is ``(Ux)_n = <x, f_n>``.
'''
from __future__ import annotations
import dataclasses
from dataclasses import dataclass, field
from typing import Iterable, Sequence
import numpy as np

__all__ = [
    'FrameextError', 'InputError', 'ValidationError', 'PreconditionError',
    'FrameRequiredError', 'UpperBoundError', 'BelowMinimalError',
    'NotPositiveSemidefiniteError', 'DegenerateScaleError',
    'Tolerances', 'DEFAULT_TOLERANCES',
    'VectorSequence', 'AnalysisMatrix', 'FrameBounds', 'SubspaceBasis', 'Extension',
    'PREPENDED', 'make_sequence', 'as_sequence', 'analysis_matrix',
]

DTYPE = np.complex128


# --------------------------------- Errors ---------------------------------- #

class FrameextError(ValueError):
    '''Base class for everything this package raises on purpose.'''


class InputError(FrameextError):
    '''The input could not be understood (bad shapes, bad files, unknown names).'''


class ValidationError(InputError):
    '''A value failed validation. ``index`` names the offending vector, if any.'''
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class PreconditionError(FrameextError):
    '''The input is well formed but an operation's mathematical precondition fails.'''


class FrameRequiredError(PreconditionError):
    def __init__(self, deficit, operation=None):
        super().__init__('{}frame required: the sequence does not span (deficit {})'.format(
            '{}: '.format(operation) if operation else '', deficit))
        self.deficit = deficit


class UpperBoundError(PreconditionError):
    def __init__(self, bound, limit=1.0, size=None):
        where = ' at N={}'.format(size) if size is not None else ''
        super().__init__('upper bound exceeds {}{}: B={!r}'.format(limit, where, bound))
        self.bound = bound
        self.size = size


class BelowMinimalError(PreconditionError):
    def __init__(self, slots, k):
        super().__init__(
            'below minimal count: {} slots requested but at least k={} are needed'.format(slots, k))
        self.slots = slots
        self.k = k


class NotPositiveSemidefiniteError(PreconditionError):
    def __init__(self, min_eigenvalue):
        super().__init__('not positive semidefinite: smallest eigenvalue {!r}'.format(min_eigenvalue))
        self.min_eigenvalue = min_eigenvalue


class DegenerateScaleError(PreconditionError):
    def __init__(self, operation='operation'):
        super().__init__(
            '{}: no finite upper bound scale (the sequence is empty or all zero, B = 0)'.format(operation))


# ------------------------------- Tolerances -------------------------------- #

@dataclass(frozen=True)
class Tolerances:
    '''Numerical thresholds shared by every operation.

    Arguments:
        rank_rtol (float): relative part of the rank threshold.
        rank_atol (float): absolute part of the rank threshold.
        verify_tol (float): residual threshold for operator equalities.
        bound_slack (float): slack allowed on ``B <= 1`` preconditions.
    '''
    rank_rtol: float = 1e-10
    rank_atol: float = 1e-12
    verify_tol: float = 1e-8
    bound_slack: float = 1e-10

    def __post_init__(self):
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, (int, float, np.floating)) or isinstance(value, bool):
                raise ValidationError('{} must be a real number, got {!r}'.format(f.name, value))
            if not (0 < value <= 1e-2):
                raise ValidationError('{} must lie in (0, 1e-2], got {!r}'.format(f.name, value))
            object.__setattr__(self, f.name, float(value))

    def threshold(self, scale: float) -> float:
        '''The rank cutoff ``tau = rank_rtol * scale + rank_atol``.'''
        return self.rank_rtol * float(scale) + self.rank_atol

    def replace(self, **kw) -> 'Tolerances':
        return dataclasses.replace(self, **kw)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


DEFAULT_TOLERANCES = Tolerances()


# -------------------------------- Sequences -------------------------------- #

def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=DTYPE, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class VectorSequence:
    '''An ordered list of ``n`` vectors in ``C^dim``, stored as an ``(n, dim)`` array.

    Any finite sequence is Bessel, so there is nothing to check beyond shapes.
    '''
    dim: int
    vectors: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'vectors', _frozen(np.reshape(self.vectors, (-1, self.dim))))

    def __len__(self):
        return self.vectors.shape[0]

    def __iter__(self):
        return iter(self.vectors)

    def __getitem__(self, i):
        return self.vectors[i]

    def __repr__(self):
        return '{}(dim={}, n={})'.format(self.__class__.__name__, self.dim, len(self))

    @property
    def n(self) -> int:
        return len(self)

    @property
    def synthesis(self) -> np.ndarray:
        '''The ``(dim, n)`` synthesis matrix ``U*`` whose columns are the vectors.'''
        return self.vectors.T

    def norms_squared(self) -> np.ndarray:
        return np.sum(np.abs(self.vectors) ** 2, axis=1)

    def energy(self) -> float:
        '''``sum ||f_n||^2``'''
        return float(np.sum(self.norms_squared()))

    def scaled(self, c: complex) -> 'VectorSequence':
        return VectorSequence(self.dim, self.vectors * c)

    def prepend(self, added: 'np.ndarray|VectorSequence') -> 'VectorSequence':
        '''``added ++ self``'''
        added = np.reshape(np.asarray(getattr(added, 'vectors', added), dtype=DTYPE), (-1, self.dim))
        return VectorSequence(self.dim, np.concatenate([added, self.vectors]))

    def take(self, indices: Iterable[int]) -> 'VectorSequence':
        return VectorSequence(self.dim, self.vectors[list(indices)])

    def drop(self, count: int) -> 'VectorSequence':
        '''The sequence without its first ``count`` vectors.'''
        return VectorSequence(self.dim, self.vectors[count:])

    def allclose(self, other: 'VectorSequence', atol: float = 1e-8) -> bool:
        return (self.dim == other.dim and len(self) == len(other)
                and bool(np.allclose(self.vectors, other.vectors, rtol=0, atol=atol)))


def make_sequence(dim: int, vectors: Iterable[Sequence[complex]]|np.ndarray) -> VectorSequence:
    '''Validate ``vectors`` as a sequence in ``C^dim``.

    Real input is embedded with zero imaginary parts and the order is preserved.

    Raises:
        ValidationError: if ``dim`` is not a positive integer, a vector does not have
            ``dim`` coordinates (``index`` names it), or a coordinate is not finite.

    .. code-block:: python

        seq = make_sequence(2, [(1, 0), (0, 1)])
        assert len(seq) == 2
        make_sequence(2, [(1, 0, 0)])  # ValidationError, index 0
        make_sequence(3, [])  # empty, still a (Bessel) sequence
    '''
    if isinstance(dim, bool) or not isinstance(dim, (int, np.integer)) or dim < 1:
        raise ValidationError('dim must be a positive integer, got {!r}'.format(dim))
    dim = int(dim)

    rows = list(vectors)
    out = np.zeros((len(rows), dim), dtype=DTYPE)
    for i, v in enumerate(rows):
        try:
            v = np.asarray(v, dtype=DTYPE)
        except (TypeError, ValueError) as e:
            raise ValidationError('vector {} is not numeric: {}'.format(i, e), index=i) from e
        if v.ndim != 1 or v.shape[0] != dim:
            raise ValidationError('vector {} has shape {}, expected ({},)'.format(i, v.shape, dim), index=i)
        if not np.all(np.isfinite(v)):
            raise ValidationError('vector {} has non-finite coordinates'.format(i), index=i)
        out[i] = v
    return VectorSequence(dim, out)


def as_sequence(obj, dim: int|None = None) -> VectorSequence:
    '''Pass a :class:`VectorSequence` through, or validate a 2d array-like as one.'''
    if isinstance(obj, VectorSequence):
        if dim is not None and obj.dim != dim:
            raise ValidationError('expected a sequence in dimension {}, got {}'.format(dim, obj.dim))
        return obj
    a = np.asarray(obj)
    if dim is None:
        if a.ndim != 2:
            raise ValidationError('cannot infer the dimension of an array with shape {}'.format(a.shape))
        dim = a.shape[1]
    return make_sequence(dim, a)


# ---------------------------- Analysis operator ---------------------------- #

@dataclass(frozen=True, eq=False)
class AnalysisMatrix:
    '''The ``(n, d)`` matrix of ``U``; row ``i`` is ``conj(f_i)`` so ``(Ux)_i = <x, f_i>``.'''
    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'entries', _frozen(self.entries))

    @property
    def shape(self):
        return self.entries.shape

    @property
    def adjoint(self) -> np.ndarray:
        '''The synthesis operator ``U*``; ``U* e_i = f_i``.'''
        return self.entries.conj().T

    def __call__(self, x) -> np.ndarray:
        return self.entries @ np.asarray(x, dtype=DTYPE)

    def synthesize(self, coefficients) -> np.ndarray:
        '''``U* c = sum_n c_n f_n``'''
        return self.adjoint @ np.asarray(coefficients, dtype=DTYPE)

    def to_sequence(self) -> VectorSequence:
        '''Read the vectors back off the columns of the adjoint.'''
        return make_sequence(self.shape[1], self.adjoint.T)


def analysis_matrix(seq: VectorSequence) -> AnalysisMatrix:
    '''The matrix of the analysis operator ``U``.

    .. code-block:: python

        U = analysis_matrix(make_sequence(2, [(0, 1j)]))
        assert (U.entries == [[0, -1j]]).all()
    '''
    return AnalysisMatrix(seq.vectors.conj())


# ------------------------------ Result types ------------------------------- #

@dataclass(frozen=True)
class FrameBounds:
    '''Optimal frame bounds ``(A, B)``: extreme eigenvalues of the frame operator.'''
    lower: float
    upper: float

    def __iter__(self):
        return iter((self.lower, self.upper))


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    '''An orthonormal basis of a subspace of ``C^dim``, stored as ``(k, dim)`` rows.'''
    dim: int
    basis: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'basis', _frozen(np.reshape(self.basis, (-1, self.dim))))

    def __len__(self):
        return self.basis.shape[0]

    @property
    def rank(self) -> int:
        return len(self)

    @property
    def codim(self) -> int:
        return self.dim - len(self)

    def projector(self) -> np.ndarray:
        '''Orthogonal projection onto the span.'''
        B = self.basis
        return B.T @ B.conj()

    def distance(self, x) -> float:
        '''``||x - Px||``'''
        x = np.asarray(x, dtype=DTYPE)
        return float(np.linalg.norm(x - self.projector() @ x))

    def gram_residual(self) -> float:
        B = self.basis
        return float(np.linalg.norm(B.conj() @ B.T - np.eye(len(self)))) if len(self) else 0.0


PREPENDED = 'prepended'


@dataclass(frozen=True, eq=False)
class Extension:
    '''Vectors ``x_1, ..., x_k`` placed before the original sequence.

    ``k_minimal`` is the least number of vectors any extension of the same kind needs
    (when the producing operation knows it).
    '''
    dim: int
    added: np.ndarray
    k_minimal: int|None = None
    placement: str = field(default=PREPENDED, init=False)

    def __post_init__(self):
        object.__setattr__(self, 'added', _frozen(np.reshape(self.added, (-1, self.dim))))

    def __len__(self):
        return self.added.shape[0]

    @property
    def sequence(self) -> VectorSequence:
        return VectorSequence(self.dim, self.added)

    def apply(self, seq: VectorSequence) -> VectorSequence:
        '''The extended sequence ``added ++ seq``.'''
        if seq.dim != self.dim:
            raise ValidationError('extension lives in dimension {}, sequence in {}'.format(self.dim, seq.dim))
        return seq.prepend(self.added)

    def energy(self) -> float:
        '''``sum ||x_n||^2``'''
        return float(np.sum(np.abs(self.added) ** 2))

