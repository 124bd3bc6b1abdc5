import numpy as np
import pytest
from hypothesis import given

import frameext as fx
from frameext.spectral import excess, deficit, parseval_residual
from conftest import frames, contractions


def test_frame_operator_and_bounds():
    seq = fx.make_sequence(2, [(1, 0), (1, 0), (0, 1)])
    assert np.allclose(fx.frame_operator(seq), np.diag([2, 1]))
    A, B = fx.optimal_bounds(seq)
    assert (A, B) == pytest.approx((1.0, 2.0))

    # does not span: A is exactly zero
    A, B = fx.optimal_bounds(fx.make_sequence(2, [(0.5, 0)]))
    assert A == 0 and B == pytest.approx(0.25)
    assert fx.optimal_bounds(fx.make_sequence(2, [])) == fx.FrameBounds(0.0, 0.0)


def test_numerical_rank():
    assert fx.numerical_rank(np.eye(3)) == 3
    assert fx.numerical_rank(np.diag([1, 1e-15, 0])) == 1
    assert fx.numerical_rank(np.zeros((2, 2))) == 0
    assert fx.numerical_rank(np.zeros((0, 3))) == 0
    # the cutoff moves with the tolerances
    loose = fx.Tolerances(rank_rtol=1e-3)
    assert fx.numerical_rank(np.diag([1, 1e-4])) == 2
    assert fx.numerical_rank(np.diag([1, 1e-4]), loose) == 1


def test_diagnostics():
    info = fx.diagnostics(fx.make_sequence(2, [(1, 0), (1, 0), (0, 1)]))
    assert (info.dim, info.n, info.rank, info.deficit, info.excess) == (2, 3, 2, 0, 1)
    assert info.is_frame and not info.is_parseval and not info.excess_caveat
    assert tuple(info.bounds) == pytest.approx((1.0, 2.0))
    assert info.parseval_residual == pytest.approx(1.0)
    assert not info.borderline

    info = fx.diagnostics(fx.make_sequence(2, [(0.5, 0)]))
    assert (info.rank, info.deficit, info.excess, info.is_frame) == (1, 1, 0, False)
    assert info.excess_caveat

    onb = fx.diagnostics(fx.make_sequence(3, np.eye(3)))
    assert onb.is_parseval and tuple(onb.bounds) == pytest.approx((1.0, 1.0))

    # a singular value just above the cutoff
    info = fx.diagnostics(fx.make_sequence(2, [(1, 0), (0, 5e-10)]))
    assert info.rank == 2 and info.borderline

    empty = fx.diagnostics(fx.make_sequence(2, []))
    assert (empty.rank, empty.deficit, empty.excess, empty.is_frame) == (0, 2, 0, False)


def test_hermitian_spectrum():
    M = np.array([[2, 1j], [-1j, 2]])
    spec = fx.hermitian_spectrum(M)
    assert np.allclose(spec.eigenvalues, [3, 1])
    assert np.allclose(spec.reconstruct(), M)
    # first significant coordinate of each eigenvector is real and positive
    for v in spec.eigenvectors:
        assert v[0].real > 0 and abs(v[0].imag) < 1e-15
    V = spec.eigenvectors
    assert np.allclose(V.conj() @ V.T, np.eye(2))

    top = spec.select([True, False])
    assert len(top) == 1 and top.eigenvalues[0] == pytest.approx(3)
    assert spec.subspace([False, True]).rank == 1

    # stable order on ties
    spec = fx.hermitian_spectrum(np.eye(3))
    assert np.allclose(spec.eigenvalues, 1)
    assert np.allclose(spec.reconstruct(), np.eye(3))


def test_hermitian_sqrt():
    M = np.array([[4, 0], [0, 9]])
    assert np.allclose(fx.hermitian_sqrt(M), [[2, 0], [0, 3]])
    R = fx.hermitian_sqrt(np.array([[2, 1j], [-1j, 2]]))
    assert np.allclose(R @ R, [[2, 1j], [-1j, 2]])
    assert np.allclose(fx.hermitian_sqrt(np.diag([1, -1e-12])), np.diag([1, 0]))
    with pytest.raises(fx.NotPositiveSemidefiniteError) as e:
        fx.hermitian_sqrt(np.diag([1, -0.5]))
    assert e.value.min_eigenvalue == pytest.approx(-0.5)


def test_canonical_dual():
    seq = fx.make_sequence(2, [(1, 0), (1, 0), (0, 1)])
    dual = fx.canonical_dual(seq)
    assert np.allclose(dual.vectors, [[0.5, 0], [0.5, 0], [0, 1]])

    with pytest.raises(fx.FrameRequiredError) as e:
        fx.canonical_dual(fx.make_sequence(2, [(1, 0)]))
    assert e.value.deficit == 1
    with pytest.raises(fx.FrameRequiredError):
        fx.parseval_canonical(fx.make_sequence(2, []))


def test_parseval_canonical():
    seq = fx.make_sequence(2, [(1, 0), (1, 0), (0, 1)])
    canonical = fx.parseval_canonical(seq)
    s = 2 ** -0.5
    assert np.allclose(canonical.vectors, [[s, 0], [s, 0], [0, 1]])
    assert fx.verify_parseval(canonical).ok


def test_pseudo_inverse_and_kernel():
    assert np.allclose(fx.pseudo_inverse([[0.5, 0]]), [[2], [0]])
    with pytest.raises(fx.ValidationError):
        fx.pseudo_inverse([1, 2])

    seq = fx.make_sequence(3, [(1, 0, 0), (1, 1, 0)])
    K = fx.kernel_basis(seq)
    assert K.rank == 1
    assert np.allclose(K.basis, [[0, 0, 1]])
    assert np.allclose(fx.kernel_projection(seq), K.projector())

    assert fx.kernel_basis(fx.make_sequence(2, [])).rank == 2
    assert fx.kernel_basis(fx.make_sequence(2, np.eye(2))).rank == 0


def test_require_frame():
    fx.require_frame(fx.make_sequence(1, [(1,)]))
    with pytest.raises(fx.FrameRequiredError, match='riesz'):
        fx.require_frame(fx.make_sequence(2, [(1, 0)]), operation='riesz')


def test_ill_conditioned_frame():
    # rotated frame with sigma_min just above the rank cutoff
    c = 2 ** -0.5
    seq = fx.make_sequence(2, [(c, c), (3e-10 * c, -3e-10 * c)])
    info = fx.diagnostics(seq)
    assert info.rank == 2 and info.is_frame
    assert info.bounds.lower > 0
    assert info.bounds.lower == pytest.approx(9e-20, rel=1e-4)
    assert info.borderline

    fx.require_frame(seq)
    assert np.isfinite(fx.canonical_dual(seq).vectors).all()
    canonical = fx.parseval_canonical(seq)
    assert np.allclose(canonical.vectors, [[c, c], [c, -c]], atol=1e-5)
    assert fx.excess_via_canonical(seq) == pytest.approx(0, abs=1e-5)


@given(frames())
def test_dual_reconstructs(seq):
    dual = fx.canonical_dual(seq)
    # x = sum <x, f~_n> f_n for every x
    assert np.allclose(seq.synthesis @ dual.vectors.conj(), np.eye(seq.dim), atol=1e-7)
    assert fx.verify_parseval(fx.parseval_canonical(seq)).ok
    assert excess(seq) == len(seq) - seq.dim
    assert deficit(seq) == 0


@given(contractions(spanning=False))
def test_kernel_matches_projection(seq):
    K = fx.kernel_basis(seq)
    assert K.rank == deficit(seq) > 0
    assert K.gram_residual() < 1e-8
    assert np.allclose(fx.kernel_projection(seq), K.projector(), atol=1e-8)
    # the kernel of U is orthogonal to every vector
    assert np.allclose(K.basis.conj() @ seq.vectors.T, 0, atol=1e-8)


@given(contractions())
def test_bounds_sandwich_norms(seq):
    A, B = fx.optimal_bounds(seq)
    assert 0 <= A <= B <= 1 + 1e-12
    assert np.all(seq.norms_squared() <= B + 1e-12)
    assert parseval_residual(seq) >= 0


@given(frames())
def test_frame_iff_positive_lower_bound(seq):
    info = fx.diagnostics(seq)
    assert info.is_frame == (info.rank == seq.dim) == (info.bounds.lower > 0)


@given(contractions(spanning=False))
def test_non_frame_has_zero_lower_bound(seq):
    info = fx.diagnostics(seq)
    assert not info.is_frame
    assert info.bounds.lower == 0
