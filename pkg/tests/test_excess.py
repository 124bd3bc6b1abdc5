import numpy as np
import pytest
from hypothesis import given

import frameext as fx
from frameext.spectral import excess
from conftest import frames, contractions

s = 2 ** -0.5


def test_riesz_extraction():
    seq = fx.make_sequence(2, [(1, 0), (1, 0), (0, 1)])
    r = fx.riesz_extraction(seq)
    assert r.removed_indices == (1,)
    assert r.kept_indices == (0, 2)
    assert len(r) == 1
    assert r.remaining.allclose(fx.make_sequence(2, [(1, 0), (0, 1)]))

    r = fx.riesz_extraction(fx.make_sequence(2, [(1, 0), (0, 1), (1, 1)]))
    assert r.removed_indices == (2,)

    r = fx.riesz_extraction(fx.make_sequence(2, np.eye(2)))
    assert r.removed_indices == ()

    with pytest.raises(fx.FrameRequiredError):
        fx.riesz_extraction(fx.make_sequence(2, [(1, 0), (2, 0)]))


def test_excess_via_canonical():
    seq = fx.make_sequence(2, [(1, 0), (1, 0), (0, 1)])
    assert fx.excess_via_canonical(seq) == pytest.approx(1)
    assert fx.excess_via_canonical(fx.make_sequence(3, np.eye(3))) == pytest.approx(0, abs=1e-12)
    with pytest.raises(fx.FrameRequiredError):
        fx.excess_via_canonical(fx.make_sequence(2, [(1, 0)]))


def test_energy_identity():
    report = fx.energy_identity(fx.make_sequence(2, [(1, 0), (0, s)]))
    assert report.k == 1 and report.excess == 0
    assert report.added_energy == pytest.approx(0.5)
    assert report.defect_sum == pytest.approx(0.5)
    assert report.identity_residual < 1e-12

    report = fx.energy_identity(fx.make_sequence(2, [(0.5, 0), (0.5, 0), (0, 1)]))
    assert (report.k, report.excess) == (1, 1)
    assert report.added_energy == pytest.approx(0.5)
    assert report.defect_sum == pytest.approx(1.5)
    assert report.identity_residual < 1e-12

    # already Parseval, with excess
    report = fx.energy_identity(fx.make_sequence(2, [(s, 0), (s, 0), (0, 1)]))
    assert report.k == 0 and report.added_energy == 0
    assert report.identity_residual < 1e-12

    with pytest.raises(fx.UpperBoundError):
        fx.energy_identity(fx.make_sequence(2, [(1, 0), (1, 0), (0, 1)]))
    with pytest.raises(fx.FrameRequiredError):
        fx.energy_identity(fx.make_sequence(2, [(0.5, 0)]))


def test_defect_series_grows():
    # e1, e1, e2, e3: B = 2, every term contributes 1
    seq = fx.make_sequence(3, [(1, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])
    report = fx.defect_series(seq, [1, 2, 3, 4])
    assert report.B == pytest.approx(2)
    assert report.partial_sums == pytest.approx((1, 2, 3, 4))
    assert report.excess == 1
    assert report.adjusted_sums == pytest.approx((0, 1, 2, 3))
    assert report.verdict == 'growing'

    report = fx.defect_series(fx.generate('repeated_first', 8), [2, 4, 8])
    assert report.partial_sums == pytest.approx((2, 4, 8))
    assert report.adjusted_sums == pytest.approx((1, 3, 7))


def test_defect_series_bounded():
    seq = fx.make_sequence(2, [(0, s), (0, s), (1, 0)])
    report = fx.defect_series(seq, [2, 3])
    assert report.partial_sums == pytest.approx((1, 1))
    assert report.verdict == 'bounded'
    assert fx.defect_series(seq, [0]).partial_sums == (0.0,)


def test_defect_series_schedule():
    seq = fx.make_sequence(2, np.eye(2))
    for bad in [[], [2, 1], [1, 1], [3], [-1, 1]]:
        with pytest.raises(fx.ValidationError):
            fx.defect_series(seq, bad)


def test_remark_inequality():
    canonical, scaled = fx.remark_inequality(fx.make_sequence(2, [(1, 0), (1, 0), (0, 1)]))
    assert np.allclose(canonical, [0.5, 0.5, 0])
    assert np.allclose(scaled, [0.5, 0.5, 0.5])


def test_scaled_trace_defect():
    seq = fx.make_sequence(2, [(1, 0), (1, 0), (0, 1)])
    assert fx.scaled_trace_defect(seq) == pytest.approx(1.5)
    assert fx.scaled_trace_defect(fx.make_sequence(2, np.eye(2))) == pytest.approx(0, abs=1e-12)
    with pytest.raises(fx.DegenerateScaleError):
        fx.scaled_trace_defect(fx.make_sequence(2, [(0, 0)]))


@given(frames())
def test_excess_agrees(seq):
    e = excess(seq)
    assert fx.excess_via_canonical(seq) == pytest.approx(e, abs=1e-7)
    r = fx.riesz_extraction(seq)
    assert len(r.removed_indices) == e
    assert len(r.remaining) == seq.dim
    assert fx.diagnostics(r.remaining).is_frame

    canonical, scaled = fx.remark_inequality(seq)
    assert np.all(canonical <= scaled + 1e-8)
    assert fx.scaled_trace_defect(seq) >= e - 1e-8


@given(contractions())
def test_energy_identity_holds(seq):
    report = fx.energy_identity(seq)
    assert report.identity_residual < 1e-8
    assert report.k == fx.defect_rank(seq)


@given(frames())
def test_parseval_series_bounded_by_excess(seq):
    parseval = fx.parseval_canonical(seq)
    report = fx.defect_series(parseval, list(range(1, len(parseval) + 1)))
    assert max(report.partial_sums) <= report.excess + 1e-8
    assert report.partial_sums[-1] == pytest.approx(report.excess, abs=1e-8)
