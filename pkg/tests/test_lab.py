import numpy as np
import pytest

import frameext as fx
import frameext.lab as lab


def test_generators():
    assert set(lab.GENERATORS) == {
        'onb', 'shift_plus_identity', 'diag_sqrt_ratio', 'repeated_first', 'onb_damped_first'}
    seq = fx.generate('shift_plus_identity', 3)
    assert (seq.vectors == [[1, 0, 0], [1, 1, 0], [0, 1, 1]]).all()
    seq = fx.generate('repeated_first', 4)
    assert (seq.vectors == [[1, 0, 0, 0], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]).all()
    assert np.allclose(fx.generate('diag_sqrt_ratio', 3).norms_squared(), [1 / 2, 2 / 3, 3 / 4])
    assert np.allclose(fx.generate('onb_damped_first', 2).vectors, [[0.5, 0], [0, 1]])

    with pytest.raises(fx.ValidationError, match='unknown generator'):
        fx.generate('nope', 4)
    with pytest.raises(fx.ValidationError):
        fx.generate('onb', 0)
    assert fx.get_generator(lab.GENERATORS['onb']) is lab.GENERATORS['onb']


def test_cross_defects():
    f, g = fx.generate('shift_plus_identity', 5), fx.generate('diag_sqrt_ratio', 5)
    left_fg, right_fg = fx.cross_defects(f, g)
    left_gf, _ = fx.cross_defects(g, f)
    assert left_fg.shape == right_fg.shape == (5, 5)
    # (I - V*U)* = I - U*V
    assert np.allclose(left_fg.conj().T, left_gf)

    onb = fx.generate('onb', 4)
    left, right = fx.cross_defects(onb, onb)
    assert (left == 0).all() and (right == 0).all()
    with pytest.raises(fx.ValidationError):
        fx.cross_defects(onb, fx.generate('onb', 3))


def test_duality_finite_rank():
    report = fx.essential_duality_diagnostic('onb', 'onb', [8, 16, 32])
    assert report.left_defect_ranks == (0, 0, 0)
    assert report.classification == lab.FINITE_RANK_STABLE

    report = fx.essential_duality_diagnostic('onb_damped_first', 'onb', [8, 16, 32])
    assert report.left_defect_ranks == (1, 1, 1)
    assert report.classification == lab.FINITE_RANK_STABLE
    assert report.right_classification == lab.FINITE_RANK_STABLE


def test_duality_compact():
    report = fx.essential_duality_diagnostic('diag_sqrt_ratio', 'diag_sqrt_ratio', [8, 16, 32])
    assert report.left_defect_ranks == (8, 16, 32)
    assert report.classification == lab.COMPACT_DECAYING
    first, last = report.left_profiles[0], report.left_profiles[-1]
    assert first.head[0] == pytest.approx(1 / 2)
    assert last.tail[-1] == pytest.approx(1 / 33)
    assert first.median == pytest.approx((1 / 5 + 1 / 6) / 2)


def test_duality_non_decaying():
    report = fx.essential_duality_diagnostic('shift_plus_identity', 'onb', [8, 16, 32])
    assert report.classification == lab.NON_DECAYING


def test_duality_schedule():
    with pytest.raises(fx.ValidationError):
        fx.essential_duality_diagnostic('onb', 'onb', [8])
    with pytest.raises(fx.ValidationError):
        fx.essential_duality_diagnostic('onb', 'onb', [16, 8])
    with pytest.raises(fx.ValidationError):
        fx.essential_duality_diagnostic('onb', 'nope', [8, 16])


def test_duality_report_dict():
    report = fx.essential_duality_diagnostic('onb_damped_first', 'onb', [4, 8])
    d = report.as_dict()
    assert list(d) == ['left', 'right', 'schedule', 'per_N', 'classification', 'right_classification']
    assert d['schedule'] == [4, 8]
    assert [row['N'] for row in d['per_N']] == [4, 8]
    assert d['per_N'][0]['left_defect_rank'] == 1


def test_extendability():
    report = fx.extendability_diagnostic('shift_plus_identity', [16, 64, 256])
    assert report.deficit == (0, 0, 0)
    assert report.sigma_min[0] > 2 * report.sigma_min[-1]
    # sigma_min(I + shift) on N points is 2 sin(pi / (2 (2N + 1)))
    assert report.sigma_min[-1] == pytest.approx(2 * np.sin(np.pi / (2 * 513)), rel=1e-6)
    assert report.verdict == lab.NON_EXTENDABLE

    report = fx.extendability_diagnostic('onb', [8, 16])
    assert report.sigma_min == pytest.approx((1, 1))
    assert report.defect_rank == (0, 0)
    assert report.verdict == lab.EXTENDABLE

    report = fx.extendability_diagnostic('repeated_first', [4, 8])
    assert report.deficit == (1, 1)
    assert max(report.sigma_min) < 1e-12
    assert report.verdict == lab.EXTENDABLE

    assert [row['N'] for row in report.as_dict()['per_N']] == [4, 8]


def test_completion_trend():
    trend = fx.parseval_completion_trend('onb_damped_first', [4, 8, 16])
    assert trend.k == (1, 1, 1)
    assert trend.stabilizing
    assert trend.pairs == [(4, 1), (8, 1), (16, 1)]

    trend = fx.parseval_completion_trend('diag_sqrt_ratio', [4, 8, 16])
    assert trend.k == (4, 8, 16)
    assert not trend.stabilizing

    with pytest.raises(fx.UpperBoundError) as e:
        fx.parseval_completion_trend('repeated_first', [4, 8])
    assert e.value.size == 4
    assert e.value.bound == pytest.approx(2)


def test_workers_keep_schedule_order():
    schedule = [4, 8, 16, 32]
    serial = fx.parseval_completion_trend('diag_sqrt_ratio', schedule)
    threaded = fx.parseval_completion_trend('diag_sqrt_ratio', schedule, workers=4)
    assert threaded == serial

    serial = fx.extendability_diagnostic('shift_plus_identity', schedule)
    threaded = fx.extendability_diagnostic('shift_plus_identity', schedule, workers=3)
    assert threaded.sigma_min == serial.sigma_min


def test_doubling_schedule():
    report = fx.extendability_diagnostic('shift_plus_identity', lab.DEFAULT_SCHEDULE)
    assert report.deficit == (0,) * len(lab.DEFAULT_SCHEDULE)
    assert all(b < a for a, b in zip(report.sigma_min, report.sigma_min[1:]))
    assert report.sigma_min[-1] <= 2 / 16

    report = fx.extendability_diagnostic('diag_sqrt_ratio', lab.DEFAULT_SCHEDULE)
    assert report.defect_rank == lab.DEFAULT_SCHEDULE
