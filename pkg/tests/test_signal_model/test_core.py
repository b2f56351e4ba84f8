import numpy as np
import pytest

from ifreq.series import SeriesError
from ifreq.signal_model import ThreePhaseSignal, SequencePhasors, \
    sequence_phasors, ALPHA


class TestThreePhaseSignal:

    def test_init_setsAttrs(self):
        sig = ThreePhaseSignal(0.5, 1e-3, [[1, 2, 3]] * 4, 'trace:x.csv')
        assert sig.t0 == 0.5
        assert sig.dt == 1e-3
        assert len(sig) == 4
        assert sig.provenance == 'trace:x.csv'

    def test_init_onWrongShape_raisesSeriesError(self):
        with pytest.raises(SeriesError):
            ThreePhaseSignal(0, 1, [[1, 2]] * 4)

    def test_init_onLessThan3Samples_raisesSeriesError(self):
        with pytest.raises(SeriesError):
            ThreePhaseSignal(0, 1, [[1, 2, 3]] * 2)

    @pytest.mark.parametrize('dt', [0, -1e-3, np.nan])
    def test_init_onInvalidDt_raisesSeriesError(self, dt):
        with pytest.raises(SeriesError):
            ThreePhaseSignal(0, dt, [[1, 2, 3]] * 3)

    def test_init_onNonFiniteSample_raisesSeriesErrorWithIndex(self):
        samples = np.zeros((5, 3))
        samples[3, 1] = np.inf
        with pytest.raises(SeriesError) as exc_info:
            ThreePhaseSignal(0, 1, samples)
        assert exc_info.value.index == 3

    def test_phases_returnColumns(self):
        sig = ThreePhaseSignal(0, 1, [[1, 2, 3], [4, 5, 6], [7, 8, 9]])
        assert list(sig.va) == [1, 4, 7]
        assert list(sig.vb) == [2, 5, 8]
        assert list(sig.phase('c')) == [3, 6, 9]

    def test_phase_onUnknownName_raisesValueError(self):
        sig = ThreePhaseSignal(0, 1, np.zeros((3, 3)))
        with pytest.raises(ValueError):
            sig.phase('d')

    def test_t_returnsSampleTimes(self):
        sig = ThreePhaseSignal(1.0, 0.5, np.zeros((3, 3)))
        assert list(sig.t) == [1.0, 1.5, 2.0]

    def test_transformed_appliesMatrixToEverySample(self):
        sig = ThreePhaseSignal(0, 1, [[1, 2, 3], [4, 5, 6], [7, 8, 9]])
        swapped = sig.transformed([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
        assert list(swapped.va) == [2, 5, 8]
        assert list(swapped.vb) == [1, 4, 7]
        assert list(swapped.vc) == [3, 6, 9]

    def test_eq_ignoresProvenance(self):
        assert ThreePhaseSignal(0, 1, np.ones((3, 3)), 'spec:1') \
               == ThreePhaseSignal(0, 1, np.ones((3, 3)), 'trace:2')


class TestSequencePhasors:

    def test_onPositiveSequence_returnsPositiveOnly(self):
        seq = sequence_phasors([1, ALPHA**2, ALPHA])
        assert seq.positive == pytest.approx(1)
        assert abs(seq.negative) < 1e-15
        assert abs(seq.zero) < 1e-15

    def test_onZeroSequence_returnsZeroOnly(self):
        seq = sequence_phasors([1, 1, 1])
        assert abs(seq.positive) < 1e-15
        assert abs(seq.negative) < 1e-15
        assert seq.zero == pytest.approx(1)

    def test_onNegativeSequence_returnsNegativeOnly(self):
        seq = sequence_phasors([1, ALPHA, ALPHA**2])
        assert seq.negative == pytest.approx(1)
        assert abs(seq.positive) < 1e-15

    def test_phases_reconstructsInputs(self):
        phasors = np.array([1, ALPHA**2 + 0.1, ALPHA])
        seq = sequence_phasors(phasors)
        np.testing.assert_allclose(seq.phases(), phasors, rtol=0, atol=1e-12)

    def test_onArrayOfInstants_decomposesEveryColumn(self):
        phasors = np.array([[1, 1], [ALPHA**2, 1], [ALPHA, 1]])
        positive, negative, zero = sequence_phasors(phasors)
        np.testing.assert_allclose(positive, [1, 0], atol=1e-15)
        np.testing.assert_allclose(zero, [0, 1], atol=1e-15)

    def test_decomposeOfReconstruction_isIdentity(self):
        rng = np.random.default_rng(7)
        seq = SequencePhasors(*(rng.normal(size=3) + 1j*rng.normal(size=3)))
        result = sequence_phasors(seq.phases())
        for actual, expected in zip(result, seq):
            assert abs(actual - expected) <= 1e-12 * abs(expected)

    def test_onNonFiniteInput_raisesValueError(self):
        with pytest.raises(ValueError):
            sequence_phasors([1, np.nan, 1])

    def test_onWrongCount_raisesValueError(self):
        with pytest.raises(ValueError):
            sequence_phasors([1, 1])
