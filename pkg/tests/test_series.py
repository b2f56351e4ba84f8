import numpy as np
import pytest

from ifreq.series import ComplexSeries, ComplexFrequencySeries, SeriesError, \
    GridMismatchError, interior_mask, time_derivative


class TestSeriesError:

    def test_str_onIndex_appendsSample(self):
        assert str(SeriesError('bad value', 3)) == 'bad value (sample 3)'

    def test_str_onNoIndex_returnsMsgOnly(self):
        assert str(SeriesError('bad value')) == 'bad value'


class TestComplexSeries:

    def test_init_setsAttrs(self):
        series = ComplexSeries(0.5, 0.25, [1, 2j, 3], edge_margin=1)
        assert series.t0 == 0.5
        assert series.dt == 0.25
        assert series.edge_margin == 1
        assert list(series.values) == [1, 2j, 3]

    @pytest.mark.parametrize('dt', [0.0, -1.0, np.nan, np.inf])
    def test_init_onInvalidDt_raisesSeriesError(self, dt):
        with pytest.raises(SeriesError):
            ComplexSeries(0, dt, [1, 2, 3])

    def test_init_onMultiDimensionalValues_raisesSeriesError(self):
        with pytest.raises(SeriesError):
            ComplexSeries(0, 1, [[1, 2], [3, 4]])

    def test_init_onNonFiniteValue_raisesSeriesErrorWithIndex(self):
        with pytest.raises(SeriesError) as exc_info:
            ComplexSeries(0, 1, [1, 2, np.nan, np.inf])
        assert exc_info.value.index == 2

    def test_init_onNegativeEdgeMargin_raisesSeriesError(self):
        with pytest.raises(SeriesError):
            ComplexSeries(0, 1, [1, 2, 3], edge_margin=-1)

    def test_values_areReadOnly(self):
        series = ComplexSeries(0, 1, [1, 2, 3])
        with pytest.raises(ValueError):
            series.values[0] = 4

    def test_init_copiesValues(self):
        values = np.array([1, 2, 3], dtype=complex)
        series = ComplexSeries(0, 1, values)
        values[0] = 9
        assert series.values[0] == 1

    def test_t_returnsSampleTimes(self):
        series = ComplexSeries(1.0, 0.5, [0, 0, 0])
        assert list(series.t) == [1.0, 1.5, 2.0]

    def test_realImag_returnsParts(self):
        series = ComplexSeries(0, 1, [1+2j, 3-4j])
        assert list(series.real) == [1, 3]
        assert list(series.imag) == [2, -4]

    def test_interior_excludesEdgeMarginAtBothEnds(self):
        series = ComplexSeries(0, 1, np.zeros(6), edge_margin=2)
        assert list(series.interior) == [False, False, True, True, False,
                                         False]

    def test_interior_onMarginCoveringAll_returnsNoInteriorSample(self):
        assert not interior_mask(4, 2).any()

    def test_checkGrid_onSameGrid_ok(self):
        series = ComplexSeries(0.1, 1e-4, np.zeros(5))
        series.check_grid(ComplexSeries(0.1 + 1e-18, 1e-4, np.ones(5)))

    @pytest.mark.parametrize(('t0', 'dt', 'n'), [
        (0.2, 1e-4, 5), (0.1, 2e-4, 5), (0.1, 1e-4, 6)])
    def test_checkGrid_onDifferentGrid_raisesGridMismatchError(self, t0, dt,
                                                               n):
        series = ComplexSeries(0.1, 1e-4, np.zeros(5))
        with pytest.raises(GridMismatchError):
            series.check_grid(ComplexSeries(t0, dt, np.zeros(n)))

    def test_eq_onSameContent_returnsTrue(self):
        assert ComplexSeries(0, 1, [1, 2]) == ComplexSeries(0, 1, [1, 2])

    @pytest.mark.parametrize('other', [
        ComplexSeries(1, 1, [1, 2]),
        ComplexSeries(0, 2, [1, 2]),
        ComplexSeries(0, 1, [1, 3]),
        ComplexSeries(0, 1, [1, 2], edge_margin=1),
        ComplexFrequencySeries(0, 1, [1, 2])])
    def test_eq_onDifferentContent_returnsFalse(self, other):
        assert ComplexSeries(0, 1, [1, 2]) != other


class TestComplexFrequencySeries:

    def test_init_onZeroEdgeMargin_raisesSeriesError(self):
        with pytest.raises(SeriesError):
            ComplexFrequencySeries(0, 1, [1, 2, 3], edge_margin=0)

    def test_rhoOmega_returnsRealAndImagPart(self):
        series = ComplexFrequencySeries(0, 1, [1+314j, 2+315j])
        assert list(series.rho) == [1, 2]
        assert list(series.omega) == [314, 315]


class TestTimeDerivative:

    def test_onQuadratic_isExactIncludingEdges(self):
        t = np.arange(7) * 0.1
        np.testing.assert_allclose(time_derivative(t**2, 0.1), 2*t,
                                   atol=1e-12)

    def test_onMultipleColumns_differentiatesAlongFirstAxis(self):
        t = np.arange(5) * 0.5
        values = np.stack([t, 3*t], axis=1)
        np.testing.assert_allclose(time_derivative(values, 0.5),
                                   [[1, 3]] * 5)

    def test_onLessThan3Samples_raisesSeriesError(self):
        with pytest.raises(SeriesError):
            time_derivative(np.array([1.0, 2.0]), 1)
