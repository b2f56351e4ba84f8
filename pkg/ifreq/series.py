"""
Uniformly sampled complex time series.

All formulations (analytic signal, space vector, geometric) exchange their
results as ComplexSeries objects. A series is immutable once created.
"""
import numpy as np


GRID_RTOL = 1e-12


class SeriesError(ValueError):
    """
    A series (or the samples it shall be created from) violates the
    sampling or value invariants.
    """

    def __init__(self, msg, index=None):
        super().__init__(msg)
        self.index = index

    def __str__(self):
        return super().__str__() \
               + (f' (sample {self.index})' if self.index is not None else '')


class GridMismatchError(SeriesError):
    """
    Two series (or a series and a sampled frame) do not share one time grid
    """


def frozen(arr:np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def first_index(mask:np.ndarray) -> int:
    return int(np.flatnonzero(mask)[0])


def interior_mask(length:int, edge_margin:int) -> np.ndarray:
    """
    returns a boolean array that is False for the 'edge_margin' samples at
    each end of a record of 'length' samples
    """
    mask = np.zeros(length, dtype=bool)
    if 2 * edge_margin < length:
        mask[edge_margin:length-edge_margin] = True
    return mask


def time_derivative(values:np.ndarray, dt:float) -> np.ndarray:
    """
    2nd order central differences in the interior and 2nd order one-sided
    stencils at both ends. Differentiates along the first axis.
    """
    if len(values) < 3:
        raise SeriesError('at least 3 samples are required for a derivative')
    return np.gradient(values, dt, axis=0, edge_order=2)


class ComplexSeries:
    """
    A uniformly sampled complex valued time series starting at t0 with
    sampling period dt.

    edge_margin is the number of samples at each end that are not reliable
    (i.e. because of a transient of the Hilbert transform or a one-sided
    derivative stencil).
    """

    def __init__(self, t0:float, dt:float, values, edge_margin:int=0):
        if not np.isfinite(dt) or dt <= 0:
            raise SeriesError(f'sampling period has to be positive (got {dt})')
        values = np.array(values, dtype=complex)
        if values.ndim != 1:
            raise SeriesError('values have to be one dimensional')
        non_finite = ~np.isfinite(values)
        if non_finite.any():
            raise SeriesError('series contains non-finite values',
                              first_index(non_finite))
        if edge_margin < 0:
            raise SeriesError('edge_margin must not be negative')
        self.t0 = float(t0)
        self.dt = float(dt)
        self.values = frozen(values)
        self.edge_margin = int(edge_margin)

    def __len__(self):
        return len(self.values)

    @property
    def t(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self))

    @property
    def real(self) -> np.ndarray:
        return self.values.real

    @property
    def imag(self) -> np.ndarray:
        return self.values.imag

    @property
    def interior(self) -> np.ndarray:
        return interior_mask(len(self), self.edge_margin)

    def same_grid(self, t0:float, dt:float, length:int) -> bool:
        return (len(self) == length
                and np.isclose(self.dt, dt, rtol=GRID_RTOL, atol=0)
                and np.isclose(self.t0, t0, rtol=0, atol=GRID_RTOL * dt))

    def check_grid(self, other:'ComplexSeries'):
        if not self.same_grid(other.t0, other.dt, len(other)):
            raise GridMismatchError(
                f'grid (t0={other.t0}, dt={other.dt}, n={len(other)}) does '
                f'not match (t0={self.t0}, dt={self.dt}, n={len(self)})')

    def __eq__(self, other):
        if not isinstance(other, ComplexSeries):
            return NotImplemented
        return (type(self) is type(other)
                and self.t0 == other.t0 and self.dt == other.dt
                and self.edge_margin == other.edge_margin
                and np.array_equal(self.values, other.values))

    def __repr__(self):
        return f'{type(self).__name__}(t0={self.t0!r}, dt={self.dt!r}, ' \
               f'n={len(self)}, edge_margin={self.edge_margin})'


class ComplexFrequencySeries(ComplexSeries):
    """
    A complex frequency: the real part is the radial frequency rho (Np/s),
    the imaginary part the angular frequency omega (rad/s).
    """

    def __init__(self, t0:float, dt:float, values, edge_margin:int=1):
        if edge_margin < 1:
            raise SeriesError('a frequency series needs an edge_margin of at '
                              'least the stencil half-width (1)')
        super().__init__(t0, dt, values, edge_margin)

    @property
    def rho(self) -> np.ndarray:
        return self.values.real

    @property
    def omega(self) -> np.ndarray:
        return self.values.imag
