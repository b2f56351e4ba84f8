"""
Space vector formulations of a three-phase signal: Clarke/Park transforms,
the instantaneous planar phase (IPP) / frequency (IPF) of the Park vector and
the frame based complex phase/frequency definition that permutes its real
and imaginary parts (here called 'Lei' quantities):

    phi_m = ln u_dq + j theta          phi_l = -j phi_m + delta_dq
    s_m   = rho_m + j omega_m          s_l   = -j s_m + omega_dq
"""
import logging
import numpy as np
from typing import Optional

from .series import ComplexSeries, ComplexFrequencySeries, GridMismatchError,\
    SeriesError, time_derivative
from .signal_model import ThreePhaseSignal, ALPHA
from .analytic import icp, phase_derivative


logger = logging.getLogger(__name__)


# amplitude invariant scaling: |v_ab| equals the phase amplitude of a
# balanced positive sequence set
CLARKE_MATRIX = 2/3 * np.array([[1.0, -0.5,          -0.5],
                                [0.0, np.sqrt(3)/2, -np.sqrt(3)/2]])

LYON_POSITIVE = np.array([1, ALPHA, ALPHA**2]) / 3


def clarke(sig:ThreePhaseSignal) -> ComplexSeries:
    """
    v_alpha + j v_beta. The zero sequence (homopolar) part of 'sig' is
    dropped (see zero_sequence_energy()).
    """
    alpha, beta = CLARKE_MATRIX @ sig.samples.T
    return ComplexSeries(sig.t0, sig.dt, alpha + 1j*beta)


def zero_sequence_energy(sig:ThreePhaseSignal) -> float:
    """
    fraction of the energy of 'sig' that is carried by the homopolar
    component (and thus lost by the Clarke/Park transform)
    """
    total = np.sum(sig.samples ** 2)
    if total == 0:
        return 0.0
    zero = sig.samples.mean(axis=1)
    return float(3 * np.sum(zero ** 2) / total)


def lyon_positive(sig:ThreePhaseSignal) -> ComplexSeries:
    """
    Lyon positive sequence vector (v_a + a v_b + a^2 v_c) / 3 of the
    instantaneous values
    """
    return ComplexSeries(sig.t0, sig.dt, sig.samples @ LYON_POSITIVE)


class RotatingFrame:
    """
    Rotation angle delta_dq(t) of a Park reference frame and its speed
    omega_dq(t).

    Use the factories constant(), ramp() and sampled(). Closed form frames
    are defined for every time grid, a sampled frame only for the grid it
    was sampled on (its speed is computed by 2nd order differences).
    """

    def __init__(self, kind:str, delta0:float=0.0, omega:float=0.0,
                 samples:ComplexSeries=None):
        if kind not in ('constant', 'ramp', 'sampled'):
            raise ValueError(f'unknown frame kind {kind!r}')
        if not (np.isfinite(delta0) and np.isfinite(omega)):
            raise ValueError('frame parameters have to be finite')
        self.kind = kind
        self.delta0 = float(delta0)
        self.omega = float(omega)
        self.samples = samples

    @classmethod
    def constant(cls, delta0:float=0.0) -> 'RotatingFrame':
        return cls('constant', delta0)

    @classmethod
    def ramp(cls, omega:float, delta0:float=0.0) -> 'RotatingFrame':
        """delta_dq(t) = omega * t + delta0"""
        return cls('ramp', delta0, omega)

    @classmethod
    def sampled(cls, t0:float, dt:float, delta) -> 'RotatingFrame':
        delta = np.asarray(delta, dtype=float)
        if delta.ndim != 1 or len(delta) < 3:
            raise SeriesError('a sampled frame angle needs at least 3 samples')
        return cls('sampled', samples=ComplexSeries(t0, dt, delta))

    @property
    def edge_margin(self) -> int:
        return 1 if self.kind == 'sampled' else 0

    def _check_grid(self, t0, dt, n):
        if not self.samples.same_grid(t0, dt, n):
            raise GridMismatchError(
                f'frame is sampled on (t0={self.samples.t0}, '
                f'dt={self.samples.dt}, n={len(self.samples)}) but '
                f'(t0={t0}, dt={dt}, n={n}) is requested')

    def angle(self, t0:float, dt:float, n:int) -> np.ndarray:
        if self.kind == 'sampled':
            self._check_grid(t0, dt, n)
            return self.samples.real
        t = t0 + dt * np.arange(n)
        return self.omega * t + self.delta0

    def speed(self, t0:float, dt:float, n:int) -> np.ndarray:
        if self.kind == 'sampled':
            self._check_grid(t0, dt, n)
            return time_derivative(self.samples.real, self.samples.dt)
        return np.full(n, self.omega)

    def to_dict(self):
        if self.kind == 'sampled':
            return dict(kind='sampled', t0=self.samples.t0,
                        dt=self.samples.dt, n=len(self.samples))
        return dict(kind=self.kind, delta0=self.delta0, omega=self.omega)

    def __eq__(self, other):
        if not isinstance(other, RotatingFrame):
            return NotImplemented
        return (self.kind == other.kind and self.delta0 == other.delta0
                and self.omega == other.omega
                and self.samples == other.samples)

    def __repr__(self):
        if self.kind == 'constant':
            return f'RotatingFrame.constant({self.delta0!r})'
        elif self.kind == 'ramp':
            return f'RotatingFrame.ramp({self.omega!r}, {self.delta0!r})'
        else:
            return f'RotatingFrame.sampled({self.samples!r})'


# Clarke frame (delta_dq = 0)
ZERO_FRAME = RotatingFrame.constant(0.0)


class ParkVector(ComplexSeries):
    """v_dq = v_d + j v_q, remembers the frame it was rotated into"""

    def __init__(self, t0, dt, values, edge_margin=0,
                 frame:RotatingFrame=ZERO_FRAME):
        super().__init__(t0, dt, values, edge_margin)
        self.frame = frame


class PlanarPhaseSeries(ComplexSeries):
    """IPP phi_m = ln u_dq + j theta"""

    def __init__(self, t0, dt, values, edge_margin=0,
                 frame:RotatingFrame=ZERO_FRAME):
        super().__init__(t0, dt, values, edge_margin)
        self.frame = frame

    @property
    def u_dq(self):
        return np.exp(self.real)

    @property
    def theta(self):
        return self.imag


class PlanarFrequencySeries(ComplexFrequencySeries):
    """IPF s_m = rho_m + j omega_m"""

    def __init__(self, t0, dt, values, edge_margin=1,
                 frame:RotatingFrame=ZERO_FRAME):
        super().__init__(t0, dt, values, edge_margin)
        self.frame = frame


def park(v_ab:ComplexSeries, frame:RotatingFrame=ZERO_FRAME) -> ParkVector:
    """v_dq = v_ab * exp(-j delta_dq)"""
    delta = frame.angle(v_ab.t0, v_ab.dt, len(v_ab))
    return ParkVector(v_ab.t0, v_ab.dt, v_ab.values * np.exp(-1j * delta),
                      v_ab.edge_margin, frame)


def _frame_of(series, frame:Optional[RotatingFrame]) -> RotatingFrame:
    if frame is not None:
        return frame
    return getattr(series, 'frame', ZERO_FRAME)


def ipp(v_dq:ComplexSeries) -> PlanarPhaseSeries:
    phase = icp(v_dq)
    return PlanarPhaseSeries(phase.t0, phase.dt, phase.values,
                             phase.edge_margin, _frame_of(v_dq, None))


def ipf(v_dq:ComplexSeries) -> PlanarFrequencySeries:
    phi_m = ipp(v_dq)
    freq = phase_derivative(phi_m)
    return PlanarFrequencySeries(
        freq.t0, freq.dt, freq.values,
        max(freq.edge_margin, phi_m.frame.edge_margin), phi_m.frame)


def lei_from_planar(phi_m:ComplexSeries, frame:RotatingFrame=None) \
        -> ComplexSeries:
    """phi_l = -j phi_m + delta_dq"""
    frame = _frame_of(phi_m, frame)
    delta = frame.angle(phi_m.t0, phi_m.dt, len(phi_m))
    return ComplexSeries(phi_m.t0, phi_m.dt, -1j * phi_m.values + delta,
                         phi_m.edge_margin)


def planar_from_lei(phi_l:ComplexSeries, frame:RotatingFrame) \
        -> PlanarPhaseSeries:
    """phi_m = j (phi_l - delta_dq)"""
    delta = frame.angle(phi_l.t0, phi_l.dt, len(phi_l))
    return PlanarPhaseSeries(phi_l.t0, phi_l.dt, 1j * (phi_l.values - delta),
                             phi_l.edge_margin, frame)


def lei_frequency_from_planar(s_m:ComplexSeries, frame:RotatingFrame=None) \
        -> ComplexFrequencySeries:
    """s_l = -j s_m + omega_dq"""
    frame = _frame_of(s_m, frame)
    omega = frame.speed(s_m.t0, s_m.dt, len(s_m))
    return ComplexFrequencySeries(
        s_m.t0, s_m.dt, -1j * s_m.values + omega,
        max(1, s_m.edge_margin, frame.edge_margin))


def planar_frequency_from_lei(s_l:ComplexSeries, frame:RotatingFrame) \
        -> PlanarFrequencySeries:
    """s_m = j (s_l - omega_dq)"""
    omega = frame.speed(s_l.t0, s_l.dt, len(s_l))
    return PlanarFrequencySeries(
        s_l.t0, s_l.dt, 1j * (s_l.values - omega),
        max(1, s_l.edge_margin, frame.edge_margin), frame)


def lei_icp(v_ab:ComplexSeries) -> ComplexSeries:
    """
    frame independent 'Lei' phase theta_ab - j ln u of the Clarke vector.
    Inverting phi_l = -j phi_m + delta_dq for any frame yields the same
    quantity (up to a multiple of 2 pi in the real part).
    """
    phase = icp(v_ab)
    return ComplexSeries(phase.t0, phase.dt, -1j * phase.values,
                         phase.edge_margin)


def lei_icf(v_ab:ComplexSeries) -> ComplexFrequencySeries:
    return phase_derivative(lei_icp(v_ab))
