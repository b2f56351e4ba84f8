"""
Analytic signal of a single real channel and its instantaneous complex
phase (ICP) and frequency (ICF):

    z(t)   = v(t) + j H{v(t)}
    icp(t) = ln|z(t)| + j arg z(t)
    icf(t) = d/dt icp(t) = u'(t)/u(t) + j theta'(t)
"""
import logging
import numpy as np
import scipy.fft

from .series import ComplexSeries, ComplexFrequencySeries, SeriesError, \
    first_index, time_derivative


logger = logging.getLogger(__name__)


MIN_HILBERT_SAMPLES = 8

# the periodization transient of the DFT based Hilbert transform is flagged
# on n // HILBERT_GUARD_DIVISOR samples at each end
HILBERT_GUARD_DIVISOR = 32

# samples with |z| <= MAGNITUDE_FLOOR * max|z| have no defined phase
MAGNITUDE_FLOOR = 1e-12

BANDWIDTH_ENERGY_FRACTION = 0.99


class UndefinedPhaseError(SeriesError):
    """
    The magnitude of a complex series is at (or below) the magnitude floor,
    so its logarithm/argument is meaningless
    """


def _real_samples(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise SeriesError('a real valued one dimensional series is required')
    if len(x) < MIN_HILBERT_SAMPLES:
        raise SeriesError(f'the Hilbert transform requires at least '
                          f'{MIN_HILBERT_SAMPLES} samples (got {len(x)})')
    non_finite = ~np.isfinite(x)
    if non_finite.any():
        raise SeriesError('series contains non-finite values',
                          first_index(non_finite))
    return x


def hilbert_guard(n:int) -> int:
    """
    Number of samples flagged at each end of an analytic signal of length n.

    This only covers the transient if the record holds whole periods of
    every component, envelope included. Otherwise the periodization error
    reaches far into the record: a 50 Hz tone with a 2 Hz modulation
    sampled over 0.2 s (0.4 modulation periods) still shows an ICF error of
    about 1.3 rad/s 64 samples before its end, while n // 32 flags 62.
    Relations that compare the analytic signal with the space vector are
    then reported as violated although the envelope and the carrier do not
    overlap.
    """
    return max(1, n // HILBERT_GUARD_DIVISOR)


def hilbert(x) -> np.ndarray:
    """
    Discrete Hilbert transform of the real series 'x' over the full record:
    the DFT bins are multiplied by -j sgn(f). DC and (for even lengths) the
    Nyquist bin are zeroed.

    The record is treated as one period of a periodic signal. Tones that do
    not complete an integer number of periods get a transient at both ends
    (see hilbert_guard()).
    """
    x = _real_samples(x)
    n = len(x)
    multiplier = -1j * np.sign(scipy.fft.fftfreq(n))
    if n % 2 == 0:
        multiplier[n // 2] = 0
    return scipy.fft.ifft(scipy.fft.fft(x) * multiplier).real


def analytic_signal(x, dt:float=1.0, t0:float=0.0) -> ComplexSeries:
    x = _real_samples(x)
    guard = hilbert_guard(len(x))
    return ComplexSeries(t0, dt, x + 1j * hilbert(x), edge_margin=guard)


def icp(z:ComplexSeries) -> ComplexSeries:
    """
    ln|z| + j arg(z), where the argument is unwrapped (jumps > pi between
    neighbour samples are corrected by multiples of 2 pi) starting at the
    principal value of the first sample.
    Requires omega*dt < pi, which is not checked.
    """
    magnitude = np.abs(z.values)
    floor = MAGNITUDE_FLOOR * magnitude.max()
    undefined = magnitude <= floor
    if undefined.any():
        raise UndefinedPhaseError(
            f'phase is undefined where |z| <= {floor:g}',
            first_index(undefined))
    angle = np.unwrap(np.angle(z.values))
    return ComplexSeries(z.t0, z.dt, np.log(magnitude) + 1j * angle,
                         edge_margin=z.edge_margin)


def phase_derivative(phase:ComplexSeries) -> ComplexFrequencySeries:
    """
    time derivative of a complex phase series (2nd order stencils). The
    central stencil at the first sample behind the edge margin still reads
    the last flagged sample, so the margin grows by one.
    """
    return ComplexFrequencySeries(phase.t0, phase.dt,
                                  time_derivative(phase.values, phase.dt),
                                  edge_margin=phase.edge_margin + 1)


def icf(z:ComplexSeries) -> ComplexFrequencySeries:
    return phase_derivative(icp(z))


def envelope_energy_spectrum(envelope, dt:float):
    """
    returns the frequencies (Hz) of the one-sided DFT of 'envelope' and the
    energy of each bin (negative frequency bins folded onto their positive
    counterpart)
    """
    envelope = np.asarray(envelope, dtype=float)
    n = len(envelope)
    energy = np.abs(scipy.fft.rfft(envelope)) ** 2
    if n % 2 == 0:
        energy[1:-1] *= 2
    else:
        energy[1:] *= 2
    return scipy.fft.rfftfreq(n, dt), energy


def bedrosian_overlap(envelope, dt:float, carrier_frequency:float) -> float:
    """
    Overlap of the envelope spectrum with a carrier (in Hz).

    Returns 0 if the band that holds BANDWIDTH_ENERGY_FRACTION of the
    envelope energy lies strictly below the carrier, otherwise the fraction
    of the envelope energy at and above the carrier frequency.
    """
    if not carrier_frequency >= 0 or not dt > 0:
        raise ValueError('carrier frequency and dt must not be negative')
    freqs, energy = envelope_energy_spectrum(envelope, dt)
    total = energy.sum()
    if total == 0:
        return 0.0
    cumulated = np.cumsum(energy)
    bandwidth = freqs[np.searchsorted(cumulated,
                                      BANDWIDTH_ENERGY_FRACTION * total)]
    if bandwidth < carrier_frequency:
        return 0.0
    overlap = energy[freqs >= carrier_frequency].sum() / total
    logger.debug('envelope bandwidth %g Hz overlaps carrier %g Hz (%g)',
                 bandwidth, carrier_frequency, overlap)
    return float(overlap)
