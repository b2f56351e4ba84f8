import numpy as np
from typing import Optional

from ..series import SeriesError, frozen, first_index


PHASE_NAMES = ('a', 'b', 'c')

ALPHA = np.exp(2j * np.pi / 3)

# V_abc = FORTESCUE_COMPOSE @ (V_0, V_p, V_n)
FORTESCUE_COMPOSE = np.array([[1, 1,        1],
                              [1, ALPHA**2, ALPHA],
                              [1, ALPHA,    ALPHA**2]])
FORTESCUE_DECOMPOSE = np.array([[1, 1,        1],
                                [1, ALPHA,    ALPHA**2],
                                [1, ALPHA**2, ALPHA]]) / 3


class SpecError(ValueError):
    """
    A signal specification is invalid (or could not be decoded)
    """


class ThreePhaseSignal:
    """
    A uniformly sampled three-phase trace.

    samples is an array of shape (N, 3) that contains v_a, v_b, v_c in
    volts. provenance optionally describes where the samples came from
    ('spec:<digest>' or 'trace:<file name>@<digest>').
    """

    MIN_SAMPLES = 3

    def __init__(self, t0:float, dt:float, samples,
                 provenance:Optional[str]=None):
        if not np.isfinite(t0):
            raise SeriesError(f'start time has to be finite (got {t0})')
        if not np.isfinite(dt) or dt <= 0:
            raise SeriesError(f'sampling period has to be positive (got {dt})')
        samples = np.array(samples, dtype=float)
        if samples.ndim != 2 or samples.shape[1] != 3:
            raise SeriesError('samples have to be of shape (N, 3)')
        if len(samples) < self.MIN_SAMPLES:
            raise SeriesError(f'a three-phase signal requires at least '
                              f'{self.MIN_SAMPLES} samples')
        non_finite = ~np.isfinite(samples).all(axis=1)
        if non_finite.any():
            raise SeriesError('signal contains non-finite samples',
                              first_index(non_finite))
        self.t0 = float(t0)
        self.dt = float(dt)
        self.samples = frozen(samples)
        self.provenance = provenance

    def __len__(self):
        return len(self.samples)

    @property
    def t(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self))

    def phase(self, name:str) -> np.ndarray:
        try:
            return self.samples[:, PHASE_NAMES.index(name)]
        except ValueError:
            raise ValueError(f'phase has to be one of {PHASE_NAMES} '
                             f'(got {name!r})') from None

    @property
    def va(self):
        return self.samples[:, 0]

    @property
    def vb(self):
        return self.samples[:, 1]

    @property
    def vc(self):
        return self.samples[:, 2]

    def transformed(self, matrix) -> 'ThreePhaseSignal':
        """
        Maps every sample vector by a fixed 3x3 matrix (i.e. a rotation of
        the abc trajectory).
        """
        matrix = np.asarray(matrix, dtype=float)
        if matrix.shape != (3, 3):
            raise ValueError('transformation matrix has to be 3x3')
        return ThreePhaseSignal(self.t0, self.dt, self.samples @ matrix.T,
                                self.provenance)

    def __eq__(self, other):
        if not isinstance(other, ThreePhaseSignal):
            return NotImplemented
        return (self.t0 == other.t0 and self.dt == other.dt
                and np.array_equal(self.samples, other.samples))

    def __repr__(self):
        return f'ThreePhaseSignal(t0={self.t0!r}, dt={self.dt!r}, ' \
               f'n={len(self)}, provenance={self.provenance!r})'


class SequencePhasors:
    """
    Positive, negative and zero sequence phasors of a three-phase set.
    The attributes may also be arrays (one phasor per instant).
    """

    def __init__(self, positive, negative, zero):
        self.positive = positive
        self.negative = negative
        self.zero = zero

    def phases(self) -> np.ndarray:
        """
        Fortescue reconstruction of the per-phase phasors (V_a, V_b, V_c)
        """
        return FORTESCUE_COMPOSE @ np.array([self.zero, self.positive,
                                             self.negative])

    def __iter__(self):
        yield from (self.positive, self.negative, self.zero)

    def __repr__(self):
        return f'SequencePhasors(positive={self.positive!r}, ' \
               f'negative={self.negative!r}, zero={self.zero!r})'


def sequence_phasors(phasors_abc) -> SequencePhasors:
    """
    Symmetrical components of the phasors (V_a, V_b, V_c):

        V_p = (V_a + a V_b + a^2 V_c) / 3
        V_n = (V_a + a^2 V_b + a V_c) / 3
        V_0 = (V_a + V_b + V_c) / 3

    with a = exp(j 2pi/3). phasors_abc may also be of shape (3, N).
    """
    phasors_abc = np.asarray(phasors_abc, dtype=complex)
    if phasors_abc.shape[:1] != (3,):
        raise ValueError('exactly three phasors (a, b, c) are required')
    if not np.isfinite(phasors_abc).all():
        raise ValueError('phasors have to be finite')
    zero, positive, negative = FORTESCUE_DECOMPOSE @ phasors_abc
    return SequencePhasors(positive, negative, zero)
