"""
Parametric three-phase signal model

    v_k(t) = u_k(t) cos(omega_o t + phi_k(t) + zeta_k(t)) + additive components

for k in (a, b, c), and the generator that samples it.
"""
import hashlib
import json
import logging
import numpy as np
from typing import Dict, Any, Iterable, Optional, Sequence

from .core import SpecError, ThreePhaseSignal, PHASE_NAMES
from .laws import Law, Constant, check_law, law_from_dict, \
    ENVELOPE_LAWS, PHASE_LAWS, SHIFT_LAWS


logger = logging.getLogger(__name__)


SEQUENCE_SHIFTS = {
    'positive': (0.0, -2*np.pi/3, +2*np.pi/3),
    'negative': (0.0, +2*np.pi/3, -2*np.pi/3),
    'zero':     (0.0, 0.0, 0.0)}

DEFAULT_SHIFTS = dict(zip(PHASE_NAMES, SEQUENCE_SHIFTS['positive']))


class Component:
    """
    An additive sinusoidal component of one symmetrical sequence. Either
    'harmonic' (order relative to omega_o) or 'frequency' (interharmonic,
    in Hz) has to be given.
    """

    def __init__(self, sequence:str, amplitude:float, phase:float=0.0, *,
                 harmonic:float=None, frequency:float=None):
        if sequence not in SEQUENCE_SHIFTS:
            raise SpecError(f'sequence has to be one of '
                            f'{sorted(SEQUENCE_SHIFTS)} (got {sequence!r})')
        if (harmonic is None) == (frequency is None):
            raise SpecError('exactly one of "harmonic" and "frequency" has '
                            'to be specified per component')
        if not amplitude >= 0:
            raise SpecError(f'component amplitude must not be negative '
                            f'(got {amplitude})')
        if harmonic is not None and not harmonic > 0:
            raise SpecError(f'harmonic order has to be positive '
                            f'(got {harmonic})')
        if frequency is not None and not frequency >= 0:
            raise SpecError(f'component frequency must not be negative '
                            f'(got {frequency})')
        self.sequence = sequence
        self.amplitude = float(amplitude)
        self.phase = float(phase)
        self.harmonic = None if harmonic is None else float(harmonic)
        self.frequency = None if frequency is None else float(frequency)

    def angular_frequency(self, omega_o:float) -> float:
        if self.harmonic is not None:
            return self.harmonic * omega_o
        return 2 * np.pi * self.frequency

    def values(self, t:np.ndarray, omega_o:float) -> np.ndarray:
        """returns the (N, 3) contribution of this component"""
        arg = self.angular_frequency(omega_o) * t + self.phase
        shifts = np.array(SEQUENCE_SHIFTS[self.sequence])
        return self.amplitude * np.cos(arg[:, np.newaxis] + shifts)

    def to_dict(self) -> Dict[str, Any]:
        desc = dict(sequence=self.sequence, amplitude=self.amplitude,
                    phase=self.phase)
        if self.harmonic is not None:
            desc['harmonic'] = self.harmonic
        else:
            desc['frequency'] = self.frequency
        return desc

    @classmethod
    def from_dict(cls, desc:Dict[str, Any]) -> 'Component':
        if not isinstance(desc, dict):
            raise SpecError('a component has to be an object')
        unknown = set(desc) - {'sequence', 'amplitude', 'phase', 'harmonic',
                               'frequency'}
        if unknown:
            raise SpecError(f'unknown component members {sorted(unknown)}')
        try:
            return cls(desc.get('sequence'), float(desc.get('amplitude', 0)),
                       float(desc.get('phase', 0)),
                       harmonic=desc.get('harmonic'),
                       frequency=desc.get('frequency'))
        except (TypeError, ValueError) as exc:
            if isinstance(exc, SpecError):
                raise
            raise SpecError(f'invalid component: {exc}') from exc

    def __eq__(self, other):
        if not isinstance(other, Component):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __repr__(self):
        return f'Component({self.to_dict()!r})'


class PhaseSpec:
    """
    envelope u_k(t), phase deviation phi_k(t) and angular shift zeta_k(t) of
    a single phase
    """

    def __init__(self, envelope:Law=None, phase:Law=None, shift:Law=None):
        self.envelope = check_law(envelope or Constant(1.0),
                                  ENVELOPE_LAWS, 'envelope')
        self.phase = check_law(phase or Constant(0.0), PHASE_LAWS, 'phase')
        self.shift = check_law(shift or Constant(0.0), SHIFT_LAWS, 'shift')
        if self.envelope.lower_bound() < 0:
            raise SpecError(f'envelope {self.envelope!r} becomes negative')

    def angle(self, t):
        return self.phase.value(t) + self.shift.value(t)

    def angle_derivative(self, t):
        return self.phase.derivative(t) + self.shift.derivative(t)

    def to_dict(self):
        return dict(envelope=self.envelope.to_dict(),
                    phase=self.phase.to_dict(),
                    shift=self.shift.to_dict())

    @classmethod
    def from_dict(cls, desc:Dict[str, Any], default_shift:float=0.0):
        if not isinstance(desc, dict):
            raise SpecError('a phase description has to be an object')
        unknown = set(desc) - {'envelope', 'phase', 'shift'}
        if unknown:
            raise SpecError(f'unknown phase members {sorted(unknown)}')
        return cls(
            law_from_dict(desc.get('envelope', {'law': 'constant',
                                                'level': 1.0}),
                          ENVELOPE_LAWS, 'envelope'),
            law_from_dict(desc.get('phase', {'law': 'constant'}),
                          PHASE_LAWS, 'phase'),
            law_from_dict(desc.get('shift', {'law': 'constant',
                                             'level': default_shift}),
                          SHIFT_LAWS, 'shift'))

    def __eq__(self, other):
        if not isinstance(other, PhaseSpec):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __repr__(self):
        return f'PhaseSpec({self.envelope!r}, {self.phase!r}, {self.shift!r})'


class SignalSpec:
    """
    Full description of a synthetic three-phase signal.

    phases maps 'a', 'b', 'c' to PhaseSpec objects. Missing phases get a
    1 V envelope, zero phase deviation and the balanced default shift
    (0, -2pi/3, +2pi/3).
    """

    def __init__(self, omega_o:float, phases:Dict[str, PhaseSpec]=None,
                 components:Sequence[Component]=()):
        try:
            omega_o = float(omega_o)
        except (TypeError, ValueError):
            raise SpecError(f'omega_o has to be a number (got {omega_o!r})') \
                from None
        if not np.isfinite(omega_o) or omega_o <= 0:
            raise SpecError(f'omega_o has to be positive (got {omega_o})')
        phases = dict(phases or {})
        unknown = set(phases) - set(PHASE_NAMES)
        if unknown:
            raise SpecError(f'unknown phases {sorted(unknown)}')
        for name in PHASE_NAMES:
            if name not in phases:
                phases[name] = PhaseSpec(shift=Constant(DEFAULT_SHIFTS[name]))
            elif not isinstance(phases[name], PhaseSpec):
                raise SpecError(f'phase {name!r} has to be a PhaseSpec')
        for component in components:
            if not isinstance(component, Component):
                raise SpecError(f'{component!r} is not a Component')
        self.omega_o = omega_o
        self.phases = phases
        self.components = tuple(components)

    @classmethod
    def balanced(cls, omega_o:float, amplitude:float=1.0, *,
                 envelope:Law=None, phase:Law=None,
                 components:Iterable[Component]=()) -> 'SignalSpec':
        """
        creates a balanced positive sequence set. All phases share the
        same envelope (default: constant 'amplitude') and phase law.
        """
        envelope = envelope or Constant(amplitude)
        return cls(omega_o,
                   {name: PhaseSpec(envelope, phase,
                                    Constant(DEFAULT_SHIFTS[name]))
                    for name in PHASE_NAMES},
                   tuple(components))

    def is_balanced(self) -> bool:
        first = self.phases['a']
        return (not self.components
                and all(self.phases[name].envelope == first.envelope
                        and self.phases[name].phase == first.phase
                        and self.phases[name].shift
                            == Constant(DEFAULT_SHIFTS[name])
                        for name in PHASE_NAMES))

    def phasors(self, t) -> np.ndarray:
        """
        per-phase fundamental phasors u_k(t) exp(j(phi_k(t) + zeta_k(t)))
        (the rotation exp(j omega_o t) is not included). Returns an array of
        shape (3,) + shape(t).
        """
        return np.array([self.phases[name].envelope.value(t)
                         * np.exp(1j * self.phases[name].angle(t))
                         for name in PHASE_NAMES])

    def icp_closed_form(self, phase:str, t) -> np.ndarray:
        """
        ln u_k(t) + j(omega_o t + phi_k(t) + zeta_k(t)) of the fundamental.
        Only an oracle of the analytic signal if there are no additive
        components and the envelope spectrum is below the carrier.
        """
        spec = self.phases[phase]
        t = np.asarray(t, dtype=float)
        return np.log(spec.envelope.value(t)) \
               + 1j * (self.omega_o * t + spec.angle(t))

    def icf_closed_form(self, phase:str, t) -> np.ndarray:
        """time derivative of icp_closed_form()"""
        spec = self.phases[phase]
        t = np.asarray(t, dtype=float)
        return spec.envelope.derivative(t) / spec.envelope.value(t) \
               + 1j * (self.omega_o + spec.angle_derivative(t))

    def evaluate(self, t) -> np.ndarray:
        """returns the (N, 3) samples of the closed form at times t"""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        samples = np.empty((len(t), 3))
        for ndx, name in enumerate(PHASE_NAMES):
            spec = self.phases[name]
            envelope = spec.envelope.value(t)
            negative = envelope < 0
            if negative.any():
                raise SpecError(f'envelope of phase {name} becomes negative '
                                f'at t={t[negative][0]}')
            samples[:, ndx] = envelope * np.cos(self.omega_o * t
                                                + spec.angle(t))
        for component in self.components:
            samples += component.values(t, self.omega_o)
        return samples

    def to_dict(self) -> Dict[str, Any]:
        return dict(omega_o=self.omega_o,
                    phases={name: self.phases[name].to_dict()
                            for name in PHASE_NAMES},
                    components=[comp.to_dict() for comp in self.components])

    @classmethod
    def from_dict(cls, desc:Dict[str, Any]) -> 'SignalSpec':
        if not isinstance(desc, dict):
            raise SpecError('a signal specification has to be an object')
        unknown = set(desc) - {'omega_o', 'phases', 'components'}
        if unknown:
            raise SpecError(f'unknown specification members {sorted(unknown)}')
        if 'omega_o' not in desc:
            raise SpecError('"omega_o" is missing')
        phases = desc.get('phases', {})
        if not isinstance(phases, dict):
            raise SpecError('"phases" has to be an object')
        components = desc.get('components', [])
        if not isinstance(components, list):
            raise SpecError('"components" has to be a list')
        return cls(
            desc['omega_o'],
            {name: PhaseSpec.from_dict(phase_desc,
                                       DEFAULT_SHIFTS.get(name, 0.0))
             for name, phase_desc in phases.items()},
            [Component.from_dict(comp) for comp in components])

    def digest(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(canonical.encode('utf8')).hexdigest()[:16]

    def __eq__(self, other):
        if not isinstance(other, SignalSpec):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __repr__(self):
        return f'SignalSpec({self.to_dict()!r})'


def generate(spec:SignalSpec, t0:float, dt:float, n:int,
             provenance:Optional[str]=None) -> ThreePhaseSignal:
    """
    samples 'spec' at t_j = t0 + j*dt for j in range(n) by evaluating the
    closed forms (no interpolation).
    """
    if not isinstance(spec, SignalSpec):
        raise SpecError(f'{spec!r} is not a SignalSpec')
    if not np.isfinite(dt) or dt <= 0:
        raise SpecError(f'sampling period has to be positive (got {dt})')
    if n < ThreePhaseSignal.MIN_SAMPLES:
        raise SpecError(f'at least {ThreePhaseSignal.MIN_SAMPLES} samples '
                        f'are required (got {n})')
    t = t0 + dt * np.arange(n)
    logger.debug('generating %d samples of spec %s', n, spec.digest())
    return ThreePhaseSignal(t0, dt, spec.evaluate(t),
                            provenance or f'spec:{spec.digest()}')
