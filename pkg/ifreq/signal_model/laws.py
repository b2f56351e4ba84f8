"""
Closed catalog of time laws for envelopes, phase deviations and angular
shifts. Every law knows its value and its exact time derivative, so that
each generated signal has a closed-form ICP/ICF.
"""
import numpy as np
from typing import Dict, Any, Iterable

from .core import SpecError


class Law:

    KIND:str = None

    PARAMS:tuple = ()

    def __init__(self, **params):
        for name, value in params.items():
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise SpecError(f'{self.KIND} law parameter {name!r} has to '
                                f'be a number (got {value!r})') from None
            if not np.isfinite(value):
                raise SpecError(f'{self.KIND} law parameter {name!r} has to '
                                f'be finite')
            setattr(self, name, value)

    def value(self, t):
        raise NotImplementedError('this is an abstract base class')

    def derivative(self, t):
        raise NotImplementedError('this is an abstract base class')

    def lower_bound(self) -> float:
        """
        returns the infimum of the law over all t >= 0 as far as it does
        not depend on the time window (used to reject envelopes that would
        become negative)
        """
        raise NotImplementedError('this is an abstract base class')

    def to_dict(self) -> Dict[str, Any]:
        return dict(law=self.KIND,
                    **{name: getattr(self, name) for name in self.PARAMS})

    def __eq__(self, other):
        if not isinstance(other, Law):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __repr__(self):
        params = ', '.join(f'{name}={getattr(self, name)!r}'
                           for name in self.PARAMS)
        return f'{type(self).__name__}({params})'


class Constant(Law):

    KIND = 'constant'
    PARAMS = ('level',)

    def __init__(self, level=0.0):
        super().__init__(level=level)

    def value(self, t):
        return np.full(np.shape(t), self.level)

    def derivative(self, t):
        return np.zeros(np.shape(t))

    def lower_bound(self):
        return self.level


class Ramp(Law):
    """start + slope * t"""

    KIND = 'ramp'
    PARAMS = ('start', 'slope')

    def __init__(self, start=0.0, slope=0.0):
        super().__init__(start=start, slope=slope)

    def value(self, t):
        return self.start + self.slope * np.asarray(t, dtype=float)

    def derivative(self, t):
        return np.full(np.shape(t), self.slope)

    def lower_bound(self):
        # a falling ramp is only checked on the sampling grid
        return self.start


class Exponential(Law):
    """start * exp(rate * t)"""

    KIND = 'exponential'
    PARAMS = ('start', 'rate')

    def __init__(self, start=1.0, rate=0.0):
        super().__init__(start=start, rate=rate)

    def value(self, t):
        return self.start * np.exp(self.rate * np.asarray(t, dtype=float))

    def derivative(self, t):
        return self.rate * self.value(t)

    def lower_bound(self):
        return min(self.start, 0.0)


class Sinusoidal(Law):
    """offset + amplitude * sin(2 pi frequency t + phase)"""

    KIND = 'sinusoidal'
    PARAMS = ('offset', 'amplitude', 'frequency', 'phase')

    def __init__(self, offset=0.0, amplitude=0.0, frequency=0.0, phase=0.0):
        super().__init__(offset=offset, amplitude=amplitude,
                         frequency=frequency, phase=phase)

    def value(self, t):
        arg = 2*np.pi*self.frequency * np.asarray(t, dtype=float) + self.phase
        return self.offset + self.amplitude * np.sin(arg)

    def derivative(self, t):
        arg = 2*np.pi*self.frequency * np.asarray(t, dtype=float) + self.phase
        return self.amplitude * 2*np.pi*self.frequency * np.cos(arg)

    def lower_bound(self):
        return self.offset - abs(self.amplitude)


LAWS = {law_cls.KIND: law_cls
        for law_cls in (Constant, Ramp, Exponential, Sinusoidal)}

ENVELOPE_LAWS = frozenset(LAWS)
PHASE_LAWS = frozenset({'constant', 'ramp', 'sinusoidal'})
SHIFT_LAWS = frozenset({'constant', 'ramp'})


def check_law(law:Law, allowed:Iterable[str], role:str) -> Law:
    if not isinstance(law, Law):
        raise SpecError(f'{role} has to be a law (got {law!r})')
    if law.KIND not in allowed:
        raise SpecError(f'{role} does not support a {law.KIND!r} law '
                        f'(allowed: {", ".join(sorted(allowed))})')
    return law


def law_from_dict(desc:Dict[str, Any], allowed:Iterable[str]=ENVELOPE_LAWS,
                  role:str='law') -> Law:
    if not isinstance(desc, dict) or 'law' not in desc:
        raise SpecError(f'{role} has to be an object with a "law" member')
    params = dict(desc)
    kind = params.pop('law')
    if kind not in LAWS:
        raise SpecError(f'{role}: unknown law {kind!r}')
    law_cls = LAWS[kind]
    unknown = set(params) - set(law_cls.PARAMS)
    if unknown:
        raise SpecError(f'{role}: unknown parameters {sorted(unknown)} for '
                        f'{kind!r} law')
    try:
        law = law_cls(**params)
    except (TypeError, ValueError) as exc:
        raise SpecError(f'{role}: {exc}') from exc
    return check_law(law, allowed, role)
