from .core import ThreePhaseSignal, SequencePhasors, SpecError, \
    sequence_phasors, PHASE_NAMES, ALPHA
from . import laws
from .laws import Law, Constant, Ramp, Exponential, Sinusoidal, law_from_dict
from .spec import SignalSpec, PhaseSpec, Component, generate, \
    SEQUENCE_SHIFTS, DEFAULT_SHIFTS
from .trace_io import read_trace, write_trace, load_spec, dump_spec, \
    TraceFormatError
