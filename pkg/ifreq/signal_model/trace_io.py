"""
Trace ingestion/emission (CSV with header 't,va,vb,vc') and SignalSpec JSON
documents.
"""
import hashlib
import json
import logging
import os
import numpy as np
import pandas as pd
from typing import Union, TextIO

from .core import SpecError, ThreePhaseSignal
from .spec import SignalSpec


logger = logging.getLogger(__name__)


TRACE_COLUMNS = ['t', 'va', 'vb', 'vc']

# maximum relative deviation of a single sampling step from the mean step
MAX_JITTER = 1e-9

# 17 significant digits make every float64 round-trip exactly
FLOAT_FORMAT = '%.17g'

# members a spec document may carry besides the SignalSpec itself
SPEC_SIDECAR_KEYS = frozenset({'sampling'})


Source = Union[str, os.PathLike, TextIO]


class TraceFormatError(ValueError):
    """
    A trace file is malformed or its sampling is not uniform.
    'row' is the 0-based index of the offending data row (the header is not
    counted, so the first sample is row 0).
    """

    def __init__(self, msg, row=None, path=None):
        super().__init__(msg)
        self.row = row
        self.path = path

    def __str__(self):
        return (f'reading {self.path} failed: ' if self.path else '') \
               + super().__str__() \
               + (f' (row {self.row})' if self.row is not None else '')


def source_name(source:Source):
    if isinstance(source, (str, os.PathLike)):
        return os.fspath(source)
    return getattr(source, 'name', None)


def trace_provenance(values:np.ndarray, path=None) -> str:
    """
    'trace:<file name>@<digest of the samples>'. The directory is left out
    so that copies of a trace share their provenance.
    """
    digest = hashlib.sha256(
        np.ascontiguousarray(values, dtype='<f8').tobytes()).hexdigest()[:16]
    name = os.path.basename(path) if path else '<stream>'
    return f'trace:{name}@{digest}'


def read_trace(source:Source) -> ThreePhaseSignal:
    """
    reads a trace from a path or a text stream and verifies that its
    't' column is strictly increasing and uniformly spaced
    """
    path = source_name(source)
    try:
        frame = pd.read_csv(source, float_precision='round_trip')
    except pd.errors.EmptyDataError:
        raise TraceFormatError('trace is empty', path=path) from None
    except (pd.errors.ParserError, UnicodeDecodeError) as exc:
        raise TraceFormatError(f'malformed CSV: {exc}', path=path) from None
    missing = [col for col in TRACE_COLUMNS if col not in frame.columns]
    if missing:
        raise TraceFormatError(f'missing column(s) {", ".join(missing)}',
                               path=path)
    if len(frame) < ThreePhaseSignal.MIN_SAMPLES:
        raise TraceFormatError(
            f'trace requires at least {ThreePhaseSignal.MIN_SAMPLES} rows '
            f'(got {len(frame)})', path=path)
    try:
        values = frame[TRACE_COLUMNS].to_numpy(dtype=float)
    except ValueError as exc:
        raise TraceFormatError(f'non-numeric value: {exc}', path=path) \
            from None
    non_finite = ~np.isfinite(values).all(axis=1)
    if non_finite.any():
        raise TraceFormatError('non-finite value', int(np.argmax(non_finite)),
                               path)
    t = values[:, 0]
    steps = np.diff(t)
    non_increasing = steps <= 0
    if non_increasing.any():
        raise TraceFormatError('time column is not strictly increasing',
                               int(np.argmax(non_increasing)) + 1, path)
    dt = (t[-1] - t[0]) / (len(t) - 1)
    jitter = np.abs(steps - dt) > MAX_JITTER * dt
    if jitter.any():
        raise TraceFormatError('non-uniform sampling',
                               int(np.argmax(jitter)) + 1, path)
    logger.debug('read %d samples (dt=%g) from %s', len(t), dt, path)
    return ThreePhaseSignal(t[0], dt, values[:, 1:],
                            trace_provenance(values, path))


def write_trace(signal:ThreePhaseSignal, sink:Source):
    frame = pd.DataFrame({'t': signal.t,
                          'va': signal.va, 'vb': signal.vb, 'vc': signal.vc},
                         columns=TRACE_COLUMNS)
    frame.to_csv(sink, index=False, float_format=FLOAT_FORMAT,
                 lineterminator='\n')


def load_spec(source:Source) -> SignalSpec:
    path = source_name(source)
    try:
        if isinstance(source, (str, os.PathLike)):
            with open(source, encoding='utf8') as spec_file:
                desc = json.load(spec_file)
        else:
            desc = json.load(source)
    except json.JSONDecodeError as exc:
        raise SpecError(f'{path or "specification"} is not valid JSON: '
                        f'{exc}') from None
    if isinstance(desc, dict):
        desc = {key: val for key, val in desc.items()
                if key not in SPEC_SIDECAR_KEYS}
    return SignalSpec.from_dict(desc)


def dump_spec(spec:SignalSpec, sink:Source=None, sampling:dict=None) -> str:
    """
    serializes 'spec' (plus the optional sampling grid it was generated on)
    and writes it to 'sink' if given
    """
    desc = spec.to_dict()
    if sampling is not None:
        desc['sampling'] = sampling
    content = json.dumps(desc, indent=2,
                         sort_keys=True) + '\n'
    if sink is None:
        return content
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, 'w', encoding='utf8', newline='\n') as spec_file:
            spec_file.write(content)
    else:
        sink.write(content)
    return content
