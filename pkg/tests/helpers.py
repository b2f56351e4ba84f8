import json
import numpy as np
from pathlib import Path

from ifreq.signal_model import SignalSpec, Component, Constant, Sinusoidal, \
    generate


# reference desk configuration: 1 s at 10 kHz, 50 Hz nominal
OMEGA_O = 2 * np.pi * 50
FS = 10000.0
DT = 1 / FS
N = 10000


def build_tree(base_dir:Path, tree):
    """
    Build a directory tree ('tree') within a directory ('base_dir').

    content is specified as dictionary of filenames (str) to dict(=subtree),
    bytes (=file) or str (=text file). JSON serializable objects other than
    dicts can be passed by wrapping them into json.dumps() first.
    """
    for sub_name, subtree in tree.items():
        if isinstance(subtree, dict):
            (base_dir / sub_name).mkdir()
            build_tree(base_dir / sub_name, subtree)
        elif isinstance(subtree, str):
            (base_dir / sub_name).write_text(subtree, encoding='utf8')
        else:
            (base_dir / sub_name).write_bytes(subtree)
    return Path(base_dir).resolve()


def spec_json(spec:SignalSpec) -> str:
    return json.dumps(spec.to_dict())


def balanced_spec(amplitude=1.0, components=()):
    return SignalSpec.balanced(OMEGA_O, amplitude, components=components)


def am_spec(depth=0.1, frequency=2.0):
    """balanced tone with sinusoidal amplitude modulation"""
    return SignalSpec.balanced(
        OMEGA_O, envelope=Sinusoidal(1.0, depth, frequency))


def negative_sequence_spec(amplitude=0.1, harmonic=1):
    return balanced_spec(components=[
        Component('negative', amplitude, harmonic=harmonic)])


def zero_sequence_spec(amplitude=0.2, frequency=75.0):
    """balanced tone plus a zero sequence interharmonic (1.5 omega_o)"""
    return balanced_spec(components=[
        Component('zero', amplitude, frequency=frequency)])


def sample(spec, n=N, dt=DT, t0=0.0):
    return generate(spec, t0, dt, n)
