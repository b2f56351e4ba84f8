import pytest

from .helpers import balanced_spec, am_spec, negative_sequence_spec, \
    zero_sequence_spec, sample


@pytest.fixture
def balanced_sig():
    return sample(balanced_spec())

@pytest.fixture
def am_sig():
    return sample(am_spec())

@pytest.fixture
def negative_sequence_sig():
    return sample(negative_sequence_spec())

@pytest.fixture
def zero_sequence_sig():
    return sample(zero_sequence_spec())

@pytest.fixture
def harmonic_sig():
    """balanced tone plus a 5 % negative sequence 5th harmonic"""
    return sample(negative_sequence_spec(0.05, 5))
