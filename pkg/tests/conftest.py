import numpy as np
import pytest

from waveshift import build_packet_bank, load_filter_pair


@pytest.fixture(scope="session")
def pair():
    return load_filter_pair("qshift10")


@pytest.fixture(scope="session")
def bank2(pair):
    return build_packet_bank(pair, 2)


@pytest.fixture(scope="session")
def bank3(pair):
    return build_packet_bank(pair, 3)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
