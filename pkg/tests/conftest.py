import numpy as np
import pytest

from udr_adc import AdcConfig, encode, generate
from udr_adc.presets import PRESETS


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def cfg11():
    """0.2 V window, 9 quantizer bits: the four-tone experiment settings."""
    return AdcConfig(v_ref=0.2, total_bits=11)


@pytest.fixture(scope="session")
def fig5_stream():
    return generate(PRESETS["fig5"].signal)


@pytest.fixture(scope="session")
def fig5_conversion(fig5_stream):
    return encode(fig5_stream, PRESETS["fig5"].config())
