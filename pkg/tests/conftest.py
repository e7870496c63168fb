import numpy as np
import pytest

from squint import BinningScheme, derive_params, input_state


@pytest.fixture(scope="session")
def fringe_params():
    """High-photon-budget fringe study: n_bar = 200, pure squeezed input."""
    return derive_params(input_state(n_bar=200.0, sinh2r=0.7, purity=1.0))


@pytest.fixture(scope="session")
def mixed_params():
    """Impure squeezed input used by the Monte Carlo benchmark."""
    return derive_params(input_state(alpha0=np.sqrt(42.0), sinh2r=0.687, purity=0.58))


@pytest.fixture(scope="session")
def resolution_params():
    """Large-amplitude configuration of the resolution-gain checks."""
    return derive_params(input_state(alpha0=np.sqrt(427.0), sinh2r=0.687, purity=0.58))


@pytest.fixture(scope="session")
def coherent_params():
    """Coherent-only input: no squeezing, unit purity."""
    return derive_params(input_state(alpha0=2.0, r=0.0, purity=1.0))


@pytest.fixture
def narrow_scheme():
    return BinningScheme(0.1)


@pytest.fixture
def wide_scheme():
    return BinningScheme(0.5)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
