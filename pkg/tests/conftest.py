import numpy as np
import pytest

from twistmoments.kernels import CutoffKernel
from twistmoments.moments import scan_table_requirement
from twistmoments.newform import determine_fricke_sign, lambda_table, level11_spec

ACCEPTANCE_SCAN_CAP = 32000.0  # CI cap for the moment-growth criterion


@pytest.fixture(scope="session")
def spec11():
    """Level-11 weight-2 form with the Fricke sign fixed numerically."""
    base = level11_spec()
    eta = determine_fricke_sign(base, lambda_table(base, 2048))
    return level11_spec(fricke_eta=eta)


@pytest.fixture(scope="session")
def kernel11():
    return CutoffKernel(2, 11)


@pytest.fixture(scope="session")
def table_small(spec11):
    """Enough for twists with |D| up to ~1600 and quick property sweeps."""
    return lambda_table(spec11, 30000)


@pytest.fixture(scope="session")
def table_big(spec11, kernel11):
    """Sized for the Deligne sweep (1e6) and the capped acceptance scan."""
    need = max(1_000_000, scan_table_requirement(spec11, kernel11, ACCEPTANCE_SCAN_CAP))
    return lambda_table(spec11, need)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20250810)
