"""Shared fixtures: contexts and the preset sample points used across tests."""

import mpmath
import pytest

from qortho import QContext

# Canonical sample arguments for every catalog family, used wherever a test
# sweeps "all presets".  The dual q-Hahn variants share (gamma, delta, N).
PRESET_ARGS = (
    ("askey_wilson", (0.3, 0.2, 0.1, 0.4)),
    ("continuous_big_q_hermite", (0.4,)),
    ("discrete_q_hermite_1", ()),
    ("little_q_jacobi_v1", (0.25, 0.4)),
    ("little_q_jacobi_v2", (0.25, 0.4)),
    ("q_laguerre", (-0.5,)),
    ("dual_q_hahn_v1", (0.3, 0.4, 10)),
    ("dual_q_hahn_v2", (0.3, 0.4, 10)),
    ("dual_q_hahn_v3", (0.3, 0.4, 10)),
)

# Presets whose weight series converge at q = 0.5 (discrete q-Hermite I's
# series has term ratio tending to 1 and is excluded from weight sweeps).
SUMMABLE_PRESET_ARGS = tuple(
    (name, args) for name, args in PRESET_ARGS if name != "discrete_q_hermite_1"
)


@pytest.fixture(scope="session")
def dctx():
    """Double-precision context at q = 0.5."""
    return QContext.double(0.5)


@pytest.fixture(scope="session")
def c50():
    """50-digit context at q = 0.5."""
    return QContext(mpmath.mpf("0.5"), precision=50)


def rel(a, b, floor=1e-300):
    """Relative difference with an absolute floor for near-zero pairs."""
    return abs(a - b) / max(abs(a), abs(b), floor)
