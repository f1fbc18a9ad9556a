import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from wipass.channel import ChannelParams  # noqa: E402
from wipass.geometry import canonical_geometry  # noqa: E402


@pytest.fixture
def geom():
    return canonical_geometry(50.0)


@pytest.fixture
def params():
    return ChannelParams()


@pytest.fixture
def det_params():
    """Fading off, shadowing off."""
    return ChannelParams(fading=False, shadowing_variance_db2=0.0)
