"""Pytest configuration and fixtures."""
import os
import tempfile

import pytest

# log files of CLI runs go to a scratch directory, not ./logs
os.environ.setdefault("CMLT_LOG_DIRECTORY", tempfile.mkdtemp(prefix="cmlt-logs-"))

from cmlt.core.config import get_settings  # noqa: E402
from cmlt.models.curve import CurveSpec  # noqa: E402


@pytest.fixture(name="fresh_settings")
def fresh_settings_fixture():
    """Drop the cached settings before and after a test that changes CMLT_* variables."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture(name="curve_432")
def curve_432_fixture():
    """y^2 = x^3 - 432."""
    return CurveSpec(3, -432)


@pytest.fixture(name="curve_4x")
def curve_4x_fixture():
    """y^2 = x^3 + 4x."""
    return CurveSpec(1, -4)
