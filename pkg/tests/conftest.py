import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from core.config_manager import ConfigManager  # noqa: E402
from core.rtocalc import RtoParams  # noqa: E402


@pytest.fixture
def rfc_params():
    return RtoParams.rfc6298(1)


@pytest.fixture
def config(tmp_path):
    return ConfigManager(str(tmp_path / "rto_lab_config.json"))
