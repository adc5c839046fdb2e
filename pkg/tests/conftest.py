from __future__ import annotations

import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

DATA = HERE.parent / "src" / "molcc" / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA
