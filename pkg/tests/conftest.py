import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from invflight import mirage_iii


@pytest.fixture(scope="session")
def mirage():
    return mirage_iii()
