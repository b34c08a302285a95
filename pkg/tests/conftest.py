import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tropfan.matroid import zoo as _zoo  # noqa: E402


@pytest.fixture(scope="session")
def zoo():
    return _zoo()


ZOO_NAMES = list(_zoo())
