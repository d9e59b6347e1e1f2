import sys
from pathlib import Path

SRC = Path(__file__).resolve().parents[1] / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

import pytest

from evspin import Spin, build_quorum, default_config


@pytest.fixture(scope="session")
def quorum_for():
    """Session-wide cache: quorum builds dominate suite runtime otherwise."""
    cache = {}

    def get(two_s):
        if two_s not in cache:
            cache[two_s] = build_quorum(default_config(Spin(two_s)))
        return cache[two_s]

    return get
