import sys
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from limsup_topo.carriers import UPSet, powerset  # noqa: E402

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")

bitstrings = st.text(alphabet="01", max_size=6)
cycles = st.text(alphabet="01", min_size=1, max_size=5)
upsets = st.builds(UPSet, bitstrings, cycles)


def finite_elems(n):
    return st.integers(0, (1 << n) - 1).map(powerset(n).elem)


@pytest.fixture
def p2():
    return powerset(2)


@pytest.fixture
def p3():
    return powerset(3)


def membership(s, horizon):
    """Oracle: the set of points below ``horizon``, from the raw definition."""
    return {m for m in range(horizon) if m in s}
