import os

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from localeforge.poset import Poset

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def posets(draw, max_n=5):
    """Random posets: a random DAG on indices respecting index order, closed."""
    n = draw(st.integers(0, max_n))
    covers = [
        (i, j)
        for j in range(n)
        for i in range(j)
        if draw(st.booleans())
    ]
    return Poset.from_covers(n, covers)


@pytest.fixture
def small_lattices():
    from localeforge.frame import enumerate_distributive_lattices

    return enumerate_distributive_lattices(6)
