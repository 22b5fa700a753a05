import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from laws import LAWS


@pytest.mark.parametrize("name", sorted(LAWS))
@settings(max_examples=40)
@given(seed=st.integers(0, 2**63 - 1))
def test_law(name, seed):
    LAWS[name](np.random.default_rng(seed))
