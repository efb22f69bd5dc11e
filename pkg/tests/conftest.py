import math

import numpy as np
import pytest
from hypothesis import strategies as st

from ptfermion.models import H2Params, H4Params


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_unbroken_h4(rng, b0=True, b3=True):
    b = rng.uniform(-1, 1, 4)
    if not b0:
        b[0] = 0.0
    if not b3:
        b[3] = 0.0
    return H4Params(math.sqrt(b @ b) + rng.uniform(0.1, 2.0), *b)


finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)
positive = st.floats(0.1, 4.0, allow_nan=False, allow_infinity=False)


@st.composite
def h2_unbroken(draw):
    sign = draw(st.sampled_from([-1.0, 1.0]))
    return H2Params(draw(finite), sign * draw(positive), sign * draw(positive))


@st.composite
def h4_unbroken(draw):
    b = np.array([draw(st.floats(-1, 1)) for _ in range(4)])
    return H4Params(math.sqrt(b @ b) + draw(st.floats(0.1, 2.0)), *b)
