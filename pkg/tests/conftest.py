import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from slicefock.quaternion import ImaginaryUnit, Quaternion

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

coord = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False, allow_infinity=False)


@st.composite
def quaternions(draw, radius=3.0):
    c = draw(st.tuples(coord, coord, coord, coord))
    return Quaternion(*(np.clip(c, -radius, radius)))


@st.composite
def units(draw):
    v = np.array(draw(st.tuples(coord, coord, coord)))
    if np.linalg.norm(v) < 1e-3:
        v = np.array([0.0, 0.0, 1.0])
    return ImaginaryUnit.from_vector(v)


alphas = st.sampled_from([-0.5, 0.0, 0.5, 1.3])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
