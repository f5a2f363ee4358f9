import numpy as np
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mccdma_alloc.model import PowerMatrix

FIXTURE = [[10.0, 11.0], [1.0, 100.0]]


@st.composite
def power_matrices(draw, max_groups=5, max_users=5):
    g = draw(st.integers(1, max_groups))
    u = draw(st.integers(1, max_users))
    p = draw(arrays(np.float64, (g, u), elements=st.floats(0.01, 50.0)))
    return PowerMatrix(p)
