import math

import numpy as np
import pytest

from cfkernel.clifford import GeometricFrame

HALF_PI = 0.5 * math.pi


def frames_in_ball(n, tmax, seed):
    """Random frames with ``t`` uniform in ``[0, tmax]`` and uniform angle."""
    rng = np.random.default_rng(seed)
    t = rng.uniform(0.0, tmax, n)
    th = rng.uniform(0.0, math.pi, n)
    return [GeometricFrame.from_uv(a * math.cos(b), a * math.sin(b)) for a, b in zip(t, th)]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
