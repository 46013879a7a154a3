import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bdca import Box, build_problem


def random_box_problem(rng, n, radius=1.0, q_scale=1.0):
    """Random symmetric Q with uniform(-1,1) entries over [-radius, radius]^n."""
    M = rng.uniform(-1.0, 1.0, size=(n, n))
    Q = 0.5 * (M + M.T)
    q = q_scale * rng.uniform(-1.0, 1.0, size=n)
    box = Box.symmetric(n, radius)
    return build_problem(Q, q, box)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
