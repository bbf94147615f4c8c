import numpy as np
import pytest

from tklab.hardy_core import CoeffVec
from tklab.operators import orthonormalize_family


def rand_coeffvec(rng, m, N, deg, lo=0):
    """Random polynomial element supported on degrees [lo, deg)."""
    arr = np.zeros((m, N), dtype=complex)
    arr[:, lo:deg] = (rng.standard_normal((m, deg - lo))
                      + 1j * rng.standard_normal((m, deg - lo)))
    return CoeffVec(arr)


def rand_orthonormal(rng, m, N, deg, count, lo=0):
    return orthonormalize_family(
        [rand_coeffvec(rng, m, N, deg, lo=lo) for _ in range(count)])


def unit(v: CoeffVec) -> CoeffVec:
    return v * (1.0 / v.norm())


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
