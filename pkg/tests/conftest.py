import numpy as np
import pytest

from puretomo import RandomStream


@pytest.fixture
def rng():
    return RandomStream(1234).generator()


def random_density_matrix(d, gen, rank=None):
    """Random mixed state from a Ginibre matrix (test helper, independent of the library)."""
    rank = rank or d
    g = gen.standard_normal((d, rank)) + 1j * gen.standard_normal((d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
