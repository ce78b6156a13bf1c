"""Hypothesis strategies for density matrices."""
import numpy as np
from hypothesis import strategies as st

from fidqsl.densmat import random_density, random_unitary


@st.composite
def densities(draw, dims=(2, 3, 4), same_dim_as=None):
    dim = draw(st.sampled_from(dims)) if same_dim_as is None else same_dim_as
    rank = draw(st.integers(1, dim))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_density(dim, rank, rng=seed)


@st.composite
def density_pairs(draw, dims=(2, 3, 4)):
    dim = draw(st.sampled_from(dims))
    a = draw(densities(same_dim_as=dim))
    b = draw(densities(same_dim_as=dim))
    return a, b


@st.composite
def unitaries(draw, dim):
    return random_unitary(dim, rng=draw(st.integers(0, 2**32 - 1)))


def hermitian_matrices(dim):
    return st.integers(0, 2**32 - 1).map(lambda s: _herm(dim, s))


def _herm(dim, seed):
    r = np.random.Generator(np.random.Philox(seed))
    z = r.standard_normal((dim, dim)) + 1j * r.standard_normal((dim, dim))
    return 0.5 * (z + z.conj().T)
