"""Shared corpus builders for the solver tests."""

import random

import pytest

from subsetbalance.core import (
    CoefficientSet,
    Instance,
    Planted,
    SolutionProfile,
    UniformRange,
    gen_instance,
)


def uniform_instance(seed: int, n: int, coeff_set: CoefficientSet,
                     w: int = 100) -> Instance:
    inst, _ = gen_instance(n, coeff_set, UniformRange(w), random.Random(seed))
    return inst


def planted_instance(seed: int, coeff_set: CoefficientSet,
                     counts: dict, w: int = 100):
    profile = SolutionProfile.from_dict(coeff_set, counts)
    return gen_instance(profile.n, coeff_set, Planted(profile, w),
                        random.Random(seed))


def compat_vector(d: int, twos: int, ones: int, rng: random.Random):
    """A [0:2]^d vector with exact 2- and 1-counts."""
    v = [0] * d
    pos = rng.sample(range(d), twos + ones)
    for i in pos[:twos]:
        v[i] = 2
    for i in pos[twos:]:
        v[i] = 1
    return tuple(v)


def compat_planted_pair(d: int, twos: int, ones: int, rng: random.Random):
    """A compatible pair (a, b): a - b entrywise in [-1, 1], both with the
    exact 2- and 1-counts."""
    a = compat_vector(d, twos, ones, rng)
    ones_idx = [i for i, v in enumerate(a) if v == 1]
    twos_idx = [i for i, v in enumerate(a) if v == 2]
    zeros_idx = [i for i, v in enumerate(a) if v == 0]
    b = [0] * d
    b_two_home = rng.sample(ones_idx, twos)  # b's 2s sit under 1s of a
    for i in b_two_home:
        b[i] = 2
    for i in twos_idx:
        b[i] = 1  # a's 2s need b = 1
    need = ones - len(twos_idx)
    rest = [i for i in ones_idx if i not in b_two_home] + zeros_idx
    for i in rng.sample(rest, need):
        b[i] = 1
    return a, tuple(b)


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
