import random
from fractions import Fraction

import pytest

from segreode.scalars import GaussRational
from segreode.segre import RealStructureData
from segreode.series import USeries

SEED = 20260811


def rnd_fraction(rng, lo=-3, hi=3):
    return Fraction(rng.randint(lo, hi), rng.choice((1, 1, 2, 3)))


def rnd_gauss(rng, lo=-3, hi=3):
    return GaussRational(rnd_fraction(rng, lo, hi), rnd_fraction(rng, lo, hi))


def rnd_real_series(rng, deg=4, trunc=12, var="w"):
    return USeries(var, trunc, {d: rnd_fraction(rng) for d in range(deg + 1)})


def rnd_complex_series(rng, deg=4, trunc=12, var="w"):
    return USeries(var, trunc, {d: rnd_gauss(rng) for d in range(deg + 1)})


def rnd_structure_data(rng, m=None, trunc=12):
    if m is None:
        m = rng.choice((1, 2, 3))
    c = rnd_complex_series(rng, trunc=trunc) if rng.random() < 0.7 \
        else USeries.zero("w", trunc)
    return RealStructureData(a=rnd_real_series(rng, trunc=trunc),
                             b=rnd_real_series(rng, trunc=trunc),
                             c=c, m=m)


@pytest.fixture(scope="session")
def rng():
    return random.Random(SEED)


@pytest.fixture(scope="session")
def structure_samples():
    """The 25 deterministic random classification data used by acceptance."""
    r = random.Random(SEED)
    return [rnd_structure_data(r, m=(i % 3) + 1) for i in range(25)]
