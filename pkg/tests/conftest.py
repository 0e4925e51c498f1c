import random
from fractions import Fraction as F

import pytest

from dyadicspec.exactnum import PiLinear
from dyadicspec.spectrum import (
    ILattice,
    Point,
    PrimeFamily,
    Rect,
    SpectrumSet,
    VLine,
    VSegment,
)


@pytest.fixture(scope="session")
def roots2k():
    return SpectrumSet((ILattice(F(0), PiLinear(0, 0), PiLinear(0, 2)),))


@pytest.fixture(scope="session")
def solenoid():
    return SpectrumSet((VLine(F(0)),))


@pytest.fixture(scope="session")
def rectangle():
    return SpectrumSet((Rect(F(-1), F(0), PiLinear(0, -1), PiLinear(0, 1)),))


@pytest.fixture(scope="session")
def primefamily():
    return SpectrumSet((PrimeFamily("2j", 8),))


def small_fraction(rng: random.Random, allow_zero=True) -> F:
    num = rng.randint(-4, 4)
    if not allow_zero and num == 0:
        num = 1
    return F(num, rng.choice([1, 2, 3, 4]))


def small_pilinear(rng: random.Random, pi_only=False) -> PiLinear:
    q1 = small_fraction(rng)
    q0 = F(0) if (pi_only or rng.random() < 0.6) else small_fraction(rng)
    return PiLinear(q0, q1)


def random_primitive(rng: random.Random, re: F):
    kind = rng.choice(["point", "point", "segment", "lattice", "rect", "vline", "family"])
    if kind == "point":
        return Point(re, small_pilinear(rng))
    if kind == "segment":
        a, b = small_pilinear(rng), small_pilinear(rng)
        if a > b:
            a, b = b, a
        return VSegment(re, a, b)
    if kind == "lattice":
        if rng.random() < 0.85:
            step = PiLinear(0, F(rng.randint(1, 4), rng.choice([1, 2, 3, 4])))
        else:
            # nonzero rational part makes the angle orbit dense
            step = PiLinear(F(rng.randint(1, 3)), F(rng.randint(0, 2), 2))
        return ILattice(re, small_pilinear(rng), step)
    if kind == "rect":
        hi = re + F(rng.randint(0, 2), 2)
        a, b = small_pilinear(rng), small_pilinear(rng)
        if a > b:
            a, b = b, a
        return Rect(re, hi, a, b)
    if kind == "vline":
        return VLine(re)
    return PrimeFamily("2j", rng.randint(1, 3))


def random_spectrum(rng: random.Random) -> SpectrumSet:
    count = rng.randint(1, 3)
    res = [small_fraction(rng) for _ in range(count)]
    if count > 1 and rng.random() < 0.5:
        res[1] = res[0]  # force shared sections
    return SpectrumSet(tuple(random_primitive(rng, re) for re in res))
