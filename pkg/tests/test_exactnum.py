import math
import random
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dyadicspec.exactnum import (
    EQUAL,
    GREATER,
    LESS,
    PiLinear,
    ceil_ratio,
    compare,
    exact_ratio,
    floor_ratio,
    parse,
    pi_bounds,
    reduce_mod_2pi,
    render,
    scale_pow2,
    to_float,
)

mpmath.mp.dps = 60
MP_PI = mpmath.pi


def mp_value(x: PiLinear):
    return (
        mpmath.mpf(x.q0.numerator) / x.q0.denominator
        + mpmath.mpf(x.q1.numerator) / x.q1.denominator * MP_PI
    )


rationals = st.fractions(min_value=-50, max_value=50, max_denominator=64)


def test_pi_bounds_width_and_value():
    lo, hi = pi_bounds(30)
    assert hi - lo <= F(1, 10**30)
    # pi = 3.14159265358979323846 26433...
    assert lo < F(31415926535897932385, 10**19)
    assert hi > F(31415926535897932384, 10**19)


def test_compare_examples():
    # pi against the classic overestimate 355/113, decided by enclosure
    assert compare(PiLinear(0, 1), PiLinear(F(355, 113), 0)) == LESS
    assert compare(PiLinear(2, 3), PiLinear(2, 3)) == EQUAL
    assert compare(PiLinear(1, 0), PiLinear(0, 0)) == GREATER


def test_scale_pow2_examples():
    assert scale_pow2(PiLinear(0, 2), -1) == PiLinear(0, 1)
    assert scale_pow2(PiLinear(3, 0), 2) == PiLinear(12, 0)
    assert scale_pow2(PiLinear(F(1, 3), 5), -3) == PiLinear(F(1, 24), F(5, 8))


def test_reduce_examples():
    assert reduce_mod_2pi(PiLinear(0, 5)) == PiLinear(0, 1)  # boundary goes to +pi
    assert reduce_mod_2pi(PiLinear(0, 0)) == PiLinear(0, 0)
    assert reduce_mod_2pi(PiLinear(1, 2)) == PiLinear(1, 0)
    assert reduce_mod_2pi(PiLinear(0, -1)) == PiLinear(0, 1)  # -pi maps to +pi


def test_to_float_examples():
    lo, hi = to_float(PiLinear(0, 1), 5)
    assert F(314159, 100000) <= lo <= hi <= F(314160, 100000) + F(1, 10**5)
    assert hi - lo <= F(1, 10**5)
    lo, hi = to_float(PiLinear(F(1, 2), 0), 3)
    assert lo == hi == F(1, 2)
    lo, hi = to_float(PiLinear(-1, 1), 2)
    # pi - 1 = 2.1415926...
    assert lo <= F(2141593, 10**6) and hi >= F(2141592, 10**6)
    assert hi - lo <= F(1, 100)


@given(rationals, rationals, rationals, rationals)
@settings(max_examples=300, deadline=None)
def test_compare_agrees_with_high_precision_floats(a0, a1, b0, b1):
    a, b = PiLinear(a0, a1), PiLinear(b0, b1)
    got = compare(a, b)
    diff = mp_value(a) - mp_value(b)
    if got == EQUAL:
        assert a.q0 == b.q0 and a.q1 == b.q1
    else:
        assert (diff > 0) == (got == GREATER)
    # and with the library's own interval route at sufficient precision
    alo, ahi = to_float(a, 30)
    blo, bhi = to_float(b, 30)
    if ahi < blo:
        assert got == LESS
    elif bhi < alo:
        assert got == GREATER


@given(rationals, rationals)
@settings(max_examples=200, deadline=None)
def test_reduce_is_idempotent_and_differs_by_even_pi(q0, q1):
    x = PiLinear(q0, q1)
    r = reduce_mod_2pi(x)
    assert reduce_mod_2pi(r) == r
    d = x - r
    assert d.q0 == 0 and d.q1 % 2 == 0
    # representative lies in (-pi, pi]
    assert compare(r, PiLinear(0, 1)) <= 0
    assert compare(r, PiLinear(0, -1)) > 0


@given(rationals, rationals, st.integers(min_value=-8, max_value=8))
@settings(max_examples=150, deadline=None)
def test_scale_pow2_roundtrip(q0, q1, k):
    x = PiLinear(q0, q1)
    assert scale_pow2(scale_pow2(x, k), -k) == x


@given(rationals, rationals)
@settings(max_examples=200, deadline=None)
def test_render_parse_roundtrip(q0, q1):
    x = PiLinear(q0, q1)
    assert parse(render(x)) == x
    assert parse(render(x).replace(" ", "")) == x


def test_parse_variants():
    assert parse("pi") == PiLinear(0, 1)
    assert parse("-pi") == PiLinear(0, -1)
    assert parse("2-3*pi") == PiLinear(2, -3)
    assert parse("1/3 + 5/8*pi") == PiLinear(F(1, 3), F(5, 8))
    with pytest.raises(ValueError):
        parse("1 + 2*e")
    with pytest.raises(ValueError):
        parse("")


def test_floor_ratio_rational_and_irrational():
    assert floor_ratio(PiLinear(0, 7), PiLinear(0, 2)) == 3
    assert floor_ratio(PiLinear(0, -7), PiLinear(0, 2)) == -4
    assert floor_ratio(PiLinear(1, 1), PiLinear(0, 1)) == 1  # (1+pi)/pi
    assert ceil_ratio(PiLinear(1, 0), PiLinear(0, 1)) == 1  # 1/pi
    assert exact_ratio(PiLinear(0, 3), PiLinear(0, 2)) == F(3, 2)
    assert exact_ratio(PiLinear(1, 3), PiLinear(0, 2)) is None


@given(rationals, rationals, st.fractions(min_value=F(1, 8), max_value=8, max_denominator=16))
@settings(max_examples=150, deadline=None)
def test_floor_ratio_matches_floats(q0, q1, s1):
    x = PiLinear(q0, q1)
    s = PiLinear(0, s1)
    got = floor_ratio(x, s)
    approx = float(mp_value(x) / mp_value(s))
    assert abs(got - math.floor(approx)) <= 1  # float rounding tolerance
    # exact sandwich
    assert compare(s.scaled(got), x) <= 0
    assert compare(s.scaled(got + 1), x) > 0
