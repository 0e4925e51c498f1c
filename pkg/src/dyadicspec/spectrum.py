"""Symbolic closed subsets of the plane and their vertical-section combinatorics.

A spectrum set is a finite union of primitives (points, vertical segments,
vertical lattices, vertical lines, axis-aligned rectangles, and the
two-angle prime family).  Everything downstream is derived from it:

* vertical sections S_t = {u : t + iu in Z},
* the antipode condition at level n: S_t - S_t contains an odd multiple
  of 2^n * pi (equivalently, the level-n circle section at radius
  e^{t/2^n} contains a pair of antipodal points),
* the per-section level sets of that condition, with exact tails beyond
  any computed bound,
* closedness of the exponential images exp(Z / 2^n).

All decisions are made in exact arithmetic on PiLinear scalars.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

from .exactnum import (
    PiLinear,
    ceil_ratio,
    compare,
    exact_ratio,
    floor_ratio,
    scale_pow2,
)

Rat = Fraction


class SpectrumError(ValueError):
    pass


# ---------------------------------------------------------------------------
# primitives


@dataclass(frozen=True)
class Point:
    re: Fraction
    im: PiLinear


@dataclass(frozen=True)
class VSegment:
    re: Fraction
    im_lo: PiLinear
    im_hi: PiLinear

    def __post_init__(self):
        if self.im_lo > self.im_hi:
            raise SpectrumError("segment with im_lo > im_hi")


@dataclass(frozen=True)
class ILattice:
    """Points re + i(base + k*step) for all integers k."""

    re: Fraction
    base: PiLinear
    step: PiLinear

    def __post_init__(self):
        if self.step.sign() <= 0:
            raise SpectrumError("lattice step must be positive")


@dataclass(frozen=True)
class VLine:
    re: Fraction


@dataclass(frozen=True)
class Rect:
    re_lo: Fraction
    re_hi: Fraction
    im_lo: PiLinear
    im_hi: PiLinear

    def __post_init__(self):
        if self.re_lo > self.re_hi:
            raise SpectrumError("rectangle with re_lo > re_hi")
        if self.im_lo > self.im_hi:
            raise SpectrumError("rectangle with im_lo > im_hi")


@dataclass(frozen=True)
class PrimeFamily:
    """The purely imaginary two-angle family over primes j >= 3.

    For each prime j the set contains i*a_j and i*b_j with
    a_j = pi/j + 2^(n_j + 1)*pi and b_j = pi/j + 3*2^(n_j)*pi, where
    n_j = seq(j) is strictly increasing.  The family is conceptually
    infinite; J primes are materialized for level computations and the
    tail is handled symbolically (a_j - b_j = -2^(n_j)*pi identically,
    which pins the antipodal schedule for every j).
    """

    n_seq: str = "2j"
    J: int = 8

    def __post_init__(self):
        if self.J < 1:
            raise SpectrumError("prime family truncation must be >= 1")
        parse_nseq(self.n_seq)  # validate

    def primes(self) -> tuple[int, ...]:
        return primes_from_3(self.J)

    def n_of(self, j: int) -> int:
        a, b = parse_nseq(self.n_seq)
        n = a * j + b
        if n < 1:
            raise SpectrumError(f"n_seq {self.n_seq!r} gives n_{j} = {n} < 1")
        return n

    def alpha(self, j: int) -> PiLinear:
        return PiLinear(0, Fraction(1, j) + 2 ** (self.n_of(j) + 1))

    def beta(self, j: int) -> PiLinear:
        return PiLinear(0, Fraction(1, j) + 3 * 2 ** self.n_of(j))


Primitive = Union[Point, VSegment, ILattice, VLine, Rect, PrimeFamily]


def parse_nseq(spec: str) -> tuple[int, int]:
    """Parse a linear index formula 'a*j+b' (forms: 2j, 3j+1, j+4, j)."""
    s = spec.replace(" ", "").replace("*", "")
    m = re_match_nseq(s)
    if m is None:
        raise SpectrumError(f"unsupported n_seq {spec!r} (expected e.g. '2j' or '2j+1')")
    a, b = m
    if a < 1:
        raise SpectrumError("n_seq slope must be >= 1")
    return a, b


def re_match_nseq(s: str) -> Optional[tuple[int, int]]:
    import re as _re

    m = _re.fullmatch(r"(\d*)j(?:\+(\d+))?", s)
    if m is None:
        return None
    a = int(m.group(1)) if m.group(1) else 1
    b = int(m.group(2)) if m.group(2) else 0
    return a, b


def primes_from_3(count: int) -> tuple[int, ...]:
    out = []
    candidate = 3
    while len(out) < count:
        if all(candidate % p for p in range(2, math.isqrt(candidate) + 1)):
            out.append(candidate)
        candidate += 2
    return tuple(out)


@dataclass(frozen=True)
class SpectrumSet:
    primitives: tuple[Primitive, ...]

    def __post_init__(self):
        object.__setattr__(self, "primitives", tuple(self.primitives))

    def is_empty(self) -> bool:
        return not self.primitives


def real_part_range(Z: SpectrumSet) -> tuple[Fraction, Fraction]:
    """Exact (inf, sup) of real parts over the whole set."""
    if Z.is_empty():
        raise SpectrumError("empty spectrum set")
    los: list[Fraction] = []
    his: list[Fraction] = []
    for p in Z.primitives:
        if isinstance(p, Rect):
            los.append(p.re_lo)
            his.append(p.re_hi)
        elif isinstance(p, PrimeFamily):
            los.append(Fraction(0))
            his.append(Fraction(0))
        else:
            los.append(p.re)
            his.append(p.re)
    return min(los), max(his)


# ---------------------------------------------------------------------------
# vertical sections


@dataclass(frozen=True)
class SectionPoints:
    values: tuple[PiLinear, ...]


@dataclass(frozen=True)
class SectionInterval:
    lo: PiLinear
    hi: PiLinear  # lo < hi strictly (degenerate intervals become points)


@dataclass(frozen=True)
class SectionLattice:
    base: PiLinear
    step: PiLinear  # step > 0


@dataclass(frozen=True)
class SectionLine:
    pass


@dataclass(frozen=True)
class SectionPeriodicIntervals:
    """Union of [lo + k*step, hi + k*step] over all integers k (difference sets only)."""

    lo: PiLinear
    hi: PiLinear
    step: PiLinear


@dataclass(frozen=True)
class SectionModule2:
    """base + Z*gen1 + Z*gen2 with irrational generator ratio (difference sets only)."""

    base: PiLinear
    gen1: PiLinear
    gen2: PiLinear


SectionPart = Union[
    SectionPoints,
    SectionInterval,
    SectionLattice,
    SectionLine,
    SectionPeriodicIntervals,
    SectionModule2,
]


@dataclass(frozen=True)
class SectionSet:
    parts: tuple[SectionPart, ...]

    def is_empty(self) -> bool:
        return not self.parts

    def contains(self, x: PiLinear) -> bool:
        return any(_part_contains(p, x) for p in self.parts)


def _normalize_parts(parts: Iterable[SectionPart]) -> tuple[SectionPart, ...]:
    points: list[PiLinear] = []
    rest: list[SectionPart] = []
    for p in parts:
        if isinstance(p, SectionPoints):
            points.extend(p.values)
        elif isinstance(p, SectionInterval) and compare(p.lo, p.hi) == 0:
            points.append(p.lo)
        else:
            rest.append(p)
    out: list[SectionPart] = []
    if points:
        uniq = []
        for v in points:
            if all(compare(v, u) != 0 for u in uniq):
                uniq.append(v)
        uniq.sort(key=lambda v: (v.q0, v.q1))
        out.append(SectionPoints(tuple(uniq)))
    seen = set()
    for p in rest:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return tuple(out)


def section_set(parts: Iterable[SectionPart]) -> SectionSet:
    return SectionSet(_normalize_parts(parts))


def _part_contains(p: SectionPart, x: PiLinear) -> bool:
    if isinstance(p, SectionPoints):
        return any(compare(x, v) == 0 for v in p.values)
    if isinstance(p, SectionInterval):
        return p.lo <= x and x <= p.hi
    if isinstance(p, SectionLattice):
        r = exact_ratio(x - p.base, p.step)
        return r is not None and r.denominator == 1
    if isinstance(p, SectionLine):
        return True
    if isinstance(p, SectionPeriodicIntervals):
        kmin = ceil_ratio(x - p.hi, p.step)
        kmax = floor_ratio(x - p.lo, p.step)
        return kmax >= kmin
    if isinstance(p, SectionModule2):
        # solve u*gen1 + v*gen2 = x - base componentwise over Q
        w = x - p.base
        a0, a1 = p.gen1.q0, p.gen1.q1
        b0, b1 = p.gen2.q0, p.gen2.q1
        det = a0 * b1 - a1 * b0
        if det == 0:
            raise SpectrumError("degenerate rank-2 module")
        u = (w.q0 * b1 - w.q1 * b0) / det
        v = (a0 * w.q1 - a1 * w.q0) / det
        return u.denominator == 1 and v.denominator == 1
    raise TypeError(f"unknown section part {type(p).__name__}")


def vertical_section(Z: SpectrumSet, t: Fraction) -> SectionSet:
    """Exact S_t = {u : t + iu in Z}."""
    t = Fraction(t)
    parts: list[SectionPart] = []
    for p in Z.primitives:
        if isinstance(p, Point):
            if p.re == t:
                parts.append(SectionPoints((p.im,)))
        elif isinstance(p, VSegment):
            if p.re == t:
                parts.append(SectionInterval(p.im_lo, p.im_hi))
        elif isinstance(p, ILattice):
            if p.re == t:
                parts.append(SectionLattice(p.base, p.step))
        elif isinstance(p, VLine):
            if p.re == t:
                parts.append(SectionLine())
        elif isinstance(p, Rect):
            if p.re_lo <= t <= p.re_hi:
                parts.append(SectionInterval(p.im_lo, p.im_hi))
        elif isinstance(p, PrimeFamily):
            if t == 0:
                vals = []
                for j in p.primes():
                    vals.append(p.alpha(j))
                    vals.append(p.beta(j))
                parts.append(SectionPoints(tuple(vals)))
        else:
            raise TypeError(f"unknown primitive {type(p).__name__}")
    return section_set(parts)


# ---------------------------------------------------------------------------
# difference sets


def section_difference(S: SectionSet) -> SectionSet:
    """Exact S - S as a union of parts (closed under the section grammar
    extended by periodic intervals and rank-2 point modules)."""
    out: list[SectionPart] = []
    for A in S.parts:
        for B in S.parts:
            out.extend(_part_difference(A, B))
    return section_set(out)


def _part_difference(A: SectionPart, B: SectionPart) -> list[SectionPart]:
    if isinstance(A, SectionLine) or isinstance(B, SectionLine):
        return [SectionLine()]
    if isinstance(A, SectionPoints) and isinstance(B, SectionPoints):
        return [SectionPoints(tuple(u - v for u in A.values for v in B.values))]
    if isinstance(A, SectionPoints) and isinstance(B, SectionInterval):
        return [SectionInterval(u - B.hi, u - B.lo) for u in A.values]
    if isinstance(A, SectionInterval) and isinstance(B, SectionPoints):
        return [SectionInterval(A.lo - v, A.hi - v) for v in B.values]
    if isinstance(A, SectionInterval) and isinstance(B, SectionInterval):
        return [SectionInterval(A.lo - B.hi, A.hi - B.lo)]
    if isinstance(A, SectionPoints) and isinstance(B, SectionLattice):
        return [SectionLattice(u - B.base, B.step) for u in A.values]
    if isinstance(A, SectionLattice) and isinstance(B, SectionPoints):
        return [SectionLattice(A.base - v, A.step) for v in B.values]
    if isinstance(A, SectionLattice) and isinstance(B, SectionLattice):
        r = exact_ratio(A.step, B.step)
        base = A.base - B.base
        if r is None:
            return [SectionModule2(base, A.step, B.step)]
        return [SectionLattice(base, A.step.scaled(Fraction(1, r.numerator)))]
    if isinstance(A, SectionInterval) and isinstance(B, SectionLattice):
        lo, hi = A.lo - B.base, A.hi - B.base
        if hi - lo >= B.step:
            return [SectionLine()]
        return [SectionPeriodicIntervals(lo, hi, B.step)]
    if isinstance(A, SectionLattice) and isinstance(B, SectionInterval):
        lo, hi = A.base - B.hi, A.base - B.lo
        if hi - lo >= A.step:
            return [SectionLine()]
        return [SectionPeriodicIntervals(lo, hi, A.step)]
    raise TypeError(f"difference of {type(A).__name__} and {type(B).__name__}")


# ---------------------------------------------------------------------------
# the antipode condition and its level tails
#
# The question at level n is whether S_t - S_t contains an odd multiple of
# 2^n * pi.  Per ordered pair of section parts this reduces to membership
# of 2^n - c in the rational module 2^{n+1} Z + m_1 Z + ... (an exact gcd
# computation), or to counting odd lattice multiples inside an interval.


@dataclass(frozen=True)
class PairTail:
    """Behaviour of a pair condition for large n.

    kind 'finite': condition holds exactly at `levels` (for every n).
    kind 'const': condition equals `value` for all n >= `start`.
    """

    kind: str
    levels: frozenset[int] = frozenset()
    start: int = 0
    value: bool = False


def _v2(n: int) -> int:
    if n == 0:
        raise ValueError("v2(0)")
    return (n & -n).bit_length() - 1


def _rat_gcd(values: Iterable[Fraction]) -> Fraction:
    g = Fraction(0)
    for v in values:
        v = abs(v)
        if v == 0:
            continue
        if g == 0:
            g = v
        else:
            g = Fraction(
                math.gcd(g.numerator * v.denominator, v.numerator * g.denominator),
                g.denominator * v.denominator,
            )
    return g


def _odd_cond(n: int, c: Fraction, mods: list[Fraction]) -> bool:
    """Exists odd k and integers t_i with 2^n * k = c + sum t_i * m_i."""
    g = _rat_gcd([Fraction(2 ** (n + 1))] + mods)
    return ((c - 2**n) / g).denominator == 1


def _odd_cond_tail(c: Fraction, mods: list[Fraction]) -> PairTail:
    m = _rat_gcd(mods)
    if m == 0:
        if c != 0 and c.denominator == 1:
            return PairTail("finite", levels=frozenset({_v2(c.numerator)}))
        return PairTail("finite", levels=frozenset())
    e = _v2(m.numerator)
    start = max(0, e - _v2(m.denominator) if m.denominator % 2 == 0 else e)
    start = max(start, 0)
    value = _odd_cond(start, c, mods)
    assert _odd_cond(start + 1, c, mods) == value
    assert _odd_cond(start + 6, c, mods) == value
    return PairTail("const", start=start, value=value)


def _abs_pl(x: PiLinear) -> PiLinear:
    return -x if x.sign() < 0 else x


def _odd_multiple_in_interval(n: int, a: PiLinear, b: PiLinear) -> bool:
    """Is some odd multiple of 2^n * pi inside the real interval [a, b]?"""
    s = PiLinear(0, 2**n)
    kmin = ceil_ratio(a, s)
    kmax = floor_ratio(b, s)
    if kmax < kmin:
        return False
    return kmax > kmin or kmin % 2 != 0


def _interval_false_tail(endpoints: list[PiLinear]) -> PairTail:
    bound = endpoints[0]
    for e in endpoints[1:]:
        if _abs_pl(e) > _abs_pl(bound):
            bound = e
    bound = _abs_pl(bound)
    n = 0
    while not PiLinear(0, 2**n) > bound:
        n += 1
    return PairTail("const", start=n, value=False)


def _point_lattice_cond(n: int, w: PiLinear, step: PiLinear) -> bool:
    # exists integer l, odd k: w + l*step = 2^n * k * pi
    if step.q0 != 0:
        l = -w.q0 / step.q0
        if l.denominator != 1:
            return False
        return _odd_cond(n, w.q1 + l * step.q1, [])
    if w.q0 != 0:
        return False
    return _odd_cond(n, w.q1, [step.q1])


def _point_lattice_tail(w: PiLinear, step: PiLinear) -> PairTail:
    if step.q0 != 0:
        l = -w.q0 / step.q0
        if l.denominator != 1:
            return PairTail("finite", levels=frozenset())
        return _odd_cond_tail(w.q1 + l * step.q1, [])
    if w.q0 != 0:
        return PairTail("finite", levels=frozenset())
    return _odd_cond_tail(w.q1, [step.q1])


def _lattice_lattice_params(
    w: PiLinear, s1: PiLinear, s2: PiLinear
) -> Optional[tuple[Fraction, list[Fraction]]]:
    """Reduce the two-lattice pair to an (offset, moduli) instance, or None."""
    a0, a1 = s1.q0, s1.q1
    c0, c1 = s2.q0, s2.q1
    if a0 == 0 and c0 == 0:
        if w.q0 != 0:
            return None
        return w.q1, [a1, c1]
    # integer solutions of a0*k1 - c0*k2 = -w0
    den = math.lcm(a0.denominator, c0.denominator, w.q0.denominator)
    A = int(a0 * den)
    B = int(-c0 * den)
    C = int(-w.q0 * den)
    if A == 0:
        if C % B != 0:
            return None
        k2 = C // B
        return w.q1 - k2 * c1, [a1]
    if B == 0:
        if C % A != 0:
            return None
        k1 = C // A
        return w.q1 + k1 * a1, [c1]
    g = math.gcd(A, B)
    if C % g != 0:
        return None
    x0, y0 = _extended_gcd_solution(A, B, C)
    h = a1 * (B // g) + c1 * (A // g)
    return w.q1 + a1 * x0 - c1 * y0, [h]


def _extended_gcd_solution(A: int, B: int, C: int) -> tuple[int, int]:
    """One integer solution (x, y) of A*x + B*y = C (gcd(A,B) divides C)."""
    old_r, r = A, B
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    mult = C // old_r
    return old_s * mult, old_t * mult


def _interval_lattice_cond(
    n: int, lo: PiLinear, hi: PiLinear, base: PiLinear, step: PiLinear
) -> bool:
    # exists odd k, integer l: 2^n k pi + base + l step in [lo, hi]
    if step.q0 != 0:
        # 2^{n+1} pi Z + step Z is dense (irrational generator ratio), and a
        # dense coset meets every nondegenerate closed interval
        return True
    s1 = step.q1
    g = _rat_gcd([Fraction(2 ** (n + 1)), s1])
    # coefficients w = 2^n + g*j; need (w)*pi + base in [lo, hi]
    gp = PiLinear(0, g)
    off = PiLinear(0, 2**n) + base
    jmin = ceil_ratio(lo - off, gp)
    jmax = floor_ratio(hi - off, gp)
    return jmax >= jmin


def _interval_lattice_tail(lo: PiLinear, hi: PiLinear, base: PiLinear, step: PiLinear) -> PairTail:
    if step.q0 != 0:
        return PairTail("const", start=0, value=True)
    m = abs(step.q1)
    e = _v2(m.numerator)
    start = max(0, e - _v2(m.denominator) if m.denominator % 2 == 0 else e)
    value = _interval_lattice_cond(start, lo, hi, base, step)
    assert _interval_lattice_cond(start + 1, lo, hi, base, step) == value
    assert _interval_lattice_cond(start + 6, lo, hi, base, step) == value
    return PairTail("const", start=start, value=value)


def _pair_condition(A: SectionPart, B: SectionPart, n: int) -> bool:
    """Does {u - v : u in A, v in B} contain an odd multiple of 2^n*pi?"""
    if isinstance(A, SectionLine) or isinstance(B, SectionLine):
        return True
    if isinstance(A, SectionPoints) and isinstance(B, SectionPoints):
        for u in A.values:
            for v in B.values:
                d = u - v
                if d.q0 == 0 and _odd_cond(n, d.q1, []):
                    return True
        return False
    if isinstance(A, SectionPoints) and isinstance(B, SectionInterval):
        return any(_odd_multiple_in_interval(n, u - B.hi, u - B.lo) for u in A.values)
    if isinstance(A, SectionInterval) and isinstance(B, SectionPoints):
        return any(_odd_multiple_in_interval(n, A.lo - v, A.hi - v) for v in B.values)
    if isinstance(A, SectionInterval) and isinstance(B, SectionInterval):
        return _odd_multiple_in_interval(n, A.lo - B.hi, A.hi - B.lo)
    if isinstance(A, SectionPoints) and isinstance(B, SectionLattice):
        return any(_point_lattice_cond(n, u - B.base, B.step) for u in A.values)
    if isinstance(A, SectionLattice) and isinstance(B, SectionPoints):
        return any(_point_lattice_cond(n, A.base - v, A.step) for v in B.values)
    if isinstance(A, SectionLattice) and isinstance(B, SectionLattice):
        params = _lattice_lattice_params(A.base - B.base, A.step, B.step)
        if params is None:
            return False
        c, mods = params
        return _odd_cond(n, c, mods)
    if isinstance(A, SectionInterval) and isinstance(B, SectionLattice):
        return _interval_lattice_cond(n, A.lo, A.hi, B.base, B.step)
    if isinstance(A, SectionLattice) and isinstance(B, SectionInterval):
        # u - v = base + l*step - v; substituting k -> -k mirrors the set
        return _interval_lattice_cond(n, B.lo, B.hi, A.base, A.step)
    raise TypeError(f"pair {type(A).__name__}/{type(B).__name__}")


def _pair_tail(A: SectionPart, B: SectionPart) -> PairTail:
    if isinstance(A, SectionLine) or isinstance(B, SectionLine):
        return PairTail("const", start=0, value=True)
    if isinstance(A, SectionPoints) and isinstance(B, SectionPoints):
        levels = set()
        for u in A.values:
            for v in B.values:
                d = u - v
                if d.q0 == 0 and d.q1 != 0 and d.q1.denominator == 1:
                    levels.add(_v2(d.q1.numerator))
        return PairTail("finite", levels=frozenset(levels))
    if isinstance(A, SectionPoints) and isinstance(B, SectionInterval):
        eps = [u - B.hi for u in A.values] + [u - B.lo for u in A.values]
        return _interval_false_tail(eps)
    if isinstance(A, SectionInterval) and isinstance(B, SectionPoints):
        eps = [A.lo - v for v in B.values] + [A.hi - v for v in B.values]
        return _interval_false_tail(eps)
    if isinstance(A, SectionInterval) and isinstance(B, SectionInterval):
        return _interval_false_tail([A.lo - B.hi, A.hi - B.lo])
    if isinstance(A, SectionPoints) and isinstance(B, SectionLattice):
        return _merge_pair_tails(
            [_point_lattice_tail(u - B.base, B.step) for u in A.values]
        )
    if isinstance(A, SectionLattice) and isinstance(B, SectionPoints):
        return _merge_pair_tails(
            [_point_lattice_tail(A.base - v, A.step) for v in B.values]
        )
    if isinstance(A, SectionLattice) and isinstance(B, SectionLattice):
        params = _lattice_lattice_params(A.base - B.base, A.step, B.step)
        if params is None:
            return PairTail("finite", levels=frozenset())
        return _odd_cond_tail(*params)
    if isinstance(A, SectionInterval) and isinstance(B, SectionLattice):
        return _interval_lattice_tail(A.lo, A.hi, B.base, B.step)
    if isinstance(A, SectionLattice) and isinstance(B, SectionInterval):
        return _interval_lattice_tail(B.lo, B.hi, A.base, A.step)
    raise TypeError(f"pair {type(A).__name__}/{type(B).__name__}")


def _merge_pair_tails(tails: list[PairTail]) -> PairTail:
    """OR-combination of tails of the same pair family.

    A 'const' result makes no claim below its start level; callers must
    evaluate that gap directly.  Only an all-'finite' combination keeps
    the complete closed form.
    """
    if all(t.kind == "finite" for t in tails):
        levels: set[int] = set()
        for t in tails:
            levels |= t.levels
        return PairTail("finite", levels=frozenset(levels))
    true_from: Optional[int] = None
    false_from = 0
    for t in tails:
        if t.kind == "finite":
            false_from = max(false_from, max(t.levels) + 1 if t.levels else 0)
        elif t.value:
            true_from = t.start if true_from is None else min(true_from, t.start)
        else:
            false_from = max(false_from, t.start)
    if true_from is not None:
        return PairTail("const", start=true_from, value=True)
    return PairTail("const", start=false_from, value=False)


def section_antipode_condition(Z: SpectrumSet, t: Fraction, n: int) -> bool:
    """True iff S_t - S_t contains an odd multiple of 2^n * pi."""
    S = vertical_section(Z, Fraction(t))
    return _section_condition(S, n)


def _section_condition(S: SectionSet, n: int) -> bool:
    return any(_pair_condition(A, B, n) for A in S.parts for B in S.parts)


# ---------------------------------------------------------------------------
# per-section level sets (with tails) and the all-sections union


@dataclass(frozen=True)
class SectionLevels:
    """Levels n at which the antipode condition holds for one section."""

    t: Fraction
    n_max: int
    levels: frozenset[int]
    tail_exact: bool
    tail_extra: frozenset[int]  # exact hits beyond n_max (finitely many)
    tail_all_from: Optional[int]  # all n >= this are hits
    unbounded_schedule: Optional[str] = None  # sparse infinite tail, described

    @property
    def infinite(self) -> bool:
        return self.tail_all_from is not None or self.unbounded_schedule is not None


def section_antipode_levels(Z: SpectrumSet, t: Fraction, n_max: int) -> SectionLevels:
    """All levels n <= n_max satisfying the condition, plus the exact tail."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    t = Fraction(t)
    S = vertical_section(Z, t)
    levels = frozenset(n for n in range(0, n_max + 1) if _section_condition(S, n))

    true_from: Optional[int] = None
    extra: set[int] = set()
    exact = True
    for A in S.parts:
        for B in S.parts:
            pt = _pair_tail(A, B)
            if pt.kind == "finite":
                extra |= {lvl for lvl in pt.levels if lvl > n_max}
                continue
            # a const tail is silent below its start: evaluate that gap
            for n in range(n_max + 1, pt.start):
                if _pair_condition(A, B, n):
                    extra.add(n)
            if pt.value:
                true_from = pt.start if true_from is None else min(true_from, pt.start)
    if true_from is not None:
        true_from = max(true_from, 0)
        extra = {x for x in extra if x < true_from}

    schedule = _primefamily_schedule_text(Z) if t == 0 else None
    return SectionLevels(
        t=t,
        n_max=n_max,
        levels=levels,
        tail_exact=exact,
        tail_extra=frozenset(extra),
        tail_all_from=true_from,
        unbounded_schedule=schedule,
    )


def _primefamily_schedule_text(Z: SpectrumSet) -> Optional[str]:
    for p in Z.primitives:
        if isinstance(p, PrimeFamily):
            # a_j - b_j = -2^(n_j) * pi for every prime j, so the condition
            # holds at n = n_j for all j, not only the materialized ones
            return f"n_j = {p.n_seq} for every prime j >= 3 (family is infinite)"
    return None


@dataclass(frozen=True)
class SectionFamilyReport:
    """Union of the per-section level sets over all distinct sections."""

    holds: Optional[bool]  # True: union finite; False: infinite; None: undecided
    union_levels: frozenset[int]
    union_all_from: Optional[int]
    witness_t: Optional[Fraction]
    sections: tuple[SectionLevels, ...]
    representatives: tuple[Fraction, ...]


def section_representatives(Z: SpectrumSet) -> tuple[Fraction, ...]:
    """Finitely many t values meeting every distinct section of Z."""
    crits: set[Fraction] = set()
    rects: list[Rect] = []
    for p in Z.primitives:
        if isinstance(p, Rect):
            crits.add(p.re_lo)
            crits.add(p.re_hi)
            rects.append(p)
        elif isinstance(p, PrimeFamily):
            crits.add(Fraction(0))
        else:
            crits.add(p.re)
    reps = sorted(crits)
    ordered = sorted(crits)
    for c1, c2 in zip(ordered, ordered[1:]):
        if any(r.re_lo <= c1 and c2 <= r.re_hi for r in rects):
            reps.append(Fraction(c1 + c2, 2))
    return tuple(sorted(set(reps)))


def antipode_level_union(Z: SpectrumSet, n_max: int) -> SectionFamilyReport:
    """Union of section level sets; finite union is the finiteness hypothesis."""
    reps = section_representatives(Z)
    sections = tuple(section_antipode_levels(Z, t, n_max) for t in reps)
    union: set[int] = set()
    all_from: Optional[int] = None
    witness: Optional[Fraction] = None
    holds: Optional[bool] = True
    for s in sections:
        union |= s.levels | s.tail_extra
        if s.infinite:
            holds = False
            if witness is None:
                witness = s.t
            if s.tail_all_from is not None:
                all_from = (
                    s.tail_all_from
                    if all_from is None
                    else min(all_from, s.tail_all_from)
                )
        if not s.tail_exact and holds is True:
            holds = None
    return SectionFamilyReport(
        holds=holds,
        union_levels=frozenset(union),
        union_all_from=all_from,
        witness_t=witness,
        sections=sections,
        representatives=reps,
    )


# ---------------------------------------------------------------------------
# closedness of the exponential images


@dataclass(frozen=True)
class ClosednessWitness:
    """A limit point of the exponential image that the image misses."""

    description: str
    log_mod: Fraction
    angle: PiLinear


@dataclass(frozen=True)
class ClosednessReport:
    closed: bool
    witnesses: tuple[ClosednessWitness, ...]


def _dense_orbit_witness(p: ILattice, n: int) -> ClosednessWitness:
    # the orbit is dense in the circle but countable; probe rational angles
    # until one misses (any odd prime denominator coprime to the step and
    # base denominators fails the orbit equation, so this stops early)
    half = Fraction(1, 2**n)
    for den in range(1, 300):
        theta = Fraction(1, den)
        k = (theta / half - p.base.q0) / p.step.q0
        if k.denominator != 1:
            return ClosednessWitness(
                f"lattice at re={p.re}: dense angle orbit misses angle {theta}",
                p.re * half,
                PiLinear(theta, 0),
            )
        m = (p.base.q1 + k * p.step.q1) * half
        if (m / 2).denominator != 1:
            return ClosednessWitness(
                f"lattice at re={p.re}: dense angle orbit misses angle {theta}",
                p.re * half,
                PiLinear(theta, 0),
            )
    raise AssertionError("candidate angles exhausted (impossible: one hit per angle)")


def image_closedness(Z: SpectrumSet, n: int) -> ClosednessReport:
    """Is exp(Z / 2^n) closed?

    Bounded primitives and vertical lines give closed images.  A vertical
    lattice gives a closed (finite) circle orbit exactly when its step is
    a rational multiple of pi; otherwise the orbit is dense and the image
    is not closed.  The prime family is treated as the infinite object:
    its image angles accumulate at 0 while no member has angle 0 (their
    pi-coefficients 1/j + ... are never even integers), so the point at
    angle 0 is a limit point outside the image at every level.
    """
    witnesses: list[ClosednessWitness] = []
    for p in Z.primitives:
        if isinstance(p, ILattice) and p.step.q0 != 0:
            witnesses.append(_dense_orbit_witness(p, n))
        elif isinstance(p, PrimeFamily):
            witnesses.append(
                ClosednessWitness(
                    "prime family: image angles accumulate at the missing point "
                    "with angle 0",
                    Fraction(0),
                    PiLinear(0, 0),
                )
            )
    return ClosednessReport(closed=not witnesses, witnesses=tuple(witnesses))
