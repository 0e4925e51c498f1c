"""Inverse-limit points as branch-bit threads over the squaring tower.

A thread is a base point at some level plus a sequence of square-root
branch bits (0 = principal root, 1 = negated root); evaluating it at
level n halves the log-modulus per step and applies
angle -> angle/2 + bit*pi, reduced to (-pi, pi].  Feasibility means every
evaluated point stays inside the level set.

The divergence search looks for threads that keep |1 - point| above a
threshold at every represented level; witnesses re-verify from scratch in
exact arithmetic.  A prefix alone never outruns its depth, so verdict
consumers pair it with a persistence certificate: a source primitive
(vertical line, or vertical lattice) whose level sets provably contain
the negated root of every member at all deeper levels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exactnum import PiLinear, reduce_mod_2pi
from .levels import (
    LevelCache,
    LevelPoint,
    LevelSet,
    component_sup_candidates,
    membership,
)
from .realbounds import abs1m_sq_bounds, compare_abs1m_sq, interval_sqrt
from .spectrum import ILattice, SpectrumSet, VLine

PI = PiLinear(0, 1)


class InfeasibleThread(ValueError):
    def __init__(self, level: int, point: LevelPoint):
        self.level = level
        self.point = point
        super().__init__(f"thread leaves the level set at level {level}")


@dataclass(frozen=True)
class Thread:
    base_level: int
    base: LevelPoint
    bits: tuple[int, ...] = ()
    tail_principal: bool = True

    def bit_at(self, level: int) -> int:
        """Branch bit consumed when stepping from level-1 to level."""
        idx = level - self.base_level - 1
        if idx < 0:
            raise ValueError("level at or below the base")
        if idx < len(self.bits):
            return self.bits[idx]
        if self.tail_principal:
            return 0
        raise ValueError(f"thread prefix ends before level {level}")


def step_point(p: LevelPoint, bit: int) -> LevelPoint:
    angle = p.angle.scaled(Fraction(1, 2))
    if bit:
        angle = angle + PI
    return LevelPoint(p.log_mod / 2, reduce_mod_2pi(angle))


def evaluate(cache: LevelCache, th: Thread, n: int) -> LevelPoint:
    """The thread's point at level n, with feasibility checked en route."""
    if n < th.base_level:
        raise ValueError("level below the thread base")
    p = th.base
    if not membership(cache.level(th.base_level), p):
        raise InfeasibleThread(th.base_level, p)
    for level in range(th.base_level + 1, n + 1):
        p = step_point(p, th.bit_at(level))
        if not membership(cache.level(level), p):
            raise InfeasibleThread(level, p)
    return p


def feasible_branches(
    cache: LevelCache, n: int, p: LevelPoint
) -> tuple[tuple[int, LevelPoint], ...]:
    """The branch bits whose square root of p stays inside level n+1."""
    if not membership(cache.level(n), p):
        raise ValueError(f"point not in the level-{n} set")
    out = []
    for bit in (0, 1):
        q = step_point(p, bit)
        if membership(cache.level(n + 1), q):
            out.append((bit, q))
    return tuple(out)


# ---------------------------------------------------------------------------
# divergence search


def _search_seeds(L: LevelSet) -> list[LevelPoint]:
    seeds: list[LevelPoint] = []
    for c in L.components:
        seeds.extend(component_sup_candidates(c))
    uniq = list(dict.fromkeys(seeds))
    uniq.sort(key=lambda p: (-_approx_abs1m_sq(p), float(p.angle), float(p.log_mod)))
    return uniq


def _approx_abs1m_sq(p: LevelPoint) -> float:
    m = math.exp(float(p.log_mod))
    return (1 - m) ** 2 + 2 * m * (1 - math.cos(float(p.angle)))


def divergence_search(
    cache: LevelCache,
    depth: int,
    delta: Fraction,
    node_budget: int = 20000,
    base_levels: Optional[tuple[int, ...]] = None,
) -> Optional[Thread]:
    """Search for a feasible thread with |1 - point|^2 >= delta^2 at every
    level from its base down to `depth`.

    Greedy on |angle| with backtracking under a node budget.  Several base
    levels are tried because early levels can pinch (a lattice tower
    starts at the single point 1; an off-axis line needs the modulus near
    1 before the band exceeds the threshold).  A returned witness is
    exact; None only means nothing was found at this effort.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if base_levels is None:
        base_levels = tuple(range(0, min(depth, max(9, depth * 2 // 3))))
    delta_sq = Fraction(delta) ** 2
    budget = node_budget
    for n0 in base_levels:
        if n0 >= depth:
            break
        for seed in _search_seeds(cache.level(n0)):
            if compare_abs1m_sq(seed.log_mod, seed.angle, delta_sq) < 0:
                continue
            stack: list[tuple[int, LevelPoint, tuple[int, ...]]] = [(n0, seed, ())]
            while stack and budget > 0:
                level, p, bits = stack.pop()
                budget -= 1
                if level == depth:
                    return Thread(n0, seed, bits)
                children = []
                for bit, q in feasible_branches(cache, level, p):
                    if compare_abs1m_sq(q.log_mod, q.angle, delta_sq) >= 0:
                        children.append((bit, q))
                # greedy: push the larger-|1-z| child last so it pops first
                children.sort(key=lambda bq: (_approx_abs1m_sq(bq[1]), -bq[0]))
                for bit, q in children:
                    stack.append((level + 1, q, bits + (bit,)))
            if budget <= 0:
                return None
    return None


def verify_witness(cache: LevelCache, th: Thread, depth: int, delta: Fraction) -> bool:
    """Independent re-check of a witness from scratch."""
    delta_sq = Fraction(delta) ** 2
    try:
        p = evaluate(cache, th, th.base_level)
    except InfeasibleThread:
        return False
    if compare_abs1m_sq(p.log_mod, p.angle, delta_sq) < 0:
        return False
    for level in range(th.base_level + 1, depth + 1):
        p = step_point(p, th.bit_at(level))
        if not membership(cache.level(level), p):
            return False
        if compare_abs1m_sq(p.log_mod, p.angle, delta_sq) < 0:
            return False
    return True


def persistence_certificate(Z: SpectrumSet, cache: LevelCache, th: Thread, depth: int) -> Optional[str]:
    """Symbolic reason the witness pattern continues past the search depth.

    A vertical line keeps every level set a full circle; a vertical
    lattice keeps level sets antipode-closed from some level on (so the
    negated root of any member stays inside).  In both cases a point with
    |angle| >= pi/2 always has a child with |angle| >= pi/2, hence the
    divergence band extends to every level.  The witness must live on the
    certifying primitive's own tower.
    """
    half_pi = PiLinear(0, Fraction(1, 2))
    p = evaluate(cache, th, depth)
    mag = -p.angle if p.angle.sign() < 0 else p.angle
    if (mag - half_pi).sign() < 0:
        return None
    for prim in Z.primitives:
        if not isinstance(prim, (VLine, ILattice)):
            continue
        sub = LevelCache(SpectrumSet((prim,)))
        try:
            evaluate(sub, th, depth)
        except (InfeasibleThread, ValueError):
            continue
        if isinstance(prim, VLine):
            return f"vertical line re={prim.re}: every level set is the full circle"
        # lattice: antipode-closure of the angle orbit holds from some level
        # on (the orbit step eventually divides 1), keeping both square
        # roots of every member feasible forever
        step = prim.step
        if step.q0 != 0:
            return (
                f"lattice at re={prim.re}: dense angle orbit, every level set "
                "closes to the full circle"
            )
        e = _v2_frac(step.q1)
        return (
            f"lattice at re={prim.re}: level sets are antipode-closed for all "
            f"levels >= {max(e, 0)}, so the negated branch stays feasible"
        )
    return None


def _v2_frac(x: Fraction) -> int:
    n = abs(x.numerator)
    return (n & -n).bit_length() - 1 if n else 0


# ---------------------------------------------------------------------------
# convergence rate


@dataclass(frozen=True)
class RateRow:
    level: int
    dist_lo: Fraction  # enclosure of |1 - point|
    dist_hi: Fraction
    angle: PiLinear
    log_mod: Fraction


@dataclass(frozen=True)
class RateReport:
    constant: Fraction  # certified: |1 - point| <= constant / 2^n on the table
    rows: tuple[RateRow, ...]


def convergence_rate(cache: LevelCache, th: Thread, n_max: int, digits: int = 30) -> RateReport:
    """Per-level |1 - point| table and the scaled constant max 2^n * value.

    Only meaningful for eventually-principal threads; a bare prefix with
    an unspecified tail is rejected.
    """
    if not th.tail_principal:
        raise ValueError("rate requires an eventually-principal thread")
    rows: list[RateRow] = []
    constant = Fraction(0)
    p = evaluate(cache, th, th.base_level)
    for n in range(th.base_level, n_max + 1):
        if n > th.base_level:
            p = step_point(p, th.bit_at(n))
            if not membership(cache.level(n), p):
                raise InfeasibleThread(n, p)
        sq = abs1m_sq_bounds(p.log_mod, p.angle, digits)
        lo, hi = interval_sqrt(sq, digits)
        rows.append(RateRow(n, lo, hi, p.angle, p.log_mod))
        constant = max(constant, hi * 2**n)
    return RateReport(constant, tuple(rows))
