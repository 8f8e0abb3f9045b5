"""Brute-force references for the fast paths.

Only the exact arithmetic of :mod:`st_forge.qk` is shared with the code under
test; enumeration, filtering and deduplication are written out again here.
"""

from __future__ import annotations

from fractions import Fraction
from math import ceil, gcd, isqrt
from typing import Sequence

from .qk import QkNum, ZkInt, as_qk, sorted_by_value, zk_mul

# Size caps, in one place.
MAX_POINTS = 1_100_000      # |P| for brute_richness / brute_projection
MAX_QUADRUPLES = 50_000     # candidate quadruples for brute_slope_set
MAX_ENERGY_PAIRS = 10_000   # |A| * |B| for brute_energy


class OracleTooLarge(ValueError):
    pass


def grid_points(k: int, s: int) -> list[tuple[ZkInt, ZkInt]]:
    """All of A x A with A = {x1 + x2*sqrt k : -s <= x1, x2 < s}, unsorted."""
    A = [ZkInt(x1, x2, k) for x1 in range(-s, s) for x2 in range(-s, s)]
    if len(A) ** 2 > MAX_POINTS:
        raise OracleTooLarge(f"|P| = {len(A) ** 2} exceeds {MAX_POINTS}")
    return [(x, y) for x in A for y in A]


def brute_richness(line, P: Sequence[tuple]) -> int:
    """Points (x, y) of P with slope*x + intercept == y, tested one by one."""
    if len(P) > MAX_POINTS:
        raise OracleTooLarge(f"|P| = {len(P)} exceeds {MAX_POINTS}")
    sigma, tau = line.slope, line.intercept
    count = 0
    last = v = None
    for x, y in P:
        if x is not last:
            last = x
            v = sigma * x + tau
        if v.d == 1 and v.a == y.a and v.b == y.b:
            count += 1
    return count


def _same_ratio(p: ZkInt, q: ZkInt, p2: ZkInt, q2: ZkInt) -> bool:
    # p/q == p2/q2  <=>  p*q2 == p2*q
    return zk_mul(p, q2) == zk_mul(p2, q)


def brute_slope_set(M: int, c: Fraction, k: int, gcd_cap: int = 5) -> list[tuple[ZkInt, ZkInt]]:
    """Distinct slopes as one (numerator, denominator) representative each.

    Dedup is pairwise by cross-multiplication, with no canonical form.
    """
    t = isqrt(M)
    lo = ceil(Fraction(c) * t)
    mags = list(range(lo, t + 1))
    vals = [m for m in mags] + [-m for m in mags]
    if len(vals) ** 4 > MAX_QUADRUPLES:
        raise OracleTooLarge(f"{len(vals) ** 4} quadruples exceeds {MAX_QUADRUPLES}")
    reps: list[tuple[ZkInt, ZkInt]] = []
    for p1 in vals:
        for p2 in vals:
            if gcd(abs(p1), abs(p2)) > gcd_cap:
                continue
            p = ZkInt(p1, p2, k)
            norm_p = abs(p1 * p1 - k * p2 * p2)
            for q1 in vals:
                for q2 in vals:
                    if gcd(norm_p, abs(q1 * q1 - k * q2 * q2)) > gcd_cap:
                        continue
                    q = ZkInt(q1, q2, k)
                    if not any(_same_ratio(p, q, rp, rq) for rp, rq in reps):
                        reps.append((p, q))
    return reps


def brute_energy(A: Sequence, B: Sequence) -> int:
    """Quadruples (a1, b1, a2, b2) with a1 + b1 == a2 + b2, four nested loops."""
    if len(A) * len(B) > MAX_ENERGY_PAIRS:
        raise OracleTooLarge(f"|A||B| = {len(A) * len(B)} exceeds {MAX_ENERGY_PAIRS}")
    A = [as_qk(a) for a in A]
    B = [as_qk(b) for b in B]
    sums = [a + b for a in A for b in B]
    count = 0
    for u in sums:
        for v in sums:
            if u == v:
                count += 1
    return count


def brute_projection(P: Sequence[tuple], slope: QkNum) -> int:
    """Distinct values of y - slope*x, counted on a sorted list."""
    if len(P) > MAX_POINTS:
        raise OracleTooLarge(f"|P| = {len(P)} exceeds {MAX_POINTS}")
    vals = sorted_by_value([as_qk(y) - slope * x for x, y in P])
    if not vals:
        return 0
    return 1 + sum(1 for u, v in zip(vals, vals[1:]) if u.cmp(v) != 0)
