"""Projection counts and additive energies computed from the construction."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Optional, Sequence

import numpy as np

from . import families
from .construction import GridParams, Slope, gen_A
from .qk import QkNum, as_qk


@dataclass(frozen=True)
class ProjectionReport:
    slope: QkNum
    n_classes: int
    # floor(sqrt(p) * n) with n = |A|, p = |S|
    expected: Optional[int] = None


def project_points(points: Iterable[tuple], slope: QkNum) -> int:
    """Number of distinct values y - slope*x over the given points."""
    seen = set()
    for x, y in points:
        seen.add(as_qk(y) - slope * x)
    return len(seen)


def project(params: GridParams, slope: QkNum, card_s: Optional[int] = None) -> ProjectionReport:
    """Projection of P = A x A along the given slope, keyed on canonical intercepts."""
    A = gen_A(params)
    Aq = [a.to_qk() for a in A]
    seen = set()
    for x in A:
        sx = slope * x
        for y in Aq:
            seen.add(y - sx)
    expected = None
    if card_s is not None:
        n = len(A)
        expected = isqrt(card_s * n * n)
    return ProjectionReport(slope, len(seen), expected)


def project_all(params: GridParams, slopes: Sequence[Slope]) -> list[ProjectionReport]:
    return [project(params, sl.value, len(slopes)) for sl in slopes]


def family_line_count(params: GridParams, slope: QkNum) -> int:
    """Distinct lines of this slope meeting P, from the incidence histogram."""
    hist = families.point_histogram(slope, params.s)
    if hist is None:
        ua, ub, d = families.scaled(slope)
        x1, x2 = families.box(params.s)
        w1, w2 = families.mul_u(ua, ub, slope.k, x1, x2)
        return int(families.box_sum_sparse(d, params.s, -w1, -w2)[0].size)
    return int(np.count_nonzero(hist.counts))


def lattice_projection_size(n: int, p: int, q: int) -> int:
    """|{q*y - p*x : 0 <= x, y < n}|."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if q == 0:
        raise ValueError("q must be nonzero")
    if gcd(p, q) != 1:
        raise ValueError(f"slope {p}/{q} is not reduced")
    r = np.arange(n, dtype=np.int64)
    vals = (q * r)[:, None] - (p * r)[None, :]
    return int(np.unique(vals).size)


def _qk_list(xs: Iterable) -> list[QkNum]:
    return [as_qk(x) for x in xs]


def additive_energy(A: Iterable, B: Iterable) -> int:
    """E+(A, B) = sum over y of r(y)^2, r(y) = #{(a, b): a + b = y}."""
    A = _qk_list(A)
    B = _qk_list(B)
    reps = Counter(a + b for a in A for b in B)
    return sum(r * r for r in reps.values())


@dataclass
class EnergyReport:
    per_slope: list[tuple[QkNum, int]]
    card_A: int
    card_X: int

    @property
    def total(self) -> int:
        return sum(e for _, e in self.per_slope)

    @property
    def reference_bracket(self) -> tuple[int, int]:
        """floor and ceil of |A|^3 * |X|^(1/2)."""
        sq = self.card_A ** 6 * self.card_X
        lo = isqrt(sq)
        return lo, lo if lo * lo == sq else lo + 1

    @property
    def reference(self) -> Fraction:
        return Fraction(self.reference_bracket[0])

    @property
    def ratio_bracket(self) -> tuple[Fraction, Fraction]:
        lo, hi = self.reference_bracket
        if lo == 0:
            return Fraction(0), Fraction(0)
        return Fraction(self.total, hi), Fraction(self.total, lo)


def energy_sum(params: GridParams, slopes: Sequence[Slope]) -> EnergyReport:
    """Sum over slopes x of E+(A, x*A), each computed on canonical Q(sqrt k) keys."""
    A = gen_A(params)
    per = []
    for sl in slopes:
        xA = [sl.value * a for a in A]
        per.append((sl.value, additive_energy(A, xA)))
    return EnergyReport(per, len(A), len(slopes))


def energy_via_incidence(params: GridParams, slope: QkNum) -> int:
    """E+(A, x*A) as the sum of squared richness over all lines u = -x*t + v meeting P.

    r(v) = #{(a, b): a + x*b = v} is the number of points (t, u) = (b, a) of
    A x A on the line of slope -x and intercept v.
    """
    hist = families.point_histogram(-slope, params.s)
    if hist is None:
        ua, ub, d = families.scaled(-slope)
        x1, x2 = families.box(params.s)
        w1, w2 = families.mul_u(ua, ub, slope.k, x1, x2)
        counts = families.box_sum_sparse(d, params.s, -w1, -w2)[2]
    else:
        counts = hist.counts
    c = counts.astype(np.int64)
    return int((c * c).sum())


def energy_bound_reference(card_A: int, card_B: int, card_X: int) -> tuple[int, int]:
    """floor and ceil of |A|^(3/2) |B|^(3/2) |X|^(1/2), the general energy bound's right side."""
    sq = card_A ** 3 * card_B ** 3 * card_X
    lo = isqrt(sq)
    return lo, lo if lo * lo == sq else lo + 1
