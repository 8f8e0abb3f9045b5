"""The point set A x A, the slope set and the line set of the construction."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, gcd, isqrt
from typing import Iterator

import numpy as np

from . import families
from .qk import QkNum, RingContext, ZkInt, argsort_real, qk_from_ratio, sorted_by_value


class ConfigError(ValueError):
    """Parameters that cannot describe a valid construction."""


@dataclass(frozen=True)
class GridParams:
    """Scale N and side s = isqrt(N); coordinates run over {-s, ..., s-1}."""

    ctx: RingContext
    N: int
    s: int = field(init=False)

    def __post_init__(self):
        if self.N < 1:
            raise ConfigError(f"N must be positive, got {self.N}")
        object.__setattr__(self, "s", isqrt(self.N))

    @classmethod
    def from_side(cls, ctx: RingContext, s: int) -> GridParams:
        if s < 1:
            raise ConfigError(f"side must be positive, got {s}")
        return cls(ctx, s * s)

    @property
    def k(self) -> int:
        return self.ctx.k

    @property
    def anchor_side(self) -> int:
        # A_{N/4}: isqrt(N/4) == isqrt(N) // 2 for every N
        return self.s // 2

    @property
    def card_A(self) -> int:
        return 4 * self.s * self.s

    @property
    def card_P(self) -> int:
        return self.card_A ** 2


@dataclass(frozen=True)
class SlopeParams:
    M: int
    c: Fraction = Fraction(1, 2)
    gcd_cap: int = 5

    def __post_init__(self):
        object.__setattr__(self, "c", Fraction(self.c))
        if self.M < 1:
            raise ConfigError(f"M must be positive, got {self.M}")
        if not 0 < self.c < 1:
            raise ConfigError(f"c must lie strictly between 0 and 1, got {self.c}")
        if self.gcd_cap < 1:
            raise ConfigError(f"gcd cap must be positive, got {self.gcd_cap}")
        if self.lo > self.t:
            raise ConfigError(
                f"empty magnitude interval: ceil(c*t) = {self.lo} > t = {self.t} "
                f"(M={self.M}, c={self.c}); lower c or raise M"
            )

    @property
    def t(self) -> int:
        return isqrt(self.M)

    @property
    def lo(self) -> int:
        return ceil(self.c * self.t)

    def magnitudes(self) -> range:
        return range(self.lo, self.t + 1)

    def signed_values(self) -> list[int]:
        mags = list(self.magnitudes())
        return [-m for m in reversed(mags)] + mags

    def narrow_interval(self) -> bool:
        """True when (1-c)*t < 1, i.e. the interval holds at most one magnitude."""
        return (1 - self.c) * self.t < 1


@dataclass(frozen=True)
class Slope:
    value: QkNum
    witness: tuple[int, int, int, int]


@dataclass(frozen=True)
class Line:
    slope: QkNum
    intercept: QkNum

    @classmethod
    def through(cls, slope: QkNum, a: ZkInt, b: ZkInt) -> Line:
        """The line of the given slope through the point (a, b)."""
        return cls(slope, b.to_qk() - slope * a)

    def y_at(self, x) -> QkNum:
        return self.slope * x + self.intercept

    def __str__(self) -> str:
        return f"y = {self.slope}·x + {self.intercept}"


def gen_A(params: GridParams) -> list[ZkInt]:
    return _gen_box(params.ctx, params.s)


def _gen_box(ctx: RingContext, s: int) -> list[ZkInt]:
    x1, x2 = families.box(s)
    order = argsort_real(x1, x2, ctx.k)
    return [ZkInt(int(x1[i]), int(x2[i]), ctx.k) for i in order]


def gen_anchor_set(params: GridParams) -> list[ZkInt]:
    return _gen_box(params.ctx, params.anchor_side)


class PointSet:
    """P = A x A, iterated lazily; membership is a range check per coordinate."""

    def __init__(self, params: GridParams):
        self.params = params
        self.A = gen_A(params)

    def __len__(self) -> int:
        return len(self.A) ** 2

    def __iter__(self) -> Iterator[tuple[ZkInt, ZkInt]]:
        return itertools.product(self.A, self.A)

    def contains_key(self, x1: int, x2: int, y1: int, y2: int) -> bool:
        s = self.params.s
        return -s <= x1 < s and -s <= x2 < s and -s <= y1 < s and -s <= y2 < s

    def __contains__(self, point) -> bool:
        x, y = point
        if isinstance(x, QkNum):
            x = x.as_zk()
        if isinstance(y, QkNum):
            y = y.as_zk()
        if x is None or y is None:
            return False
        return self.contains_key(x.a, x.b, y.a, y.b)


def gen_points(params: GridParams) -> PointSet:
    return PointSet(params)


def passes_filters(quad: tuple[int, int, int, int], sp: SlopeParams, k: int) -> bool:
    p1, p2, q1, q2 = quad
    mags = sp.magnitudes()
    if not all(abs(v) in mags for v in quad):
        return False
    np_ = abs(p1 * p1 - k * p2 * p2)
    nq = abs(q1 * q1 - k * q2 * q2)
    return gcd(np_, nq) <= sp.gcd_cap and gcd(abs(p1), abs(p2)) <= sp.gcd_cap


def candidate_quadruples(sp: SlopeParams) -> Iterator[tuple[int, int, int, int]]:
    return itertools.product(sp.signed_values(), repeat=4)


def gen_slopes(sp: SlopeParams, ctx: RingContext) -> list[Slope]:
    """Filtered, deduplicated slopes sorted by value; first witness in enumeration order."""
    k = ctx.k
    seen: dict[tuple[int, int, int], Slope] = {}
    for quad in candidate_quadruples(sp):
        if not passes_filters(quad, sp, k):
            continue
        p1, p2, q1, q2 = quad
        value = qk_from_ratio(ZkInt(p1, p2, k), ZkInt(q1, q2, k))
        if value.key not in seen:
            seen[value.key] = Slope(value, quad)
    return sorted_by_value(seen.values(), key_of=lambda sl: sl.value)


@dataclass
class LineFamily:
    """All distinct lines of L sharing one slope, keyed by d*intercept."""

    slope: Slope
    K1: np.ndarray
    K2: np.ndarray
    raw_pairs: int

    def __len__(self) -> int:
        return int(self.K1.size)

    def intercept(self, i: int) -> QkNum:
        return families.intercept_from_key(self.slope.value, self.K1[i], self.K2[i])

    def lines(self) -> Iterator[Line]:
        for i in range(len(self)):
            yield Line(self.slope.value, self.intercept(i))


@dataclass
class LineSet:
    params: GridParams
    families: list[LineFamily]

    def __len__(self) -> int:
        return sum(len(f) for f in self.families)

    @property
    def raw_pairs(self) -> int:
        return sum(f.raw_pairs for f in self.families)

    def __iter__(self) -> Iterator[Line]:
        for fam in self.families:
            yield from fam.lines()

    def lines(self) -> list[Line]:
        return list(self)


def line_family(params: GridParams, slope: Slope) -> LineFamily:
    K1, K2, raw = families.anchor_keys(slope.value, params.anchor_side)
    order = argsort_real(K1, K2, params.k)
    return LineFamily(slope, K1[order], K2[order], raw)


def gen_lines(params: GridParams, slopes: list[Slope]) -> LineSet:
    """Lines y = s(x - a) + b over anchors (a, b) in A_{N/4}^2 and slopes s.

    Lines are grouped by slope (in the given order) and sorted by intercept.
    """
    return LineSet(params, [line_family(params, sl) for sl in slopes])


def gen_lines_naive(params: GridParams, slopes: list[Slope]) -> tuple[list[Line], int]:
    """Reference enumeration of every (slope, anchor pair); returns (distinct lines, raw count)."""
    anchors = gen_anchor_set(params)
    seen: dict[Line, None] = {}
    raw = 0
    for sl in slopes:
        for a in anchors:
            sa = sl.value * a
            for b in anchors:
                raw += 1
                seen.setdefault(Line(sl.value, b.to_qk() - sa), None)
    return list(seen), raw

