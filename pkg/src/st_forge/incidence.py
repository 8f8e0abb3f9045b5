"""Incidence and richness counting over (P, L), and the Szemeredi-Trotter comparison."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence, Union

import numpy as np

from . import families
from .construction import GridParams, Line, LineSet, gen_A
from .qk import QkNum, ZkInt


class EmptyLineSet(ValueError):
    pass


Lines = Union[LineSet, Sequence[Line]]


def membership_index(A: Iterable[ZkInt]) -> frozenset[tuple[int, int]]:
    return frozenset((x.a, x.b) for x in A)


def line_richness(line: Line, A: Sequence[ZkInt], membership: Optional[frozenset] = None) -> int:
    """|{x in A : slope*x + intercept in A}|, one exact field evaluation per x."""
    if membership is None:
        membership = membership_index(A)
    sigma, tau = line.slope, line.intercept
    count = 0
    for x in A:
        y = sigma * x + tau
        if y.d == 1 and (y.a, y.b) in membership:
            count += 1
    return count


@dataclass
class RichnessReport:
    lines: Lines
    counts: np.ndarray
    target: Optional[Fraction] = None

    @property
    def n_lines(self) -> int:
        return int(self.counts.size)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def r_min(self) -> int:
        return int(self.counts.min()) if self.counts.size else 0

    @property
    def r_max(self) -> int:
        return int(self.counts.max()) if self.counts.size else 0

    @property
    def mean(self) -> Fraction:
        if not self.counts.size:
            return Fraction(0)
        return Fraction(self.total, self.n_lines)

    @property
    def per_line(self) -> Iterator[tuple[Line, int]]:
        return zip(iter(self.lines), (int(c) for c in self.counts))

    def summary(self) -> dict:
        return {
            "n_lines": self.n_lines,
            "total_incidences": self.total,
            "r_min": self.r_min,
            "r_max": self.r_max,
            "mean": self.mean,
            "target": self.target,
        }


def _family_counts(s: int, slope: QkNum, K1: np.ndarray, K2: np.ndarray) -> np.ndarray:
    return families.family_richness(slope, s, K1, K2)


def _counts_for_lineset(L: LineSet, s: int, threads: int) -> np.ndarray:
    jobs = [(s, f.slope.value, f.K1, f.K2) for f in L.families]
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda j: _family_counts(*j), jobs))
    else:
        parts = [_family_counts(*j) for j in jobs]
    if not parts:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate(parts).astype(np.int64)


def _counts_for_lines(lines: Sequence[Line], s: int) -> np.ndarray:
    """Group arbitrary lines by slope and count each group with the family engine."""
    out = np.zeros(len(lines), dtype=np.int64)
    groups: dict[QkNum, list[tuple[int, int, int]]] = {}
    for i, line in enumerate(lines):
        key = families.intercept_key(line.slope, line.intercept)
        if key is None:
            continue  # no grid point can lie on it
        groups.setdefault(line.slope, []).append((i, *key))
    for slope, rows in groups.items():
        arr = np.asarray(rows, dtype=np.int64)
        out[arr[:, 0]] = families.family_richness(slope, s, arr[:, 1], arr[:, 2])
    return out


def richness_report(
    params: GridParams, L: Lines, M: Optional[int] = None, threads: int = 1
) -> RichnessReport:
    """Per-line richness over P = A x A, in the iteration order of L."""
    if isinstance(L, LineSet):
        counts = _counts_for_lineset(L, params.s, threads)
    else:
        L = list(L)
        counts = _counts_for_lines(L, params.s)
    target = Fraction(params.N, M) if M else None
    return RichnessReport(L, counts, target)


def total_incidences(params: GridParams, L: Lines) -> int:
    return richness_report(params, L).total


def st_bound(n: int, r: int) -> Fraction:
    """n^2 / r^3 + n / r, exactly."""
    if r < 1:
        raise ValueError(f"richness must be >= 1, got {r}")
    if n < 1:
        raise ValueError(f"point count must be >= 1, got {n}")
    return Fraction(n * n, r ** 3) + Fraction(n, r)


@dataclass(frozen=True)
class SharpnessReport:
    n_points: int
    r: int
    n_rich_lines: int
    st_bound_value: Fraction
    ratio: Fraction
    nominal_r: Optional[Fraction] = None

    def as_dict(self) -> dict:
        return {
            "n_points": self.n_points,
            "r": self.r,
            "n_rich_lines": self.n_rich_lines,
            "st_bound": self.st_bound_value,
            "ratio": self.ratio,
            "nominal_r": self.nominal_r,
        }


def sharpness_from_counts(n_points: int, n_lines: int, r_min: int,
                          nominal_r: Optional[Fraction] = None) -> SharpnessReport:
    if n_lines == 0:
        raise EmptyLineSet("sharpness needs at least one line")
    bound = st_bound(n_points, r_min)
    return SharpnessReport(n_points, r_min, n_lines, bound, Fraction(n_lines) / bound, nominal_r)


def sharpness_report(
    params: GridParams,
    L: Lines,
    M: Optional[int] = None,
    report: Optional[RichnessReport] = None,
) -> SharpnessReport:
    """Compare |L| with the ST bound at r = observed minimum richness."""
    if report is None:
        if len(L) == 0:
            raise EmptyLineSet("sharpness needs at least one line")
        report = richness_report(params, L, M)
    return sharpness_from_counts(params.card_P, report.n_lines, report.r_min, report.target)


def lines_through_points(params: GridParams, lines: Sequence[Line]) -> dict[tuple[int, int, int, int], int]:
    """Point-major incidence count: for every point of P, the number of given lines through it."""
    A = gen_A(params)
    slopes: dict[QkNum, set] = {}
    for line in lines:
        slopes.setdefault(line.slope, set()).add(line.intercept)
    out: dict[tuple[int, int, int, int], int] = {}
    for x in A:
        for y in A:
            yq = y.to_qk()
            n = 0
            for slope, intercepts in slopes.items():
                if yq - slope * x in intercepts:
                    n += 1
            if n:
                out[(x.a, x.b, y.a, y.b)] = n
    return out
