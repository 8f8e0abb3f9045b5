"""Vectorised counting for one family of parallel lines over a GAP grid.

A slope sigma = (ua + ub*sqrt(k)) / d is fixed.  The line y = sigma*x + tau
is identified by its scaled intercept K = d*tau, an integer pair whenever the
line can carry a grid point.  A point (x, y) lies on it iff

    d*y - u*x = K            (componentwise in the basis 1, sqrt(k)),

so every question about the family becomes a histogram of the integer map
(x, y) -> d*y - u*x over a box.  Since y ranges over a box, that histogram is
a strided box-sum of shifted copies, computed with a 2-D difference array.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qk import QkNum

# Dense histograms above this many cells switch to the sparse routes.
DENSE_CELL_LIMIT = 20_000_000
# Rows x |A| per chunk in the per-line fallback.
CHUNK_ELEMENTS = 4_000_000


def box(s: int) -> tuple[np.ndarray, np.ndarray]:
    """Coordinates (x1, x2) of all of {-s, ..., s-1}^2, x1-major."""
    r = np.arange(-s, s, dtype=np.int64)
    x1, x2 = np.meshgrid(r, r, indexing="ij")
    return x1.ravel(), x2.ravel()


def mul_u(ua: int, ub: int, k: int, x1: np.ndarray, x2: np.ndarray):
    """Integer coordinates of (ua + ub*sqrt k) * (x1 + x2*sqrt k)."""
    return ua * x1 + k * ub * x2, ub * x1 + ua * x2


@dataclass(frozen=True)
class Histogram:
    """Dense counts on the integer window [o1, o1+n1) x [o2, o2+n2)."""

    o1: int
    o2: int
    counts: np.ndarray

    def lookup(self, K1: np.ndarray, K2: np.ndarray) -> np.ndarray:
        n1, n2 = self.counts.shape
        i = np.asarray(K1, dtype=np.int64) - self.o1
        j = np.asarray(K2, dtype=np.int64) - self.o2
        ok = (i >= 0) & (i < n1) & (j >= 0) & (j < n2)
        out = np.zeros(i.shape, dtype=np.int64)
        out[ok] = self.counts[i[ok], j[ok]]
        return out

    def nonzero_keys(self) -> tuple[np.ndarray, np.ndarray]:
        i, j = np.nonzero(self.counts)
        return i.astype(np.int64) + self.o1, j.astype(np.int64) + self.o2


def _dense_shape(d: int, s_y: int, v1: np.ndarray, v2: np.ndarray) -> tuple[int, int]:
    span = 2 * s_y * d
    n1 = int(v1.max() - v1.min()) + span
    n2 = int(v2.max() - v2.min()) + span
    n1 += -n1 % d
    n2 += -n2 % d
    return n1, n2


def dense_cells(d: int, s_y: int, v1: np.ndarray, v2: np.ndarray) -> int:
    n1, n2 = _dense_shape(d, s_y, v1, v2)
    return n1 * n2


def box_sum_dense(d: int, s_y: int, v1: np.ndarray, v2: np.ndarray) -> Histogram:
    """Counts of d*y + v for y in box(s_y) and v over the multiset (v1, v2)."""
    span = 2 * s_y * d
    lo1 = v1 - d * s_y
    lo2 = v2 - d * s_y
    o1, o2 = int(lo1.min()), int(lo2.min())
    n1, n2 = _dense_shape(d, s_y, v1, v2)
    i1, i2 = lo1 - o1, lo2 - o2
    j1, j2 = i1 + span, i2 + span
    size = n1 * n2
    # exclusive corners may fall one stride past the window; they never feed
    # back into the window after the cumulative sums, so drop them
    def corner(a, b):
        ok = (a < n1) & (b < n2)
        return np.bincount(a[ok] * n2 + b[ok], minlength=size)

    D = corner(i1, i2)
    D += corner(j1, j2)
    D -= corner(j1, i2)
    D -= corner(i1, j2)
    D = D.reshape(n1 // d, d, n2)
    np.cumsum(D, axis=0, out=D)
    D = D.reshape(n1, n2 // d, d)
    np.cumsum(D, axis=1, out=D)
    H = D.reshape(n1, n2)
    return Histogram(o1, o2, H)


def box_sum_sparse(d: int, s_y: int, v1: np.ndarray, v2: np.ndarray):
    """Same multiset as box_sum_dense, as (K1, K2, counts) in lexicographic order."""
    y1, y2 = box(s_y)
    parts1, parts2 = [], []
    step = max(1, CHUNK_ELEMENTS // max(1, y1.size))
    for start in range(0, v1.size, step):
        a1 = (v1[start:start + step, None] + d * y1[None, :]).ravel()
        a2 = (v2[start:start + step, None] + d * y2[None, :]).ravel()
        parts1.append(a1)
        parts2.append(a2)
    K1 = np.concatenate(parts1)
    K2 = np.concatenate(parts2)
    keys, counts = np.unique(np.stack([K1, K2], axis=1), axis=0, return_counts=True)
    return keys[:, 0], keys[:, 1], counts


def scaled(slope: QkNum) -> tuple[int, int, int]:
    return slope.a, slope.b, slope.d


def anchor_keys(slope: QkNum, s_anchor: int) -> tuple[np.ndarray, np.ndarray, int]:
    """Distinct scaled intercepts d*b - u*a over anchors a, b in box(s_anchor).

    Returns (K1, K2, raw_pairs) with keys in lexicographic order.
    """
    ua, ub, d = scaled(slope)
    if s_anchor <= 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, 0
    a1, a2 = box(s_anchor)
    w1, w2 = mul_u(ua, ub, slope.k, a1, a2)
    raw = a1.size * a1.size
    v1, v2 = -w1, -w2
    if dense_cells(d, s_anchor, v1, v2) <= min(DENSE_CELL_LIMIT, 16 * raw):
        K1, K2 = box_sum_dense(d, s_anchor, v1, v2).nonzero_keys()
    else:
        K1, K2, _ = box_sum_sparse(d, s_anchor, v1, v2)
    return K1, K2, raw


def point_histogram(slope: QkNum, s: int) -> Histogram | None:
    """Histogram of d*y - u*x over box(s)^2, or None if it would be too large."""
    ua, ub, d = scaled(slope)
    x1, x2 = box(s)
    w1, w2 = mul_u(ua, ub, slope.k, x1, x2)
    if dense_cells(d, s, -w1, -w2) > DENSE_CELL_LIMIT:
        return None
    return box_sum_dense(d, s, -w1, -w2)


def richness_by_scan(slope: QkNum, s: int, K1: np.ndarray, K2: np.ndarray) -> np.ndarray:
    """Per-line counts by testing every x of the grid against each line (chunked)."""
    ua, ub, d = scaled(slope)
    x1, x2 = box(s)
    w1, w2 = mul_u(ua, ub, slope.k, x1, x2)
    out = np.zeros(K1.size, dtype=np.int64)
    step = max(1, CHUNK_ELEMENTS // max(1, x1.size))
    for start in range(0, K1.size, step):
        t1 = K1[start:start + step, None] + w1[None, :]
        t2 = K2[start:start + step, None] + w2[None, :]
        ok = (t1 % d == 0) & (t2 % d == 0)
        y1, y2 = t1 // d, t2 // d
        ok &= (y1 >= -s) & (y1 < s) & (y2 >= -s) & (y2 < s)
        out[start:start + step] = ok.sum(axis=1)
    return out


def family_richness(slope: QkNum, s: int, K1: np.ndarray, K2: np.ndarray) -> np.ndarray:
    """Number of points of box(s)^2 on each line d*tau = (K1, K2) of this slope."""
    K1 = np.asarray(K1, dtype=np.int64)
    K2 = np.asarray(K2, dtype=np.int64)
    if K1.size == 0:
        return np.zeros(0, dtype=np.int64)
    x_count = (2 * s) ** 2
    ua, ub, d = scaled(slope)
    x1, x2 = box(s)
    w1, w2 = mul_u(ua, ub, slope.k, x1, x2)
    cells = dense_cells(d, s, -w1, -w2)
    # dense pays once per family, scanning pays per line
    if cells <= DENSE_CELL_LIMIT and cells <= 4 * K1.size * x_count:
        return box_sum_dense(d, s, -w1, -w2).lookup(K1, K2)
    return richness_by_scan(slope, s, K1, K2)


def intercept_key(slope: QkNum, intercept: QkNum) -> tuple[int, int] | None:
    """d*tau as an integer pair, or None when no grid point can lie on the line."""
    d = slope.d
    t1, t2, e = intercept.a * d, intercept.b * d, intercept.d
    if t1 % e or t2 % e:
        return None
    return t1 // e, t2 // e


def intercept_from_key(slope: QkNum, K1: int, K2: int) -> QkNum:
    return QkNum.make(int(K1), int(K2), slope.d, slope.k)
