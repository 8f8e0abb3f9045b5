"""Exact arithmetic in Z[sqrt k] and Q(sqrt k).

Everything downstream (membership, dedup, ordering) is decided with Python
integers only. Python ints are unbounded, so there is no fixed-width overflow
to detect; the ``ArithmeticOverflow`` class exists so callers that impose
size limits have a single exception type to raise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from math import gcd, isqrt
from typing import Iterable, Optional

import numpy as np


class RingError(ValueError):
    """Invalid ring context or mixed-ring operation."""


class ArithmeticOverflow(ArithmeticError):
    pass


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


@dataclass(frozen=True)
class RingContext:
    k: int

    def __post_init__(self):
        if not isinstance(self.k, int) or isinstance(self.k, bool):
            raise RingError(f"k must be an integer, got {self.k!r}")
        if self.k < 2:
            raise RingError(f"k must be a positive non-square integer >= 2, got {self.k}")
        if is_square(self.k):
            raise RingError(f"k must be non-square, got {self.k} = {isqrt(self.k)}^2")

    def zk(self, a: int, b: int = 0) -> ZkInt:
        return ZkInt(a, b, self.k)

    def qk(self, a: int, b: int = 0, d: int = 1) -> QkNum:
        return QkNum.make(a, b, d, self.k)


def _sign_of(A: int, B: int, k: int) -> int:
    """Sign of the real number A + B*sqrt(k), using integers only."""
    if A >= 0 and B >= 0:
        return 0 if (A == 0 and B == 0) else 1
    if A <= 0 and B <= 0:
        return -1
    # mixed signs: compare A^2 with k*B^2
    diff = A * A - k * B * B
    if A > 0:
        return (diff > 0) - (diff < 0)
    return (diff < 0) - (diff > 0)


class ZkInt:
    """a + b*sqrt(k) with integer a, b."""

    __slots__ = ("a", "b", "k")

    def __init__(self, a: int, b: int, k: int):
        self.a = a
        self.b = b
        self.k = k

    def _check(self, other: ZkInt) -> None:
        if self.k != other.k:
            raise RingError(f"mixed rings: k={self.k} and k={other.k}")

    def __repr__(self) -> str:
        return f"ZkInt({self.a}, {self.b}, k={self.k})"

    def __str__(self) -> str:
        return f"{self.a}{self.b:+d}√{self.k}"

    def __eq__(self, other) -> bool:
        if isinstance(other, ZkInt):
            return self.a == other.a and self.b == other.b and self.k == other.k
        if isinstance(other, QkNum):
            return other == self
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.a, self.b, 1, self.k))

    def __add__(self, other: ZkInt) -> ZkInt:
        if not isinstance(other, ZkInt):
            return NotImplemented
        self._check(other)
        return ZkInt(self.a + other.a, self.b + other.b, self.k)

    def __sub__(self, other: ZkInt) -> ZkInt:
        if not isinstance(other, ZkInt):
            return NotImplemented
        self._check(other)
        return ZkInt(self.a - other.a, self.b - other.b, self.k)

    def __neg__(self) -> ZkInt:
        return ZkInt(-self.a, -self.b, self.k)

    def __mul__(self, other: ZkInt) -> ZkInt:
        if not isinstance(other, ZkInt):
            return NotImplemented
        self._check(other)
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        return ZkInt(a1 * a2 + self.k * b1 * b2, a1 * b2 + a2 * b1, self.k)

    def conj(self) -> ZkInt:
        return ZkInt(self.a, -self.b, self.k)

    def norm(self) -> int:
        return self.a * self.a - self.k * self.b * self.b

    def sign(self) -> int:
        return _sign_of(self.a, self.b, self.k)

    def __lt__(self, other: ZkInt) -> bool:
        return zk_cmp(self, other) < 0

    def __le__(self, other: ZkInt) -> bool:
        return zk_cmp(self, other) <= 0

    def __gt__(self, other: ZkInt) -> bool:
        return zk_cmp(self, other) > 0

    def __ge__(self, other: ZkInt) -> bool:
        return zk_cmp(self, other) >= 0

    def __float__(self) -> float:
        return self.a + self.b * float(np.sqrt(self.k))

    def to_qk(self) -> QkNum:
        return QkNum(self.a, self.b, 1, self.k)

    @property
    def key(self) -> tuple[int, int]:
        return (self.a, self.b)


def zk_add(x: ZkInt, y: ZkInt) -> ZkInt:
    return x + y


def zk_sub(x: ZkInt, y: ZkInt) -> ZkInt:
    return x - y


def zk_neg(x: ZkInt) -> ZkInt:
    return -x


def zk_mul(x: ZkInt, y: ZkInt) -> ZkInt:
    return x * y


def zk_norm(x: ZkInt) -> int:
    return x.norm()


def zk_cmp(x: ZkInt, y: ZkInt) -> int:
    """Return -1, 0 or 1 as the real value of x is below, equal to or above y."""
    x._check(y)
    return _sign_of(x.a - y.a, x.b - y.b, x.k)


class QkNum:
    """Canonical (a + b*sqrt(k)) / d with d > 0 and gcd(a, b, d) = 1.

    Construct through :meth:`make` (or :func:`qk_from_ratio`) unless the
    triple is already known to be canonical.
    """

    __slots__ = ("a", "b", "d", "k")

    def __init__(self, a: int, b: int, d: int, k: int):
        self.a = a
        self.b = b
        self.d = d
        self.k = k

    @classmethod
    def make(cls, a: int, b: int, d: int, k: int) -> QkNum:
        if d == 0:
            raise ZeroDivisionError("QkNum with zero denominator")
        if d < 0:
            a, b, d = -a, -b, -d
        g = gcd(a, b, d)
        if g != 1:
            a, b, d = a // g, b // g, d // g
        return cls(a, b, d, k)

    @property
    def u(self) -> ZkInt:
        return ZkInt(self.a, self.b, self.k)

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.d)

    def __repr__(self) -> str:
        return f"QkNum({self.a}, {self.b}, {self.d}, k={self.k})"

    def __str__(self) -> str:
        if self.d == 1:
            return f"{self.a}{self.b:+d}√{self.k}"
        return f"({self.a}{self.b:+d}√{self.k})/{self.d}"

    def __eq__(self, other) -> bool:
        if isinstance(other, QkNum):
            return (
                self.a == other.a and self.b == other.b
                and self.d == other.d and self.k == other.k
            )
        if isinstance(other, ZkInt):
            return self.d == 1 and self.a == other.a and self.b == other.b and self.k == other.k
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.d, self.k))

    def _coerce(self, other) -> QkNum:
        if isinstance(other, QkNum):
            if other.k != self.k:
                raise RingError(f"mixed rings: k={self.k} and k={other.k}")
            return other
        if isinstance(other, ZkInt):
            if other.k != self.k:
                raise RingError(f"mixed rings: k={self.k} and k={other.k}")
            return QkNum(other.a, other.b, 1, other.k)
        if isinstance(other, int):
            return QkNum(other, 0, 1, self.k)
        raise TypeError(f"cannot combine QkNum with {type(other).__name__}")

    def __add__(self, other) -> QkNum:
        o = self._coerce(other)
        d1, d2 = self.d, o.d
        if d1 == d2:
            return QkNum.make(self.a + o.a, self.b + o.b, d1, self.k)
        return QkNum.make(self.a * d2 + o.a * d1, self.b * d2 + o.b * d1, d1 * d2, self.k)

    __radd__ = __add__

    def __neg__(self) -> QkNum:
        return QkNum(-self.a, -self.b, self.d, self.k)

    def __sub__(self, other) -> QkNum:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> QkNum:
        return self._coerce(other) - self

    def __mul__(self, other) -> QkNum:
        o = self._coerce(other)
        k = self.k
        return QkNum.make(
            self.a * o.a + k * self.b * o.b,
            self.a * o.b + self.b * o.a,
            self.d * o.d,
            k,
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> QkNum:
        o = self._coerce(other)
        # (u/d) / (v/e) = (u*e) / (v*d)
        num = ZkInt(self.a * o.d, self.b * o.d, self.k)
        den = ZkInt(o.a * self.d, o.b * self.d, self.k)
        return qk_from_ratio(num, den)

    def sign(self) -> int:
        return _sign_of(self.a, self.b, self.k)

    def cmp(self, other) -> int:
        o = self._coerce(other)
        # denominators are positive, so compare cross-multiplied numerators
        return _sign_of(self.a * o.d - o.a * self.d, self.b * o.d - o.b * self.d, self.k)

    def __lt__(self, other) -> bool:
        return self.cmp(other) < 0

    def __le__(self, other) -> bool:
        return self.cmp(other) <= 0

    def __gt__(self, other) -> bool:
        return self.cmp(other) > 0

    def __ge__(self, other) -> bool:
        return self.cmp(other) >= 0

    def __float__(self) -> float:
        return (self.a + self.b * float(np.sqrt(self.k))) / self.d

    def canonical(self) -> QkNum:
        return QkNum.make(self.a, self.b, self.d, self.k)

    def is_canonical(self) -> bool:
        return self.d >= 1 and gcd(self.a, self.b, self.d) == 1

    def as_zk(self) -> Optional[ZkInt]:
        return ZkInt(self.a, self.b, self.k) if self.d == 1 else None


def qk_from_ratio(num: ZkInt, den: ZkInt) -> QkNum:
    """num / den, rationalised by the conjugate of den and reduced."""
    num._check(den)
    n = den.norm()
    if n == 0:
        # only (0, 0) has norm 0 when k is non-square
        raise ZeroDivisionError("zero denominator in Q(sqrt k)")
    top = num * den.conj()
    return QkNum.make(top.a, top.b, n, num.k)


def qk_add(x: QkNum, y: QkNum) -> QkNum:
    return x + y


def qk_mul(x: QkNum, y: QkNum) -> QkNum:
    return x * y


def qk_eq(x: QkNum, y: QkNum) -> bool:
    return x.key == y.key and x.k == y.k


def qk_as_zk(x: QkNum) -> Optional[ZkInt]:
    return x.as_zk()


def as_qk(x) -> QkNum:
    if isinstance(x, QkNum):
        return x
    if isinstance(x, ZkInt):
        return x.to_qk()
    raise TypeError(f"expected ZkInt or QkNum, got {type(x).__name__}")


def sorted_by_value(xs: Iterable, key_of=None) -> list:
    """Exact sort of ZkInt / QkNum values (or items mapped to them by key_of)."""
    f = key_of or (lambda x: x)
    return sorted(xs, key=cmp_to_key(lambda x, y: as_qk(f(x)).cmp(f(y))))


# Float sorting is exact when |A|, |B| are small enough: a nonzero A + B*sqrt(k)
# has |A + B*sqrt(k)| >= 1 / (X*(1 + sqrt(k))) for |A|, |B| <= X, which dwarfs
# the float64 rounding error as long as X*(1 + sqrt(k)) < 2**24.
_FLOAT_SORT_LIMIT = 2 ** 24


def argsort_real(A: np.ndarray, B: np.ndarray, k: int) -> np.ndarray:
    """Stable argsort of A + B*sqrt(k) for integer arrays, exact by a separation bound."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.size == 0:
        return np.zeros(0, dtype=np.int64)
    X = int(max(np.abs(A).max(), np.abs(B).max()))
    if X * (1 + isqrt(k) + 1) < _FLOAT_SORT_LIMIT:
        vals = A.astype(np.float64) + B.astype(np.float64) * np.sqrt(float(k))
        return np.argsort(vals, kind="stable")
    order = sorted(
        range(A.size),
        key=cmp_to_key(lambda i, j: _sign_of(int(A[i] - A[j]), int(B[i] - B[j]), k)),
    )
    return np.asarray(order, dtype=np.int64)


def fraction_str(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"
