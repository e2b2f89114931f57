"""Exact rational vectors and hyperplanes.

Every acuteness decision in the package is a sign test on a rational
number, so all geometry here runs over :class:`fractions.Fraction`.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence, Union

Ratio = Fraction
Scalar = Union[int, Fraction, str]


class DimensionError(ValueError):
    """Raised when vectors of different lengths are combined."""


class DegenerateInputError(ValueError):
    """Raised for coincident points or a zero hyperplane normal."""


def ratio(value: Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact scalars")
    return Fraction(value)


class QVector:
    """Immutable fixed-length vector of Fractions."""

    __slots__ = ("_c",)

    def __init__(self, coords: Iterable[Scalar]):
        self._c = tuple(ratio(x) for x in coords)

    @classmethod
    def _wrap(cls, coords: tuple) -> "QVector":
        v = cls.__new__(cls)
        v._c = coords
        return v

    @classmethod
    def zeros(cls, d: int) -> "QVector":
        return cls._wrap((Fraction(0),) * d)

    @classmethod
    def unit(cls, d: int, i: int) -> "QVector":
        c = [Fraction(0)] * d
        c[i] = Fraction(1)
        return cls._wrap(tuple(c))

    @property
    def coords(self) -> tuple:
        return self._c

    @property
    def dim(self) -> int:
        return len(self._c)

    def __len__(self) -> int:
        return len(self._c)

    def __iter__(self):
        return iter(self._c)

    def __getitem__(self, i):
        return self._c[i]

    def __eq__(self, other) -> bool:
        if isinstance(other, QVector):
            return self._c == other._c
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._c)

    def __repr__(self) -> str:
        return "QVector(%s)" % ", ".join(str(x) for x in self._c)

    def _check(self, other: "QVector") -> None:
        if len(self._c) != len(other._c):
            raise DimensionError("dimension mismatch: %d vs %d" % (len(self._c), len(other._c)))

    def __add__(self, other: "QVector") -> "QVector":
        self._check(other)
        return QVector._wrap(tuple(a + b for a, b in zip(self._c, other._c)))

    def __sub__(self, other: "QVector") -> "QVector":
        self._check(other)
        return QVector._wrap(tuple(a - b for a, b in zip(self._c, other._c)))

    def __neg__(self) -> "QVector":
        return QVector._wrap(tuple(-a for a in self._c))

    def __mul__(self, c: Scalar) -> "QVector":
        c = ratio(c)
        return QVector._wrap(tuple(a * c for a in self._c))

    __rmul__ = __mul__

    def concat(self, tail: Iterable[Scalar]) -> "QVector":
        """Append coordinates, e.g. to embed R^d into R^(d+k)."""
        return QVector._wrap(self._c + tuple(ratio(x) for x in tail))


def dot(a: QVector, b: QVector) -> Fraction:
    a._check(b)
    return sum((x * y for x, y in zip(a._c, b._c)), Fraction(0))


def add(a: QVector, b: QVector) -> QVector:
    return a + b


def sub(a: QVector, b: QVector) -> QVector:
    return a - b


def scale(a: QVector, c: Scalar) -> QVector:
    return a * c


def norm_sq(a: QVector) -> Fraction:
    return dot(a, a)


class Hyperplane:
    """The set ``{x : <x, normal> = offset}``."""

    __slots__ = ("normal", "offset")

    def __init__(self, normal: QVector, offset: Scalar):
        if not isinstance(normal, QVector):
            normal = QVector(normal)
        if not any(normal):
            raise DegenerateInputError("hyperplane normal must be nonzero")
        self.normal = normal
        self.offset = ratio(offset)

    @property
    def dim(self) -> int:
        return self.normal.dim

    def value(self, p: QVector) -> Fraction:
        """Signed residual ``<p, normal> - offset``."""
        return dot(p, self.normal) - self.offset

    def contains(self, p: QVector) -> bool:
        return self.value(p) == 0

    def flipped(self) -> "Hyperplane":
        return Hyperplane(-self.normal, -self.offset)

    def __eq__(self, other) -> bool:
        if isinstance(other, Hyperplane):
            return self.normal == other.normal and self.offset == other.offset
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.normal, self.offset))

    def __repr__(self) -> str:
        return "Hyperplane(normal=%r, offset=%s)" % (self.normal, self.offset)


def project_onto(p: QVector, h: Hyperplane) -> QVector:
    """Orthogonal projection of ``p`` onto ``h``; exact."""
    n = h.normal
    k = h.value(p) / dot(n, n)
    if k == 0:
        return p
    return p - n * k


def side_of(p: QVector, h: Hyperplane) -> int:
    v = h.value(p)
    return (v > 0) - (v < 0)


def rational_circle_points(r: Scalar, n: int) -> list[QVector]:
    """``n`` distinct rational points on the circle of radius ``r``.

    Points come from ``t -> r((1-t^2)/(1+t^2), 2t/(1+t^2))`` at
    ``t_k = k/(n+1)``, so both coordinates are strictly positive and the
    ``2n`` points ``+-phi`` are pairwise distinct.
    """
    r = ratio(r)
    if r <= 0:
        raise ValueError("radius must be positive")
    if n < 1:
        raise ValueError("need at least one point")
    out = []
    for k in range(1, n + 1):
        t = Fraction(k, n + 1)
        den = 1 + t * t
        out.append(QVector._wrap((r * (1 - t * t) / den, r * 2 * t / den)))
    return out


def ceil_sqrt(q: Scalar) -> int:
    """Smallest integer ``k >= 0`` with ``k*k >= q``."""
    q = ratio(q)
    if q < 0:
        raise ValueError("negative input")
    c = -((-q.numerator) // q.denominator)
    k = isqrt(c)
    return k if k * k >= c else k + 1


def log2_floor(q: Scalar) -> int:
    """``floor(log2 |q|)`` for nonzero rational ``q``."""
    q = abs(ratio(q))
    if q == 0:
        raise ValueError("log of zero")
    e = q.numerator.bit_length() - q.denominator.bit_length()
    # 2^e <= q < 2^(e+1) may be off by one either way
    if e >= 0:
        if q.numerator < q.denominator << e:
            e -= 1
    elif q.numerator << -e < q.denominator:
        e -= 1
    return e


def pow2_at_most(q: Scalar) -> Fraction:
    """Largest power of two not exceeding the positive rational ``q``."""
    q = ratio(q)
    if q <= 0:
        raise ValueError("need a positive value")
    return Fraction(2) ** log2_floor(q)


def dyadic_round(q: Scalar, bits: int) -> Fraction:
    """Nearest multiple of ``2**-bits`` (ties to even)."""
    q = ratio(q)
    if bits >= 0:
        return Fraction(round(q * (1 << bits)), 1 << bits)
    return Fraction(round(q / (1 << -bits)) << -bits)


def sqrt_lower(q: Scalar, bits: int) -> Fraction:
    """Dyadic approximation ``s <= sqrt(q)`` within ``2**-bits``."""
    q = ratio(q)
    if q < 0:
        raise ValueError("negative input")
    return Fraction(isqrt((q.numerator << (2 * bits)) // q.denominator), 1 << bits)


def snap_vector(p: QVector, bits: int) -> QVector:
    """Round every coordinate to the dyadic grid ``2**-bits``."""
    return QVector._wrap(tuple(dyadic_round(x, bits) for x in p))


def common_denominator(points: Sequence[QVector]) -> tuple[int, list[list[int]]]:
    """Scale points to integer coordinates: returns ``(L, L * points)``."""
    from math import lcm

    L = 1
    for p in points:
        for x in p:
            if L % x.denominator:
                L = lcm(L, x.denominator)
    rows = [[x.numerator * (L // x.denominator) for x in p] for p in points]
    return L, rows
