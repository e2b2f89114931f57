"""Fast rational and integer types: gmpy2 when installed, else the stdlib."""

from __future__ import annotations

import math
from fractions import Fraction

try:
    import gmpy2

    Q = gmpy2.mpq
    Z = gmpy2.mpz
    isqrt = gmpy2.isqrt
    HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - exercised only without gmpy2
    Q = Fraction
    Z = int
    isqrt = math.isqrt
    HAVE_GMPY2 = False


def to_q(x):
    if isinstance(x, Fraction):
        return Q(x.numerator, x.denominator)
    return Q(x)


def to_fraction(x) -> Fraction:
    return _coprime(int(x.numerator), int(x.denominator))


if hasattr(Fraction, "_from_coprime_ints"):
    _coprime = Fraction._from_coprime_ints
else:

    def _coprime(num: int, den: int) -> Fraction:
        return Fraction(num, den, _normalize=False)


def ratio_of(num: int, den: int) -> Fraction:
    """``num/den`` as a Fraction, reduced with the fast gcd (``den > 0``)."""
    q = Q(num, den)
    return _coprime(int(q.numerator), int(q.denominator))


def lg(q) -> int:
    """``floor(log2 |q|)`` for nonzero rational ``q``."""
    a, b = abs(int(q.numerator)), int(q.denominator)
    e = a.bit_length() - b.bit_length()
    if e >= 0:
        if a < b << e:
            e -= 1
    elif a << -e < b:
        e -= 1
    return e


def pow2(k: int):
    return Q(1 << k) if k >= 0 else Q(1, 1 << -k)


def pow2_le(q):
    return pow2(lg(q))


def sqrt_lower(q, bits: int):
    num, den = Z(q.numerator), Z(q.denominator)
    return Q(isqrt((num << (2 * bits)) // den), Z(1) << bits)


def dyadic(q, bits: int):
    """Nearest multiple of ``2**-bits`` (halves round up)."""
    num, den = Z(q.numerator), Z(q.denominator)
    return Q(((num << (bits + 1)) + den) // (2 * den), Z(1) << bits)
