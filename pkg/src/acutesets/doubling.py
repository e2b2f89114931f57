"""Doubling lift: an acute set in R^d becomes one of twice the size in R^(d+2)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .exact import QVector, common_denominator, dot, ratio, rational_circle_points
from .verifier import (
    NotAcuteError,
    VerificationReport,
    assert_upper_bound,
    require_acute,
    verify_acute,
)


class ConstructionError(RuntimeError):
    """The assembled output failed exact verification."""


@dataclass(frozen=True)
class LiftAssignment:
    r: Fraction
    phi: tuple  # phi[i] is the length-2 QVector attached to input point i


def choose_radius(s) -> Fraction:
    """Largest ``r = 2**-k`` (``k >= 1``) with ``4 r**2 < s``."""
    s = ratio(s)
    if s <= 0:
        raise ValueError("s must be positive")
    r = Fraction(1, 2)
    while 4 * r * r >= s:
        r /= 2
    return r


def lift_assignment(n: int, s: Optional[Fraction]) -> LiftAssignment:
    # a single point imposes no constraint on r
    r = choose_radius(s) if s is not None else Fraction(1, 2)
    return LiftAssignment(r=r, phi=tuple(rational_circle_points(r, n)))


def double_verified(
    X: Sequence[QVector],
    report: Optional[VerificationReport] = None,
    workers: Optional[int] = None,
) -> tuple[list, LiftAssignment, VerificationReport]:
    """Like :func:`double`, also returning the lift and the output's report."""
    rep = report if report is not None else verify_acute(X, workers=workers)
    if not rep.is_acute:
        raise NotAcuteError("doubling needs an acute input")
    lift = lift_assignment(len(X), rep.s_value)
    out = [x.concat(f) for x, f in zip(X, lift.phi)]
    out += [x.concat(-f) for x, f in zip(X, lift.phi)]
    try:
        out_rep = require_acute(out, workers=workers)
    except NotAcuteError as exc:
        raise ConstructionError(str(exc)) from exc
    assert_upper_bound(out)
    return out, lift, out_rep


def double(X: Sequence[QVector], report: Optional[VerificationReport] = None, workers: Optional[int] = None) -> list:
    """Return ``[(x, phi(x)) for x in X] + [(x, -phi(x)) for x in X]``.

    The input must be acute; the output is verified before it is returned.
    """
    return double_verified(X, report=report, workers=workers)[0]


def base_set(d: int) -> list[QVector]:
    if d == 1:
        return [QVector([0]), QVector([1])]
    if d == 2:
        return [QVector([0, 0]), QVector([2, 0]), QVector([1, 2])]
    raise ValueError("base sets exist for d = 1, 2 only")


def power_construct(d: int, workers: Optional[int] = None) -> list[QVector]:
    """Acute set in R^d of size ``2**((d+1)//2)`` (odd d) or ``3*2**((d-2)//2)`` (even d)."""
    if d < 1:
        raise ValueError("dimension must be positive")
    X = base_set(1 if d % 2 else 2)
    rep = verify_acute(X)
    while X[0].dim < d:
        X, _, rep = double_verified(X, report=rep, workers=workers)
    return X


def power_size(d: int) -> int:
    return 2 ** ((d + 1) // 2) if d % 2 else 3 * 2 ** ((d - 2) // 2)


def case_bounds(X: Sequence[QVector], Y: Sequence[QVector], lift: LiftAssignment, s: Fraction) -> int:
    """Check both scalar-product cases of the lift exactly.

    Distinct-base apex dots must be at least ``s - 4 r**2``; same-base
    apex dots must equal ``2 (r**2 +- <phi, phi'>)`` and be positive.
    ``Y`` is the output of :func:`double` on ``X``.  Returns the number of
    triples checked.
    """
    n = len(X)
    L, P = common_denominator(Y)
    L2 = L * L
    G = [[sum(a * b for a, b in zip(p, q)) for q in P] for p in P]
    r2 = lift.r * lift.r
    phis = [f for f in lift.phi] + [-f for f in lift.phi]
    floor_ = (s - 4 * r2) * L2
    count = 0
    for a in range(2 * n):
        Ga = G[a]
        ba = a % n
        for b in range(2 * n):
            if b == a:
                continue
            base_ab = Ga[a] - Ga[b]
            for c in range(b + 1, 2 * n):
                if c == a:
                    continue
                v = G[b][c] - Ga[c] + base_ab
                if b % n != ba and c % n != ba:
                    if v < floor_:
                        raise AssertionError("distinct-base dot %s below s - 4r^2" % Fraction(v, L2))
                else:
                    # one leg joins (x, phi) to (x, -phi); the other is arbitrary
                    other = c if b % n == ba else b
                    expect = 2 * (r2 - dot(phis[a], phis[other]))
                    if v != expect * L2 or expect <= 0:
                        raise AssertionError("same-base dot %s, expected %s" % (Fraction(v, L2), expect))
                count += 1
    return count
