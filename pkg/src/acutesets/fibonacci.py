"""Inductive construction of acute sets of Fibonacci size.

A configuration carries a marked hyperplane holding ``F_d`` of its
``F_{d+1}`` points, with every other point strictly on one side.  Each
``extend`` step lifts it one dimension up: points on the hyperplane are
split into a pair above and below it, the rest are projected onto a
slightly tilted hyperplane, and all new coordinates are rounded to a
dyadic grid before exact re-verification.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional

from ._mp import Q, Z, dyadic, lg, pow2_le, sqrt_lower, to_fraction, to_q
from .exact import Hyperplane, QVector, ceil_sqrt
from .verifier import VerificationReport, assert_upper_bound, verify_acute

DEFAULT_RETRY_BUDGET = 64
# tilt size and lift height relative to the current margin; tuned so every
# step up to dimension 12 succeeds within a few attempts
TILT_FACTOR = 1
RADIUS_FACTOR = 32
TILT_CANDIDATES = 8


class RetryBudgetExhausted(RuntimeError):
    """No attempt within the retry budget produced an acute set."""


class InvariantError(AssertionError):
    """A configuration broke the hyperplane bookkeeping."""


@dataclass(frozen=True)
class ExtendParameters:
    r: Fraction
    M: Fraction
    alpha: QVector
    eps: Fraction
    retry_count: int


@dataclass(frozen=True)
class AcuteConfiguration:
    dim: int
    points: tuple
    marked: Hyperplane
    on_hyperplane: frozenset
    off_side: int
    report: Optional[VerificationReport] = field(default=None, compare=False)
    history: tuple = field(default=(), compare=False)

    @property
    def size(self) -> int:
        return len(self.points)

    def check_invariants(self) -> None:
        h = self.marked
        if h.dim != self.dim:
            raise InvariantError("hyperplane dimension mismatch")
        if self.off_side not in (-1, 1):
            raise InvariantError("off_side must be +-1")
        for i, p in enumerate(self.points):
            v = h.value(p)
            if i in self.on_hyperplane:
                if v != 0:
                    raise InvariantError("point %d is not on the marked hyperplane" % i)
            elif (v > 0) - (v < 0) != self.off_side:
                raise InvariantError("point %d is on the wrong side" % i)


def base_config() -> AcuteConfiguration:
    pts = (QVector([0]), QVector([1]))
    return AcuteConfiguration(
        dim=1,
        points=pts,
        marked=Hyperplane(QVector([1]), 0),
        on_hyperplane=frozenset({0}),
        off_side=1,
        report=verify_acute(list(pts)),
    )


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _margin_inputs(cfg: AcuteConfiguration, workers):
    rep = cfg.report if cfg.report is not None else verify_acute(list(cfg.points), workers=workers)
    m = rep.min_vertex_dot if rep.min_vertex_dot is not None else rep.s_value
    return m, max(1, ceil_sqrt(rep.max_dist_sq))


def _choose_tilt(pts, A, n, N, rng):
    """Direction orthogonal to ``n`` that separates the A-points well."""
    d = len(n)
    best = None
    for _ in range(TILT_CANDIDATES):
        while True:
            w0 = [Q(rng.randint(-4, 4)) for _ in range(d)]
            wn = _dot(w0, n)
            zeta = [N * a - wn * b for a, b in zip(w0, n)]
            if any(zeta):
                break
        ts = sorted(_dot(pts[i], zeta) for i in A)
        if ts[-1] == ts[0]:
            continue
        gap = min(b - a for a, b in zip(ts, ts[1:])) / (ts[-1] - ts[0])
        # gap > 0 means zeta is not orthogonal to any A-difference
        if gap > 0 and (best is None or gap > best[0]):
            best = (gap, zeta)
    return None if best is None else best[1]


def _attempt(pts, n, c, A, B, m, Dub, r, p_extra, zeta):
    """One lift with fixed parameters; returns the snapped set or None."""
    d = len(n)
    N = _dot(n, n)
    g = [_dot(p, n) - c for p in pts]
    gmax = max(g)
    M = 2 * gmax
    zero = Q(0)
    if zeta is None:
        zeta = [zero] * d
        tmin = zero
        kappa = zero
    else:
        ts = [_dot(pts[i], zeta) for i in A]
        tmin = min(ts)
        kappa = pow2_le(r / (TILT_FACTOR * gmax * (max(ts) - tmin)))
    mu = 2 * r * r * N * kappa
    u = [r * a for a in n] + [M]
    cH = r * c + r * M
    nu = [r * a + mu * b for a, b in zip(n, zeta)] + [M]
    c2 = cH + mu * tmin

    # exact line-circle intersection in the 2-plane through each A-point
    prec = 100 + 4 * max(0, -lg(m)) + 4 * max(0, -lg(r))
    M2 = M * M
    phis = {}
    for i in A:
        t = _dot(pts[i], zeta) - tmin
        K = r * M - mu * t
        qa = N + (r * N) ** 2 / M2
        qb = -2 * K * r * N / M2
        qc = K * K / M2 - r * r
        disc = qb * qb - 4 * qa * qc
        if disc < 0:
            return None, "line misses circle"
        sq = sqrt_lower(disc, prec)
        a1 = (-qb + sq) / (2 * qa)
        a2 = (-qb - sq) / (2 * qa)
        a = a1 if abs(a1) <= abs(a2) else a2
        phis[i] = (a, (K - r * N * a) / M)

    def proj(p, w, off):
        k = (_dot(p, w) - off) / _dot(w, w)
        return [x - k * y for x, y in zip(p, w)]

    plus = {i: [x + phis[i][0] * y for x, y in zip(pts[i], n)] + [phis[i][1]] for i in A}
    minus = {i: [x - phis[i][0] * y for x, y in zip(pts[i], n)] + [-phis[i][1]] for i in A}
    Bt = {i: proj(proj(list(pts[i]) + [zero], u, cH), nu, c2) for i in B}

    # margin estimate from the structural cases, in fixed point: it only
    # steers the grid size, the exact verifier has the final word
    P = prec + 64

    def fx(q):
        return (Z(q.numerator) << P) // Z(q.denominator)

    one = Z(1) << P
    fN = fx(N)
    r2 = fx(r * r) << (2 * P)  # all estimates are in units of 2^(-3P)
    ph = [(fx(phis[i][0]), fx(phis[i][1]), fx(g[i])) for i in A]
    est = [fx(m / 2) << (2 * P)]
    for (ai, bi, _), (aj, bj, _) in combinations(ph, 2):
        est.append(2 * (r2 - abs(ai * aj * fN + bi * bj * one)))
    # <(a n, b), q - (v, 0)> for v in A and q in B-tilde, via two scalars per point
    gq = [(fx(_dot(Bt[j][:d], n) - c), fx(Bt[j][d])) for j in B]
    for ai, bi, gi in ph:
        for gj, wj in gq:
            est.append(2 * (r2 - abs(ai * (gj - gi) + bi * wj) * one))
    mest = Q(min(est), Z(1) << (3 * P))
    if mest <= 0:
        return None, "nonpositive margin estimate"
    p = max(0, -lg(mest / (64 * Dub))) + p_extra

    # round the tilted hyperplane to pivot form, then snap onto it
    j = max(range(d + 1), key=lambda k: abs(nu[k]))
    nus = [Q(1) if k == j else dyadic(nu[k] / nu[j], p) for k in range(d + 1)]
    cs = dyadic(c2 / nu[j], p)

    def snap_on(q):
        q = [dyadic(x, p) for x in q]
        q[j] = cs - sum(nus[k] * q[k] for k in range(d + 1) if k != j)
        return q

    pre = [plus[i] if i in plus else Bt[i] for i in range(len(pts))]
    new = [snap_on(q) for q in pre]
    k0 = len(new)
    pre += [minus[i] for i in A]
    new += [[dyadic(x, p) for x in minus[i]] for i in A]
    # eps: power of two bounding every snap displacement exactly
    disp2 = max(sum((x - y) ** 2 for x, y in zip(a, b)) for a, b in zip(new, pre))
    eps = Q(1, Z(1) << p)
    while eps * eps < disp2:
        eps *= 2
    sides = set()
    for q in new[k0:]:
        v = _dot(q, nus) - cs
        sides.add((v > 0) - (v < 0))
    if sides != {1} and sides != {-1}:
        return None, "lower points not strictly on one side"
    params = dict(r=r, M=M, alpha=[mu * z for z in zeta], eps=eps, p=p)
    return (new, nus, cs, k0, sides.pop(), params), None


def extend(
    cfg: AcuteConfiguration,
    retry_budget: int = DEFAULT_RETRY_BUDGET,
    seed: int = 0,
    workers: Optional[int] = None,
) -> AcuteConfiguration:
    """Lift ``cfg`` one dimension up, growing it by its on-hyperplane count."""
    m, Dub = _margin_inputs(cfg, workers)
    m = to_q(m)
    pts = [[to_q(x) for x in p] for p in cfg.points]
    h = cfg.marked
    n, c = [to_q(x) for x in h.normal], to_q(h.offset)
    if cfg.off_side < 0:
        n = [-a for a in n]
        c = -c
    A = sorted(cfg.on_hyperplane)
    B = [i for i in range(len(pts)) if i not in cfg.on_hyperplane]
    rng = random.Random(seed * 1_000_003 + cfg.dim)
    N = _dot(n, n)
    zeta = _choose_tilt(pts, A, n, N, rng) if len(A) > 1 else None
    if len(A) > 1 and zeta is None:
        raise InvariantError("coincident projections of on-hyperplane points")

    r = pow2_le(min(Q(1, 4), sqrt_lower(m * RADIUS_FACTOR / Dub, 60 - min(0, lg(m)))))
    p_extra = 8
    reasons = []
    for attempt in range(retry_budget):
        res, why = _attempt(pts, n, c, A, B, m, Dub, r, p_extra, zeta)
        if res is not None:
            new, nus, cs, k0, side, prm = res
            qpts = [QVector(to_fraction(x) for x in q) for q in new]
            rep = verify_acute(qpts, workers=workers)
            if rep.is_acute:
                assert_upper_bound(qpts)
                step = ExtendParameters(
                    r=to_fraction(prm["r"]),
                    M=to_fraction(prm["M"]),
                    alpha=QVector(to_fraction(x) for x in prm["alpha"]),
                    eps=to_fraction(prm["eps"]),
                    retry_count=attempt,
                )
                out = AcuteConfiguration(
                    dim=cfg.dim + 1,
                    points=tuple(qpts),
                    marked=Hyperplane(QVector(to_fraction(x) for x in nus), to_fraction(cs)),
                    on_hyperplane=frozenset(range(k0)),
                    off_side=side,
                    report=rep,
                    history=cfg.history + (step,),
                )
                out.check_invariants()
                if out.size != cfg.size + len(A) or len(out.on_hyperplane) != cfg.size:
                    raise InvariantError("cardinality law broken")
                return out
            why = "verification failed (%d violations)" % len(rep.violations)
        reasons.append(why)
        r /= 2
        p_extra += 1
    raise RetryBudgetExhausted(
        "extend from dim %d: %d attempts failed; last reason: %s" % (cfg.dim, retry_budget, reasons[-1] if reasons else "-")
    )


def fibonacci_construct(
    d: int,
    retry_budget: int = DEFAULT_RETRY_BUDGET,
    seed: int = 0,
    workers: Optional[int] = None,
    on_step=None,
) -> AcuteConfiguration:
    """Acute set in R^d with ``F_{d+1}`` points (``F_0 = F_1 = 1``)."""
    if d < 1:
        raise ValueError("dimension must be positive")
    cfg = base_config()
    if on_step is not None:
        on_step(cfg)
    while cfg.dim < d:
        cfg = extend(cfg, retry_budget=retry_budget, seed=seed, workers=workers)
        if on_step is not None:
            on_step(cfg)
    return cfg


def fib(k: int) -> int:
    """``F_k`` with ``F_0 = F_1 = 1``."""
    a, b = 1, 1
    for _ in range(k):
        a, b = b, a + b
    return a
