"""Exact acuteness oracle.

Points are scaled to a common integer lattice.  Small lattices use an
exact int64 Gram sweep (numba or numpy).  Large ones use a certified
floating-point filter: every sign or minimum that the filter cannot
settle with a rigorous error bound is recomputed with Python integers,
so the report is always exact.
"""

from __future__ import annotations

import math
import multiprocessing as mp
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import NamedTuple, Optional, Sequence

import numpy as np

from . import kernels
from ._mp import Z, ratio_of
from .exact import (
    DegenerateInputError,
    DimensionError,
    QVector,
    ceil_sqrt,
    common_denominator,
    dot,
    sub,
)

_U = 2.0 ** -52
_LOG_SLACK = 1e-6


class NotAcuteError(ValueError):
    """Raised when an operation requires an acute input set."""


class UpperBoundViolation(AssertionError):
    """More points than any acute set in this dimension can have."""


class Violation(NamedTuple):
    apex: int
    y: int
    z: int
    dot: Fraction


@dataclass(frozen=True)
class VerificationReport:
    is_acute: bool
    min_vertex_dot: Optional[Fraction]
    s_value: Optional[Fraction]
    violations: tuple
    triples_checked: int
    n_points: int
    dim: int
    max_dist_sq: Optional[Fraction]
    elapsed: float = field(default=0.0, compare=False)

    def summary(self) -> str:
        return "n=%d d=%d acute=%s min_dot=%s s=%s violations=%d" % (
            self.n_points,
            self.dim,
            self.is_acute,
            format_ratio(self.min_vertex_dot),
            format_ratio(self.s_value),
            len(self.violations),
        )


def format_ratio(q: Optional[Fraction]) -> str:
    """Exact form for small rationals, a power-of-two estimate for huge ones."""
    if q is None:
        return "none"
    if max(q.numerator.bit_length(), q.denominator.bit_length()) <= 64:
        return str(q)
    if q == 0:
        return "0"
    e = q.numerator.bit_length() - q.denominator.bit_length()
    if abs(e) < 1000:
        return "%.6e" % float(q)
    sign = "-" if q < 0 else ""
    return "%s~2^%d" % (sign, e)


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def check_triple(x: QVector, y: QVector, z: QVector) -> tuple[int, int, int]:
    """Signs of the apex dots at ``x``, ``y`` and ``z``."""
    if not (x.dim == y.dim == z.dim):
        raise DimensionError("points of different dimension")
    if x == y or x == z or y == z:
        raise DegenerateInputError("coincident points")
    return (
        _sign(dot(sub(y, x), sub(z, x))),
        _sign(dot(sub(x, y), sub(z, y))),
        _sign(dot(sub(x, z), sub(y, z))),
    )


def _validate(points: Sequence[QVector]) -> int:
    if len(points) == 0:
        raise ValueError("empty point set")
    d = points[0].dim
    for p in points:
        if p.dim != d:
            raise DimensionError("points of different dimension")
    seen = {}
    for i, p in enumerate(points):
        j = seen.setdefault(p, i)
        if j != i:
            raise DegenerateInputError("duplicate points at indices %d and %d" % (j, i))
    return d


def _triples(n: int) -> int:
    return n * (n - 1) * (n - 2) // 2


def _make_report(n, d, scale, min_dot, viols, min_d2, max_d2, t0) -> VerificationReport:
    L2 = scale
    mvd = None if min_dot is None else ratio_of(min_dot, L2)
    md2 = None if min_d2 is None else ratio_of(min_d2, L2)
    if mvd is None:
        s = md2
    elif md2 is None:
        s = mvd
    else:
        s = min(mvd, md2)
    vs = tuple(Violation(a, y, z, ratio_of(v, L2)) for a, y, z, v in sorted(viols))
    return VerificationReport(
        is_acute=not vs,
        min_vertex_dot=mvd,
        s_value=s,
        violations=vs,
        triples_checked=_triples(n),
        n_points=n,
        dim=d,
        max_dist_sq=None if max_d2 is None else ratio_of(max_d2, L2),
        elapsed=time.perf_counter() - t0,
    )


def verify_naive(points: Sequence[QVector]) -> VerificationReport:
    """Reference oracle: three nested loops over Fractions."""
    t0 = time.perf_counter()
    d = _validate(points)
    n = len(points)
    min_dot = None
    viols = []
    min_d2 = max_d2 = None
    for x in range(n):
        for y in range(n):
            if y == x:
                continue
            if y > x:
                d2 = dot(sub(points[y], points[x]), sub(points[y], points[x]))
                min_d2 = d2 if min_d2 is None else min(min_d2, d2)
                max_d2 = d2 if max_d2 is None else max(max_d2, d2)
            for z in range(y + 1, n):
                if z == x:
                    continue
                v = dot(sub(points[y], points[x]), sub(points[z], points[x]))
                if min_dot is None or v < min_dot:
                    min_dot = v
                if v <= 0:
                    viols.append((x, y, z, v))
    # reuse the integer report builder with unit scale
    return _make_report(n, d, 1, min_dot, viols, min_d2, max_d2, t0)


# ---------------------------------------------------------------- sweeps


@dataclass
class _Job:
    P: list  # integer coordinates, one list per point
    mode: str
    G: Optional[np.ndarray] = None
    Pf: Optional[np.ndarray] = None
    S: int = 0
    Gx: Optional[list] = None  # exact Gram matrix as nested lists of big ints


_JOB: Optional[_Job] = None


def _chunk_int64(job: _Job, lo: int, hi: int):
    G = job.G
    min_dot, n_bad, min_d2, max_d2 = kernels.sweep_int64(G, lo, hi)
    n = G.shape[0]
    best = None
    if n >= 3:
        best = int(min_dot.min())
    viols = []
    for k in np.flatnonzero(n_bad):
        x = lo + int(k)
        ys, zs, vs = kernels.bad_pairs_numpy(G, x)
        viols.extend((x, int(a), int(b), int(v)) for a, b, v in zip(ys, zs, vs))
    has = max_d2 >= 0
    lo_d2 = int(min_d2[has].min()) if has.any() else None
    hi_d2 = int(max_d2[has].max()) if has.any() else None
    return best, viols, lo_d2, hi_d2


def _exact_gram(P: list) -> list:
    rows = [[Z(v) for v in p] for p in P]
    n = len(rows)
    G = [[None] * n for _ in range(n)]
    for i in range(n):
        ri = rows[i]
        Gi = G[i]
        for j in range(i, n):
            v = sum(a * b for a, b in zip(ri, rows[j]))
            Gi[j] = v
            G[j][i] = v
    return G


def _mantissa_row(e):
    bl = max(abs(v).bit_length() for v in e)
    sh = bl - 62
    if sh > 0:
        m = [float(v >> sh) for v in e]
    else:
        m = [float(v << -sh) for v in e]
    return np.array(m) * 2.0 ** -62, sh + 62


def _log2_int(v) -> float:
    return math.log2(int(v))


def _exact_undecided(Gobj, Gx, gxx, x, ya, za, n, viols):
    """Exact apex dots for the pairs ``(ya[k], za[k])``; returns their minimum.

    Undecided pairs cluster on a few indices (points very close to the
    apex).  Grouping by such an index ``c`` turns each value into one
    subtraction: ``dot = (G[c,z] - G[x,z]) - (G[x,c] - G[x,x])``.
    """
    cnt = np.bincount(np.concatenate([ya, za]), minlength=n)
    heavy = cnt >= max(8, n // 4)
    owner = np.where(heavy[ya], ya, np.where(heavy[za], za, -1))
    other = np.where(owner == ya, za, ya)
    best = None
    direct = np.flatnonzero(owner < 0)
    if direct.size:
        y, z = ya[direct], za[direct]
        V = Gobj[y, z] - Gobj[x, y] - Gobj[x, z] + gxx
        best = V.min()
        if best <= 0:
            for k in range(len(V)):
                if V[k] <= 0:
                    viols.append((x, int(y[k]), int(z[k]), V[k]))
    grouped = np.flatnonzero(owner >= 0)
    if grouped.size:
        order = grouped[np.argsort(owner[grouped], kind="stable")]
        cuts = np.flatnonzero(np.diff(owner[order])) + 1
        for grp in np.split(order, cuts):
            c = int(owner[grp[0]])
            zs = other[grp]
            Dc = Gobj[c, zs] - Gobj[x, zs]
            kc = Gx[c] - gxx
            v = Dc.min() - kc
            if v <= 0:
                for k in range(len(zs)):
                    if Dc[k] <= kc:
                        z = int(zs[k])
                        viols.append((x, min(c, z), max(c, z), Dc[k] - kc))
            if best is None or v < best:
                best = v
    return best


def _chunk_big(job: _Job, lo: int, hi: int):
    P = job.P
    Pf = job.Pf
    n, d = Pf.shape
    absPf = np.abs(Pf)
    gamma = (d + 8) * _U
    tiny = d * 2.0 ** -1000
    iu, ju = np.triu_indices(n, 1)

    best = None  # exact minimum apex dot (int)
    best_log = math.inf
    viols = []
    min_d2 = max_d2 = None
    min_d2_log, max_d2_log = math.inf, -math.inf

    G = job.Gx
    Gobj = np.empty((n, n), dtype=object)
    for i in range(n):
        Gobj[i, :] = G[i]
    for x in range(lo, hi):
        px = P[x]
        Gx = G[x]
        gxx = Gx[x]
        diffs = {}

        def diff(y):
            e = diffs.get(y)
            if e is None:
                e = diffs[y] = [a - b for a, b in zip(P[y], px)]
            return e

        Ef = Pf - Pf[x]
        W = absPf + absPf[x] + np.abs(Ef) + 2.0 ** -1000
        expo = np.full(n, float(job.S))
        rowE = np.abs(Ef).max(axis=1)
        rowW = W.max(axis=1)
        close = (rowE < 2.0 ** -20 * rowW) | (rowW < 2.0 ** -400)
        close[x] = False
        for y in np.flatnonzero(close):
            m, e = _mantissa_row(diff(int(y)))
            Ef[y] = m
            W[y] = np.abs(m) + 1.0
            expo[y] = float(e)
        Ef[x] = 0.0
        W[x] = 0.0

        F = Ef @ Ef.T
        Err = gamma * (W @ W.T) + tiny
        lo_b = F - Err
        hi_b = F + Err
        ex2 = expo[:, None] + expo[None, :]

        # distances to later points
        if x + 1 < n:
            ys = np.arange(x + 1, n)
            dl = lo_b[ys, ys]
            dh = hi_b[ys, ys]
            exact_ys = ys[dl <= 0]
            okm = dl > 0
            with np.errstate(divide="ignore"):
                llo = np.where(okm, np.log2(np.where(okm, dl, 1.0)) + 2 * expo[ys], -math.inf)
                lhi = np.log2(np.maximum(dh, 2.0 ** -1070)) + 2 * expo[ys]
            vals = {}
            for y in exact_ys:
                y = int(y)
                vals[y] = G[y][y] - 2 * Gx[y] + gxx
            for v in vals.values():
                lv = _log2_int(v)
                min_d2_log = min(min_d2_log, lv)
                max_d2_log = max(max_d2_log, lv)
            cut_min = min(min_d2_log, lhi[okm].min() if okm.any() else math.inf) + _LOG_SLACK
            cut_max = max(max_d2_log, llo[okm].max() if okm.any() else -math.inf) - _LOG_SLACK
            cand = ys[okm & ((llo <= cut_min) | (lhi >= cut_max))]
            for y in cand:
                y = int(y)
                if y not in vals:
                    vals[y] = G[y][y] - 2 * Gx[y] + gxx
            for v in vals.values():
                if min_d2 is None or v < min_d2:
                    min_d2 = v
                    min_d2_log = _log2_int(v)
                if max_d2 is None or v > max_d2:
                    max_d2 = v
                    max_d2_log = _log2_int(v)

        if n < 3:
            continue
        keep = (iu != x) & (ju != x)
        a_idx, b_idx = iu[keep], ju[keep]
        plo = lo_b[a_idx, b_idx]
        phi = hi_b[a_idx, b_idx]
        pos = plo > 0
        undecided = np.flatnonzero(~pos)
        if undecided.size:
            v = _exact_undecided(Gobj, Gx, gxx, x, a_idx[undecided], b_idx[undecided], n, viols)
            if best is None or v < best:
                best = v
                best_log = _log2_int(v) if v > 0 else -math.inf
        if best is not None and best <= 0:
            continue  # minimum already fixed by an exact non-positive value
        if pos.any():
            e2 = ex2[a_idx[pos], b_idx[pos]]
            llo = np.log2(plo[pos]) + e2
            lhi = np.log2(phi[pos]) + e2
            cut = min(best_log, lhi.min()) + _LOG_SLACK
            pos_idx = np.flatnonzero(pos)
            for k in np.flatnonzero(llo <= cut):
                kk = pos_idx[k]
                y, z = int(a_idx[kk]), int(b_idx[kk])
                v = G[y][z] - Gx[y] - Gx[z] + gxx
                if best is None or v < best:
                    best = v
                    best_log = _log2_int(v)
    viols = [(a, b, c, int(v)) for a, b, c, v in viols]
    return (
        None if best is None else int(best),
        viols,
        None if min_d2 is None else int(min_d2),
        None if max_d2 is None else int(max_d2),
    )


def _run_chunk(lo: int, hi: int):
    job = _JOB
    if job.mode == "int64":
        return _chunk_int64(job, lo, hi)
    return _chunk_big(job, lo, hi)


def _prepare(points: Sequence[QVector], force_bigint: bool = False) -> tuple[_Job, int]:
    L, P = common_denominator(points)
    n = len(P)
    d = len(P[0])
    mx = max((abs(v) for row in P for v in row), default=0)
    if not force_bigint and 4 * d * mx * mx < kernels.INT64_SAFE:
        A = np.array(P, dtype=np.int64).reshape(n, d)
        return _Job(P=P, mode="int64", G=kernels.gram_int64(A)), L * L
    S = max(mx.bit_length(), 1)
    den = 1 << S
    Pf = np.array([[v / den for v in row] for row in P], dtype=np.float64).reshape(n, d)
    return _Job(P=P, mode="bigint", Pf=Pf, S=S, Gx=_exact_gram(P)), L * L


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("ACUTESETS_WORKERS", "1")))
    except ValueError:
        return 1


def _fold(parts):
    best = None
    viols = []
    min_d2 = max_d2 = None
    for b, v, lo2, hi2 in parts:
        if b is not None and (best is None or b < best):
            best = b
        viols.extend(v)
        if lo2 is not None and (min_d2 is None or lo2 < min_d2):
            min_d2 = lo2
        if hi2 is not None and (max_d2 is None or hi2 > max_d2):
            max_d2 = hi2
    return best, viols, min_d2, max_d2


def verify_acute(
    points: Sequence[QVector],
    workers: Optional[int] = None,
    force_bigint: bool = False,
) -> VerificationReport:
    """Exhaustive exact check of every ordered (apex, pair) triple.

    ``workers`` > 1 splits the apex range over forked processes; the
    report does not depend on the worker count.
    """
    global _JOB
    t0 = time.perf_counter()
    d = _validate(points)
    n = len(points)
    if n == 1:
        return _make_report(1, d, 1, None, [], None, None, t0)
    job, L2 = _prepare(points, force_bigint)
    w = default_workers() if workers is None else max(1, int(workers))
    nchunks = min(n, 4 * w) if w > 1 else 1
    bounds = np.linspace(0, n, nchunks + 1).astype(int)
    spans = [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    _JOB = job
    try:
        if w == 1 or len(spans) == 1:
            parts = [_run_chunk(a, b) for a, b in spans]
        else:
            ctx = mp.get_context("fork")
            with ProcessPoolExecutor(max_workers=w, mp_context=ctx) as ex:
                futs = [ex.submit(_run_chunk, a, b) for a, b in spans]
                parts = [f.result() for f in futs]
    finally:
        _JOB = None
    best, viols, min_d2, max_d2 = _fold(parts)
    return _make_report(n, d, L2, best, viols, min_d2, max_d2, t0)


def require_acute(points: Sequence[QVector], workers: Optional[int] = None) -> VerificationReport:
    rep = verify_acute(points, workers=workers)
    if not rep.is_acute:
        v = rep.violations[0]
        raise NotAcuteError("not acute: apex %d with %d, %d has dot %s" % (v.apex, v.y, v.z, format_ratio(v.dot)))
    return rep


def acute_size_bound(d: int) -> int:
    """Largest possible acute set size in R^d."""
    if d < 1:
        raise ValueError("dimension must be positive")
    return 2 if d == 1 else 2 ** d - 1


def upper_bound_check(points: Sequence[QVector]) -> bool:
    """True when the set is no larger than the known upper bound."""
    if not points:
        return True
    return len(points) <= acute_size_bound(points[0].dim)


def assert_upper_bound(points: Sequence[QVector]) -> None:
    if not upper_bound_check(points):
        raise UpperBoundViolation(
            "%d points in dimension %d exceed the bound %d"
            % (len(points), points[0].dim, acute_size_bound(points[0].dim))
        )


def robustness_radius(points: Sequence[QVector], report: Optional[VerificationReport] = None) -> Fraction:
    """Radius ``eps`` such that moving each point by less than ``eps`` keeps the set acute.

    With ``m`` the minimum apex dot and ``D`` an integer bound on the
    diameter, every apex dot moves by at most ``4 eps D + 4 eps^2 < m``.
    Sets with fewer than three points use the minimum squared distance
    in place of ``m`` so that points stay distinct.
    """
    rep = report if report is not None else verify_acute(points)
    if not rep.is_acute:
        raise NotAcuteError("robustness radius needs an acute set")
    if rep.n_points == 1:
        return Fraction(1)
    m = rep.min_vertex_dot if rep.min_vertex_dot is not None else rep.s_value
    D = ceil_sqrt(rep.max_dist_sq)
    return m / (8 * D)
