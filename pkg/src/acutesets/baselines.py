"""Hypercube baselines: random sampling with deletion, and an exhaustive oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from .exact import QVector
from .verifier import assert_upper_bound, require_acute


def default_sample_size(d: int) -> int:
    return max(3, math.ceil((2 / math.sqrt(3)) ** d))


def expected_bound(d: int) -> float:
    """``0.5 (2/sqrt 3)^d``, a reporting value only."""
    return 0.5 * (2 / math.sqrt(3)) ** d


@dataclass(frozen=True)
class EfRunConfig:
    dim: int
    seed: int
    sample_size: Optional[int] = None
    max_attempts: int = 1000

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError("dimension must be at least 2")
        if self.sample_size is not None and self.sample_size < 3:
            raise ValueError("sample size must be at least 3")
        if self.sample_size is not None and self.sample_size > 2 ** self.dim:
            raise ValueError("cannot sample more distinct vertices than the cube has")

    @property
    def n(self) -> int:
        n = self.sample_size if self.sample_size is not None else default_sample_size(self.dim)
        return min(n, 2 ** self.dim)


@dataclass(frozen=True)
class EfResult:
    points: tuple
    sampled: int
    deletions: int
    initial_bad_triples: int


def _bad_triples(V: np.ndarray) -> list:
    """Right-angle triples ``(apex, y, z)`` among 0/1 vectors, sorted."""
    V = V.astype(np.int64)
    G = V @ V.T
    out = []
    n = len(V)
    for x in range(n):
        D = G - G[x][None, :] - G[x][:, None] + G[x, x]
        iu, ju = np.triu_indices(n, 1)
        keep = (iu != x) & (ju != x) & (D[iu, ju] == 0)
        out.extend((x, int(a), int(b)) for a, b in zip(iu[keep], ju[keep]))
    return out


def _sample_vertices(d: int, n: int, rng: np.random.Generator, max_attempts: int) -> np.ndarray:
    if d <= 62:
        seen = set()
        codes = []
        tries = 0
        while len(codes) < n:
            tries += 1
            if tries > max_attempts * n:
                raise RuntimeError("could not draw distinct vertices")
            c = int(rng.integers(0, 1 << d)) if d < 63 else 0
            if c not in seen:
                seen.add(c)
                codes.append(c)
        return np.array([[(c >> k) & 1 for k in range(d)] for c in codes], dtype=np.int8)
    raise ValueError("dimension too large")


def ef_run(cfg: EfRunConfig) -> EfResult:
    rng = np.random.default_rng(cfg.seed)
    V = _sample_vertices(cfg.dim, cfg.n, rng, cfg.max_attempts)
    bad = _bad_triples(V)
    initial = len(bad)
    alive = list(range(len(V)))
    deletions = 0
    while bad:
        # lowest original index of the first bad triple goes
        victim = alive[min(bad[0])]
        alive.remove(victim)
        deletions += 1
        bad = _bad_triples(V[alive])
    pts = tuple(QVector(int(v) for v in V[i]) for i in alive)
    require_acute(list(pts))
    assert_upper_bound(list(pts))
    return EfResult(points=pts, sampled=len(V), deletions=deletions, initial_bad_triples=initial)


def ef_random(cfg: EfRunConfig) -> list:
    """Seeded random cube vertices with one deletion per right-angle triple."""
    return list(ef_run(cfg).points)


def cube_vertices(d: int) -> np.ndarray:
    return np.array([[(c >> k) & 1 for k in range(d)] for c in range(2 ** d)], dtype=np.int64)


def exhaustive_max_cube_subset(d: int) -> tuple[int, list]:
    """Largest acute subset of the vertices of ``{0,1}^d`` by full scan (d <= 4)."""
    if d < 1 or d > 4:
        raise ValueError("exhaustive scan supports 1 <= d <= 4")
    V = cube_vertices(d)
    nv = len(V)
    G = V @ V.T
    bad_masks = []
    for x in range(nv):
        for y, z in combinations([i for i in range(nv) if i != x], 2):
            if G[y, z] - G[x, y] - G[x, z] + G[x, x] <= 0:
                bad_masks.append((1 << x) | (1 << y) | (1 << z))
    subsets = np.arange(1 << nv, dtype=np.int64)
    ok = np.ones(1 << nv, dtype=bool)
    for bm in set(bad_masks):
        ok &= (subsets & bm) != bm
    sizes = np.zeros(1 << nv, dtype=np.int64)
    for k in range(nv):
        sizes += (subsets >> k) & 1
    sizes[~ok] = -1
    best = int(np.argmax(sizes))  # lowest mask among the largest
    witness = [QVector(int(v) for v in V[k]) for k in range(nv) if best >> k & 1]
    require_acute(witness)
    return int(sizes[best]), witness
