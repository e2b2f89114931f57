"""Hot loops of the triple sweep.

Each kernel has a numba version and a pure numpy version with identical
results.  Set ``ACUTESETS_DISABLE_NUMBA=1`` to force the numpy versions.
"""

from __future__ import annotations

import os

import numpy as np

INT64_SAFE = 1 << 61


def _env_disabled() -> bool:
    return os.environ.get("ACUTESETS_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")


try:
    if _env_disabled():
        raise ImportError("disabled by environment")
    import numba as nb

    HAVE_NUMBA = True
except ImportError:
    nb = None
    HAVE_NUMBA = False


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


def gram_int64(P: np.ndarray) -> np.ndarray:
    """Exact Gram matrix of an int64 point array (caller checks overflow)."""
    return P @ P.T


def sweep_int64_numpy(G: np.ndarray, lo: int, hi: int):
    """Per-apex summaries for apexes ``lo <= x < hi``.

    Returns ``(min_dot, n_bad, min_d2, max_d2)`` arrays of length
    ``hi - lo``.  ``min_dot`` is over pairs ``y < z`` distinct from the apex
    (``INT64_SAFE`` when there are none); ``n_bad`` counts pairs with
    dot <= 0; the distance extrema are over ``y > x``.
    """
    n = G.shape[0]
    k = hi - lo
    min_dot = np.full(k, INT64_SAFE, dtype=np.int64)
    n_bad = np.zeros(k, dtype=np.int64)
    min_d2 = np.full(k, INT64_SAFE, dtype=np.int64)
    max_d2 = np.full(k, -1, dtype=np.int64)
    diag = np.diagonal(G)
    iu, ju = np.triu_indices(n, 1)
    for x in range(lo, hi):
        row = G[x]
        D = G - row[None, :] - row[:, None] + G[x, x]
        keep = (iu != x) & (ju != x)
        vals = D[iu[keep], ju[keep]]
        if vals.size:
            min_dot[x - lo] = vals.min()
            n_bad[x - lo] = np.count_nonzero(vals <= 0)
        if x + 1 < n:
            d2 = diag[x + 1:] - 2 * row[x + 1:] + G[x, x]
            min_d2[x - lo] = d2.min()
            max_d2[x - lo] = d2.max()
    return min_dot, n_bad, min_d2, max_d2


def bad_pairs_numpy(G: np.ndarray, x: int):
    """All pairs ``y < z`` (both != x) with dot <= 0 at apex ``x``."""
    n = G.shape[0]
    row = G[x]
    D = G - row[None, :] - row[:, None] + G[x, x]
    iu, ju = np.triu_indices(n, 1)
    keep = (iu != x) & (ju != x)
    iu, ju = iu[keep], ju[keep]
    vals = D[iu, ju]
    sel = vals <= 0
    return iu[sel], ju[sel], vals[sel]


if HAVE_NUMBA:

    @nb.njit(cache=True)
    def sweep_int64_numba(G, lo, hi):
        n = G.shape[0]
        k = hi - lo
        min_dot = np.full(k, INT64_SAFE, dtype=np.int64)
        n_bad = np.zeros(k, dtype=np.int64)
        min_d2 = np.full(k, INT64_SAFE, dtype=np.int64)
        max_d2 = np.full(k, -1, dtype=np.int64)
        for x in range(lo, hi):
            gxx = G[x, x]
            best = INT64_SAFE
            bad = 0
            for y in range(n):
                if y == x:
                    continue
                gxy = G[x, y]
                base = gxx - gxy
                if y > x:
                    d2 = G[y, y] - 2 * gxy + gxx
                    if d2 < min_d2[x - lo]:
                        min_d2[x - lo] = d2
                    if d2 > max_d2[x - lo]:
                        max_d2[x - lo] = d2
                for z in range(y + 1, n):
                    if z == x:
                        continue
                    v = G[y, z] - G[x, z] + base
                    if v < best:
                        best = v
                    if v <= 0:
                        bad += 1
            min_dot[x - lo] = best
            n_bad[x - lo] = bad
        return min_dot, n_bad, min_d2, max_d2

    sweep_int64 = sweep_int64_numba
else:
    sweep_int64_numba = None
    sweep_int64 = sweep_int64_numpy
