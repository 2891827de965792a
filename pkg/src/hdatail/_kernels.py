"""Hot numeric kernels, each with a numba and a pure-numpy implementation.

The numba path is used by default. Set ``HDATAIL_DISABLE_NUMBA=1`` in the
environment (before import) to force the numpy path, e.g. for debugging or
on platforms without numba. Both paths are kept importable so tests and the
benchmark can compare them directly.
"""

import logging
import math
import os

import numpy as np

try:
    import numba

    logging.getLogger("numba").setLevel(logging.WARNING)
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

_DISABLED = os.environ.get("HDATAIL_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")
USE_NUMBA = HAVE_NUMBA and not _DISABLED

_SQRT_2PI = math.sqrt(2.0 * math.pi)


def _njit(func):
    if not HAVE_NUMBA:
        return func
    return numba.njit(cache=True, nogil=True)(func)


# --- count of reference values >= each query ------------------------------

def count_at_least_numpy(ref, queries):
    """Return ``#{j: ref[j] >= q}`` for every q in `queries`."""
    ref = np.sort(np.asarray(ref, dtype=np.float64))
    queries = np.asarray(queries, dtype=np.float64)
    return ref.size - np.searchsorted(ref, queries, side="left")


@_njit
def _count_at_least_search(srt, queries):
    # srt ascending; lower-bound binary search per query
    n = srt.shape[0]
    out = np.empty(queries.shape[0], dtype=np.int64)
    for i in range(queries.shape[0]):
        q = queries[i]
        lo, hi = 0, n
        while lo < hi:
            mid = (lo + hi) >> 1
            if srt[mid] < q:
                lo = mid + 1
            else:
                hi = mid
        out[i] = n - lo
    return out


def count_at_least_numba(ref, queries):
    srt = np.sort(np.asarray(ref, dtype=np.float64))
    return _count_at_least_search(srt, np.ascontiguousarray(queries, dtype=np.float64))


# --- Gaussian KDE on [0, 1] with reflection at both ends --------------------

def _n_images(bandwidth):
    # enough mirror images that the truncated Gaussian mass is < 1e-12
    return int(math.ceil(8.0 * bandwidth / 2.0)) + 1


def reflected_kde_numpy(points, grid, bandwidth, chunk=4096):
    points = np.asarray(points, dtype=np.float64)
    grid = np.asarray(grid, dtype=np.float64)
    r = _n_images(bandwidth)
    shifts = 2.0 * np.arange(-r, r + 1, dtype=np.float64)
    # images of p under reflection at 0 and 1: 2j + p and 2j - p
    images = np.concatenate([shifts[:, None] + points[None, :],
                             shifts[:, None] - points[None, :]]).ravel()
    dens = np.zeros(grid.size)
    for start in range(0, images.size, chunk):
        z = (grid[:, None] - images[None, start:start + chunk]) / bandwidth
        dens += np.exp(-0.5 * z * z).sum(axis=1)
    return dens / (points.size * bandwidth * _SQRT_2PI)


@_njit
def _reflected_kde_loop(points, grid, bandwidth, r):
    m = points.shape[0]
    out = np.zeros(grid.shape[0])
    cut = 8.0 * bandwidth
    for g in range(grid.shape[0]):
        x = grid[g]
        acc = 0.0
        for i in range(m):
            p = points[i]
            for j in range(-r, r + 1):
                s = 2.0 * j
                d1 = x - (s + p)
                d2 = x - (s - p)
                if abs(d1) < cut:
                    z = d1 / bandwidth
                    acc += math.exp(-0.5 * z * z)
                if abs(d2) < cut:
                    z = d2 / bandwidth
                    acc += math.exp(-0.5 * z * z)
        out[g] = acc
    return out / (m * bandwidth * math.sqrt(2.0 * math.pi))


def reflected_kde_numba(points, grid, bandwidth):
    return _reflected_kde_loop(np.ascontiguousarray(points, dtype=np.float64),
                               np.ascontiguousarray(grid, dtype=np.float64),
                               float(bandwidth), _n_images(bandwidth))


if USE_NUMBA:
    count_at_least = count_at_least_numba
    reflected_kde = reflected_kde_numba
else:
    count_at_least = count_at_least_numpy
    reflected_kde = reflected_kde_numpy
