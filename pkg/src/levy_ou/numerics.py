"""Small shared helpers: seeded generators, PSD square roots, slope fits."""

from __future__ import annotations

import numpy as np

DEFAULT_CHUNK = 4096


def make_rng(seed):
    """Fresh Generator seeded through SeedSequence for a stable stream."""
    return np.random.default_rng(np.random.SeedSequence(seed))


def sub_rng(seed, index):
    """Generator for task `index` of a run seeded with `seed`.

    Derived from the (seed, index) entropy pair, so ensemble results do not
    depend on how tasks are scheduled or how many workers run them.
    """
    return np.random.default_rng(np.random.SeedSequence((int(seed), int(index))))


def chunked(total, size=DEFAULT_CHUNK):
    """Yield (chunk_index, start, stop) covering range(total) in order."""
    total = int(total)
    size = int(size)
    index = 0
    start = 0
    while start < total:
        stop = min(start + size, total)
        yield index, start, stop
        index += 1
        start = stop


def psd_sqrt(mat, tol=1e-12):
    """Symmetric square root of a positive semidefinite matrix.

    Eigenvalues in [-tol, 0) are treated as zero; anything lower raises.
    """
    sym = np.asarray(mat, dtype=float)
    w, v = np.linalg.eigh(0.5 * (sym + sym.T))
    if w.min() < -tol:
        raise ValueError("negative eigenvalue")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.T


def fit_loglog_slope(x, y):
    """Least squares slope of log(y) against log(x)."""
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.asarray(y, dtype=float))
    return float(np.polyfit(lx, ly, 1)[0])
