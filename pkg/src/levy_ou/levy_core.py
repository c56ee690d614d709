"""Levy triplets, the characteristic exponent psi, and increment sampling.

A triplet (a, Sigma, z, r) consists of a drift vector a, a diffusion matrix
Sigma, a jump rate z and a finite discrete jump law r = sum_i w_i delta_{s_i}.
It fixes the characteristic exponent

    psi(k) = i <a, k> - <k, Sigma k> / 2 + z sum_i w_i (exp(i <s_i, k>) - 1),

so an increment of the driving noise over a time step dt has characteristic
function exp(psi(k) dt), and pairing the noise with a test function f gives
the characteristic functional

    C(f) = exp( integral_0^T psi(f(t)) dt ).

Increments are sampled exactly by superposing the three independent parts:
deterministic drift a dt, a Gaussian with covariance Sigma dt, and a compound
Poisson sum of jumps with Poisson(z dt) count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .numerics import psd_sqrt

__all__ = [
    "LevyTriplet",
    "TestFunction",
    "validate",
    "psi",
    "sample_increment",
    "sample_increments",
    "char_functional",
]


@dataclass(frozen=True, eq=False)
class LevyTriplet:
    """Drift vector, diffusion matrix, and discrete jump measure.

    Parameters
    ----------
    dim : int
        State dimension d.
    drift : array_like
        Drift vector a of length d (state / time).
    diffusion : array_like
        Symmetric positive semidefinite d x d matrix Sigma (state^2 / time).
        A scalar is accepted when d = 1.
    jump_rate : float
        Jump intensity z >= 0 (1 / time).
    jump_weights : array_like, optional
        Probabilities w_i of the discrete jump law, summing to one.
    jump_vectors : array_like, optional
        Jump sizes s_i, one row per atom; shape (n_jumps, d).  For d = 1 a
        flat array of sizes is accepted.

    Construction only coerces shapes and finiteness; the full invariants
    (symmetry, positive semidefiniteness, normalized weights, nonzero jumps)
    are enforced by :func:`validate`, so that malformed inputs can be built
    and then reported by name.
    """

    dim: int
    drift: np.ndarray
    diffusion: np.ndarray
    jump_rate: float = 0.0
    jump_weights: np.ndarray = None
    jump_vectors: np.ndarray = None

    def __post_init__(self):
        dim = int(self.dim)
        if dim < 1:
            raise ValueError("dim must be a positive integer")
        drift = np.atleast_1d(np.asarray(self.drift, dtype=float)).copy()
        if drift.shape != (dim,):
            raise ValueError(f"drift must have shape ({dim},), got {drift.shape}")
        diffusion = np.asarray(self.diffusion, dtype=float)
        if diffusion.ndim == 0:
            diffusion = diffusion.reshape(1, 1)
        diffusion = diffusion.copy()
        if diffusion.shape != (dim, dim):
            raise ValueError(
                f"diffusion must have shape ({dim}, {dim}), got {diffusion.shape}"
            )
        rate = float(self.jump_rate)
        if self.jump_weights is None:
            weights = np.zeros(0)
        else:
            weights = np.atleast_1d(np.asarray(self.jump_weights, dtype=float)).copy()
        if weights.ndim != 1:
            raise ValueError("jump weights must be a flat array")
        if self.jump_vectors is None:
            vectors = np.zeros((0, dim))
        else:
            vectors = np.asarray(self.jump_vectors, dtype=float)
            if vectors.ndim == 1:
                if dim == 1:
                    vectors = vectors.reshape(-1, 1)
                else:
                    vectors = vectors.reshape(1, -1)
            vectors = vectors.copy()
        if vectors.shape != (weights.size, dim):
            raise ValueError(
                f"jump vectors must have shape ({weights.size}, {dim}), "
                f"got {vectors.shape}"
            )
        for name, arr in (
            ("drift", drift),
            ("diffusion", diffusion),
            ("jump weights", weights),
            ("jump vectors", vectors),
        ):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} must be finite")
        if not np.isfinite(rate):
            raise ValueError("jump rate must be finite")
        for arr in (drift, diffusion, weights, vectors):
            arr.setflags(write=False)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "drift", drift)
        object.__setattr__(self, "diffusion", diffusion)
        object.__setattr__(self, "jump_rate", rate)
        object.__setattr__(self, "jump_weights", weights)
        object.__setattr__(self, "jump_vectors", vectors)

    @property
    def n_jumps(self):
        return self.jump_weights.size

    @property
    def jumps(self):
        """The jump measure as a list of (weight, vector) pairs."""
        return [
            (float(w), self.jump_vectors[i].copy())
            for i, w in enumerate(self.jump_weights)
        ]

    @classmethod
    def gaussian(cls, diffusion=1.0, drift=0.0, dim=1):
        """Pure drift-diffusion triplet (no jumps)."""
        drift_vec = np.asarray(drift, dtype=float)
        if drift_vec.ndim == 0:
            drift_vec = np.full(dim, float(drift_vec))
        diff_mat = np.asarray(diffusion, dtype=float)
        if diff_mat.ndim == 0:
            diff_mat = np.eye(dim) * float(diff_mat)
        return cls(dim, drift_vec, diff_mat)

    def to_dict(self):
        """Serialize to the JSON document layout used by the CLI."""
        return {
            "dim": self.dim,
            "drift": self.drift.tolist(),
            "diffusion": self.diffusion.tolist(),
            "jump_rate": self.jump_rate,
            "jumps": [
                {"weight": float(w), "vector": self.jump_vectors[i].tolist()}
                for i, w in enumerate(self.jump_weights)
            ],
        }

    @classmethod
    def from_dict(cls, doc):
        """Rebuild a triplet from its JSON document layout."""
        try:
            dim = doc["dim"]
            drift = doc["drift"]
            diffusion = doc["diffusion"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"triplet document missing field: {exc}") from exc
        rate = doc.get("jump_rate", 0.0)
        jumps = doc.get("jumps", [])
        weights = [entry["weight"] for entry in jumps]
        vectors = [np.atleast_1d(entry["vector"]) for entry in jumps]
        if vectors:
            return cls(dim, drift, diffusion, rate, weights, np.vstack(vectors))
        return cls(dim, drift, diffusion, rate)


def validate(triplet: LevyTriplet) -> None:
    """Check the triplet invariants, raising ValueError on the first violation.

    The violation is reported by name: "asymmetric diffusion", "negative
    eigenvalue", "weights not normalized", "negative jump rate", or
    "zero jump with positive rate".
    """
    sig = triplet.diffusion
    if not np.allclose(sig, sig.T, rtol=0.0, atol=1e-12):
        raise ValueError("asymmetric diffusion")
    eigs = np.linalg.eigvalsh(0.5 * (sig + sig.T))
    if eigs.size and eigs.min() < -1e-12:
        raise ValueError("negative eigenvalue")
    w = triplet.jump_weights
    if w.size:
        if np.any(w <= 0.0) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights not normalized")
    if triplet.jump_rate < 0.0:
        raise ValueError("negative jump rate")
    norms = np.linalg.norm(triplet.jump_vectors, axis=1) if w.size else np.zeros(0)
    if triplet.jump_rate > 0.0:
        if w.size == 0 or norms.min() == 0.0:
            raise ValueError("zero jump with positive rate")
    elif w.size and norms.min() == 0.0:
        raise ValueError("zero jump vector")


def psi(triplet: LevyTriplet, k):
    """Characteristic exponent psi(k).

    Parameters
    ----------
    triplet : LevyTriplet
    k : scalar or array
        Frequency argument.  For dim 1 any shape is evaluated elementwise.
        For dim > 1 the last axis must have length ``dim``; leading axes
        broadcast.

    Returns
    -------
    complex
        psi(k) = i <a,k> - <k, Sigma k>/2 + z sum_i w_i (e^{i<s_i,k>} - 1).
        A complex scalar for a single point, otherwise a complex array over
        the leading axes.
    """
    kk = np.asarray(k, dtype=float)
    if triplet.dim == 1:
        pts = kk.reshape(kk.shape + (1,))
        scalar = kk.ndim == 0
    else:
        if kk.ndim == 0 or kk.shape[-1] != triplet.dim:
            raise ValueError(f"k must have {triplet.dim} components")
        pts = kk
        scalar = kk.ndim == 1
    lin = 1j * (pts @ triplet.drift)
    quad = -0.5 * np.einsum("...i,ij,...j->...", pts, triplet.diffusion, pts)
    out = lin + quad
    if triplet.jump_rate != 0.0 and triplet.n_jumps:
        phase = np.exp(1j * (pts @ triplet.jump_vectors.T))
        out = out + triplet.jump_rate * ((phase - 1.0) @ triplet.jump_weights)
    if scalar:
        return complex(out)
    return out


def sample_increments(triplet: LevyTriplet, dt, n, rng) -> np.ndarray:
    """Draw ``n`` independent noise increments over a step ``dt``.

    Each row is a dt + chol(Sigma) sqrt(dt) Z + sum_{j<=N} S_j with Z standard
    Gaussian, N Poisson(z dt) and S_j drawn from the jump law, so its
    characteristic function is exp(psi(k) dt).

    Returns
    -------
    ndarray of shape (n, dim)
    """
    dt = float(dt)
    if not dt > 0.0:
        raise ValueError("dt must be positive")
    validate(triplet)
    n = int(n)
    d = triplet.dim
    out = np.tile(triplet.drift * dt, (n, 1))
    if np.any(triplet.diffusion):
        factor = psd_sqrt(triplet.diffusion) * np.sqrt(dt)
        out += rng.standard_normal((n, d)) @ factor.T
    if triplet.jump_rate > 0.0 and triplet.n_jumps:
        counts = rng.poisson(triplet.jump_rate * dt, size=n)
        total = int(counts.sum())
        if total:
            picks = rng.choice(triplet.n_jumps, size=total, p=triplet.jump_weights)
            owner = np.repeat(np.arange(n), counts)
            np.add.at(out, owner, triplet.jump_vectors[picks])
    return out


def sample_increment(triplet: LevyTriplet, dt, rng) -> np.ndarray:
    """Draw one noise increment over a step ``dt``; see sample_increments."""
    return sample_increments(triplet, dt, 1, rng)[0]


@dataclass(frozen=True, eq=False)
class TestFunction:
    """A test function sampled on a uniform grid over [0, T].

    ``values`` holds f(times[k]); scalar-valued functions use a flat array,
    vector-valued ones an array of shape (len(times), d).  When the original
    callable is available it is kept (``fn``) so the function can be
    resampled exactly on other grids; otherwise ``value_at`` falls back to
    linear interpolation.
    """

    __test__ = False  # keep pytest from collecting this as a test case

    times: np.ndarray
    values: np.ndarray
    fn: Callable = field(default=None, repr=False)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float).copy()
        values = np.asarray(self.values, dtype=float).copy()
        if times.ndim != 1 or times.size < 2:
            raise ValueError("grid must be one-dimensional with at least two nodes")
        if abs(times[0]) > 1e-9:
            raise ValueError("grid must start at 0")
        steps = np.diff(times)
        dt = steps[0]
        if not dt > 0.0:
            raise ValueError("grid must be strictly increasing")
        if np.max(np.abs(steps - dt)) > 1e-9 * dt:
            raise ValueError("grid must be uniformly spaced")
        if values.ndim not in (1, 2) or values.shape[0] != times.size:
            raise ValueError("values must have one entry per grid node")
        if not np.all(np.isfinite(values)):
            raise ValueError("values must be finite")
        times.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    @property
    def dt(self):
        return float(self.times[1] - self.times[0])

    @property
    def t_end(self):
        return float(self.times[-1])

    @property
    def dim(self):
        return 1 if self.values.ndim == 1 else self.values.shape[1]

    @classmethod
    def from_callable(cls, fn, t_end, num):
        """Sample ``fn`` on num uniform nodes over [0, t_end], keeping ``fn``."""
        times = np.linspace(0.0, float(t_end), int(num))
        values = _call_on_grid(fn, times)
        return cls(times, values, fn=fn)

    @classmethod
    def constant(cls, value, t_end, num=2):
        """The constant function value on [0, t_end]."""
        return cls.from_callable(lambda t: np.full(np.shape(t), float(value)), t_end, num)

    def value_at(self, t):
        """Evaluate at arbitrary times, exactly via ``fn`` when available."""
        t = np.asarray(t, dtype=float)
        if self.fn is not None:
            return _call_on_grid(self.fn, t)
        if self.values.ndim == 1:
            return np.interp(t, self.times, self.values)
        cols = [
            np.interp(t, self.times, self.values[:, j])
            for j in range(self.values.shape[1])
        ]
        return np.stack(cols, axis=-1)


def _call_on_grid(fn, times):
    try:
        out = np.asarray(fn(times), dtype=float)
    except (TypeError, ValueError):
        out = np.asarray([fn(t) for t in np.atleast_1d(times)], dtype=float)
        if np.ndim(times) == 0:
            out = out[0]
    if out.shape[: max(np.ndim(times), 0)] != np.shape(times):
        out = np.broadcast_to(out, np.shape(times) + out.shape).copy()
    return out


def char_functional(triplet: LevyTriplet, f: TestFunction) -> complex:
    """Characteristic functional C(f) = exp( integral_0^T psi(f(t)) dt ).

    The integral is computed by the composite trapezoid rule on the test
    function's own grid, which is second order accurate for smooth f.
    """
    if f.times.size < 2:
        raise ValueError("test function needs at least two grid nodes")
    vals = f.values
    if triplet.dim == 1:
        if vals.ndim == 2:
            if vals.shape[1] != 1:
                raise ValueError("test function dimension does not match triplet")
            vals = vals[:, 0]
        exponent = np.trapezoid(psi(triplet, vals), dx=f.dt)
    else:
        if vals.ndim != 2 or vals.shape[1] != triplet.dim:
            raise ValueError("test function dimension does not match triplet")
        exponent = np.trapezoid(psi(triplet, vals), dx=f.dt)
    return complex(np.exp(exponent))
