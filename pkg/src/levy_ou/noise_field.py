"""Lattice noise: seeded increment paths, pairings with test functions,
empirical characteristic functionals, and the mollified response kernels
with their L2 Cauchy gap.

The continuum noise is approximated on a uniform grid with spacing dt by
i.i.d. increments dL_k whose law has characteristic function exp(psi(k) dt).
Pairing a path with a test function f uses left endpoints,

    <eta, f> = sum_k f(t_k) dL_k,

which attributes each increment to the interval [t_k, t_{k+1}) it spans.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .levy_core import LevyTriplet, TestFunction, psi, sample_increments, validate
from .numerics import chunked, make_rng, sub_rng

__all__ = [
    "TimeGrid",
    "NoisePath",
    "generate_path",
    "pair",
    "empirical_cf",
    "log_cf_riemann",
    "increment_fluctuation",
    "unit_interval_covariance",
    "chi_transition",
    "causal_kernel_value",
    "mollified_kernel_value",
    "mollified_kernel",
    "l2_cauchy_gap",
]


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid t_k = k dt, k = 0..n_steps, with t_end = n_steps dt."""

    dt: float
    n_steps: int

    def __post_init__(self):
        dt = float(self.dt)
        steps = int(self.n_steps)
        if not (np.isfinite(dt) and dt > 0.0):
            raise ValueError("dt must be positive and finite")
        if steps < 1:
            raise ValueError("grid needs at least one step")
        object.__setattr__(self, "dt", dt)
        object.__setattr__(self, "n_steps", steps)

    @property
    def t_end(self):
        return self.dt * self.n_steps

    @property
    def nodes(self):
        return np.arange(self.n_steps + 1) * self.dt

    @property
    def interval_starts(self):
        return np.arange(self.n_steps) * self.dt

    @classmethod
    def from_lattice(cls, n, t_end):
        """Grid with spacing 1/n covering [0, t_end]; n * t_end must be integral."""
        n = int(n)
        if n < 1:
            raise ValueError("lattice scale must be a positive integer")
        steps = n * float(t_end)
        if abs(steps - round(steps)) > 1e-9:
            raise ValueError("t_end must be a multiple of the lattice spacing")
        return cls(1.0 / n, int(round(steps)))

    @classmethod
    def from_step(cls, dt, t_end):
        """Grid with spacing dt covering [0, t_end]; t_end/dt must be integral."""
        steps = float(t_end) / float(dt)
        if abs(steps - round(steps)) > 1e-9 * max(1.0, abs(steps)):
            raise ValueError("t_end must be a multiple of dt")
        return cls(float(dt), int(round(steps)))


@dataclass(frozen=True, eq=False)
class NoisePath:
    """One seeded realization of lattice increments.

    ``increments[k]`` is the noise accumulated over [t_k, t_{k+1}); the same
    (triplet, grid, seed) always reproduces the same array.
    """

    grid: TimeGrid
    increments: np.ndarray
    triplet: LevyTriplet
    seed: int

    def __post_init__(self):
        inc = np.asarray(self.increments, dtype=float)
        if inc.ndim == 1:
            inc = inc.reshape(-1, 1)
        inc = inc.copy()
        if inc.shape != (self.grid.n_steps, self.triplet.dim):
            raise ValueError(
                f"increments must have shape ({self.grid.n_steps}, "
                f"{self.triplet.dim}), got {inc.shape}"
            )
        inc.setflags(write=False)
        object.__setattr__(self, "increments", inc)
        object.__setattr__(self, "seed", int(self.seed))

    @property
    def dim(self):
        return self.triplet.dim


def generate_path(triplet: LevyTriplet, grid: TimeGrid, seed) -> NoisePath:
    """Draw a noise path: one increment with law exp(psi dt) per grid cell."""
    validate(triplet)
    rng = make_rng(int(seed))
    inc = sample_increments(triplet, grid.dt, grid.n_steps, rng)
    return NoisePath(grid, inc, triplet, int(seed))


def _values_at_starts(path: NoisePath, f: TestFunction):
    # index f's grid at the path's interval starts, requiring exact coverage
    starts = path.grid.interval_starts
    if f.t_end < path.grid.t_end - 1e-9:
        raise ValueError("test function grid does not cover the path")
    idx = np.rint(starts / f.dt).astype(int)
    if idx.max() >= f.times.size or np.max(np.abs(f.times[idx] - starts)) > 1e-9:
        raise ValueError("test function grid does not align with the path grid")
    return f.values[idx]


def pair(path: NoisePath, f: TestFunction):
    """Left endpoint pairing of a noise path with a test function.

    For scalar-valued f the component-wise sums sum_k f(t_k) dL_k are
    returned as a vector of length dim; for vector-valued f the full scalar
    pairing sum_k <f(t_k), dL_k> is returned as a float.
    """
    fvals = _values_at_starts(path, f)
    inc = path.increments
    if fvals.ndim == 1:
        return np.array(
            [fvals @ np.ascontiguousarray(inc[:, j]) for j in range(path.dim)]
        )
    if fvals.shape[1] != path.dim:
        raise ValueError("test function dimension does not match the noise")
    return float(np.einsum("kd,kd->", fvals, inc))


def empirical_cf(
    triplet: LevyTriplet, grid: TimeGrid, f: TestFunction, n_paths, seed
) -> complex:
    """Monte Carlo estimate of the characteristic functional.

    Averages exp(i <eta_j, f>) over independent seeded paths.  Paths are
    drawn in fixed-size chunks with sub-seeds derived from (seed, chunk), so
    the result is independent of any parallel scheduling.
    """
    validate(triplet)
    n_paths = int(n_paths)
    if n_paths < 1:
        raise ValueError("n_paths must be at least 1")
    dummy = NoisePath(
        grid, np.zeros((grid.n_steps, triplet.dim)), triplet, 0
    )
    fvals = _values_at_starts(dummy, f)
    if fvals.ndim == 1 and triplet.dim != 1:
        raise ValueError("scalar test function is ambiguous for dim > 1")
    acc = 0.0 + 0.0j
    k = grid.n_steps
    for ci, start, stop in chunked(n_paths):
        m = stop - start
        rng = sub_rng(seed, ci)
        inc = sample_increments(triplet, grid.dt, m * k, rng)
        inc = inc.reshape(m, k, triplet.dim)
        if fvals.ndim == 1:
            phases = inc[:, :, 0] @ fvals
        else:
            phases = np.einsum("mkd,kd->m", inc, fvals)
        acc += np.exp(1j * phases).sum()
    return complex(acc / n_paths)


def log_cf_riemann(triplet: LevyTriplet, f: TestFunction, n) -> complex:
    """Exact log characteristic functional of the scale-n lattice model.

    Returns sum_{t in (1/n)N intersect [0, T]} psi(f(t)) / n, the Riemann sum
    that converges to log C(f) as the lattice refines.
    """
    n = int(n)
    if n < 1:
        raise ValueError("lattice scale must be at least 1")
    count = int(np.floor(f.t_end * n + 1e-9))
    ts = np.arange(count + 1) / n
    vals = np.asarray(f.value_at(ts))
    if triplet.dim == 1 and vals.ndim == 2 and vals.shape[1] == 1:
        vals = vals[:, 0]
    return complex(np.sum(psi(triplet, vals)) / n)


def unit_interval_covariance(triplet: LevyTriplet) -> np.ndarray:
    """Covariance of the noise accumulated over a unit time interval.

    Sigma + z sum_i w_i s_i s_i^T, the diffusion part plus the second moment
    of the compound Poisson part.
    """
    cov = triplet.diffusion.copy()
    if triplet.jump_rate > 0.0 and triplet.n_jumps:
        cov = cov + triplet.jump_rate * np.einsum(
            "i,ij,ik->jk", triplet.jump_weights, triplet.jump_vectors, triplet.jump_vectors
        )
    return cov


def increment_fluctuation(triplet: LevyTriplet, n) -> float:
    """Analytic variance of a single scale-n lattice increment.

    (Sigma + z E[s s^T]) / n, reported as its trace for dim > 1.  Linearity
    in the cell width makes the value at 2n exactly half the value at n.
    """
    n = int(n)
    if n < 1:
        raise ValueError("lattice scale must be at least 1")
    return float(np.trace(unit_interval_covariance(triplet))) / n


def chi_transition(u, n):
    """Smooth monotone cut-off: 0 for u <= 0, 1 for u >= 1/n, cubic between."""
    u = np.asarray(u, dtype=float)
    x = np.clip(u * n, 0.0, 1.0)
    return x * x * (3.0 - 2.0 * x)


def causal_kernel_value(m, t, tprime):
    """The sharp response kernel 1_{t' <= t} exp(-m (t - t'))."""
    tprime = np.asarray(tprime, dtype=float)
    u = t - tprime
    return np.where(u >= 0.0, np.exp(-m * np.maximum(u, 0.0)), 0.0)


def mollified_kernel_value(m, t, n, tprime):
    """Pointwise value of the mollified kernel chi^n(t - t') exp(-m (t - t'))."""
    tprime = np.asarray(tprime, dtype=float)
    u = t - tprime
    safe = np.maximum(u, 0.0)
    return chi_transition(safe, n) * np.exp(-m * safe) * (u > 0.0)


def mollified_kernel(m, t, n, num_nodes=None) -> TestFunction:
    """Sample the mollified response kernel on [0, t] as a test function.

    The kernel rises smoothly from zero over the window [t - 1/n, t] and
    matches exp(-m (t - t')) below it, so it approximates the sharp causal
    kernel from below, nondecreasing in n at every t' < t.
    """
    m = float(m)
    t = float(t)
    n = int(n)
    if m <= 0.0 or t <= 0.0 or n < 1:
        raise ValueError("need m > 0, t > 0 and n >= 1")
    if num_nodes is None:
        num_nodes = max(1025, 32 * n + 1)
    times = np.linspace(0.0, t, int(num_nodes))
    values = mollified_kernel_value(m, t, n, times)
    return TestFunction(times, values, fn=lambda s: mollified_kernel_value(m, t, n, s))


def l2_cauchy_gap(triplet: LevyTriplet, m, t, n, n2) -> float:
    """Second moment of the noise paired with a kernel difference.

    For g = chi^n kernel - chi^{n2} kernel (dimension 1) the pairing has

        E[ eta(g)^2 ] = v integral g^2 dt' + mu^2 (integral g dt')^2

    with v = Sigma + z E[s^2] and mu = a + z E[s]; the integrals are computed
    by trapezoid on a grid fine enough to resolve both transition windows.
    The kernels differ only on a window of width O(1/min(n, n2)), so the gap
    vanishes as both scales refine: the mollified pairings are Cauchy in L2.
    """
    if triplet.dim != 1:
        raise ValueError("the L2 gap is defined for dimension 1")
    validate(triplet)
    n = int(n)
    n2 = int(n2)
    if n < 1 or n2 < 1:
        raise ValueError("lattice scales must be at least 1")
    if n == n2:
        raise ValueError("scales must differ")
    num = 64 * max(n, n2) + 1
    times = np.linspace(0.0, float(t), num)
    g = mollified_kernel_value(m, t, n, times) - mollified_kernel_value(m, t, n2, times)
    v = float(unit_interval_covariance(triplet)[0, 0])
    mu = float(triplet.drift[0])
    if triplet.jump_rate > 0.0 and triplet.n_jumps:
        mu += triplet.jump_rate * float(
            triplet.jump_weights @ triplet.jump_vectors[:, 0]
        )
    total = np.trapezoid(g, times)
    square = np.trapezoid(g * g, times)
    return float(v * square + (mu * total) ** 2)
