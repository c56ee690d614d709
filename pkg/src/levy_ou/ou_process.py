"""The damped linear response process X' = -m X + noise.

Variation of parameters gives the solution

    X_t = exp(-m t) x0 + integral_0^t exp(-m (t - t')) eta(t') dt',

with causal kernel G(t) = exp(-m t) 1_{t >= 0}.  This module provides that
kernel, exact Gaussian transition sampling, a noise-driven integrator, the
characteristic function of X_t for any driving triplet, the Gaussian
transition density (mean exp(-m t) x0, covariance (D/m)(1 - exp(-2 m t)) with
D = Sigma / 2), its small-m spreading limit, the integro-differential
generator, and a residual check of the heat equation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .levy_core import LevyTriplet, psi, sample_increments, validate
from .noise_field import NoisePath, TimeGrid
from .numerics import chunked, make_rng, psd_sqrt, sub_rng

__all__ = [
    "OUParams",
    "GreenKernel",
    "ProcessPath",
    "green",
    "simulate_exact_gaussian",
    "simulate_from_noise",
    "terminal_samples_exact",
    "terminal_samples_from_noise",
    "char_function_xt",
    "mehler_density",
    "brownian_density",
    "generator_apply",
    "jump_snap_error",
    "heat_residual",
]


@dataclass(frozen=True, eq=False)
class OUParams:
    """Mean reversion rate m > 0 and deterministic initial value x0."""

    m: float
    x0: np.ndarray

    def __post_init__(self):
        m = float(self.m)
        if not (np.isfinite(m) and m > 0.0):
            raise ValueError("m must be positive and finite")
        x0 = np.atleast_1d(np.asarray(self.x0, dtype=float)).copy()
        if x0.ndim != 1 or not np.all(np.isfinite(x0)):
            raise ValueError("x0 must be a finite vector")
        x0.setflags(write=False)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "x0", x0)

    @property
    def dim(self):
        return self.x0.size


def green(m, t):
    """Causal kernel G(t) = exp(-m t) for t >= 0 and exactly 0 for t < 0."""
    if not float(m) > 0.0:
        raise ValueError("m must be positive")
    t = np.asarray(t, dtype=float)
    out = np.where(t >= 0.0, np.exp(-m * np.maximum(t, 0.0)), 0.0)
    if out.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class GreenKernel:
    """Callable wrapper around the causal kernel for a fixed rate m."""

    m: float

    def __post_init__(self):
        if not float(self.m) > 0.0:
            raise ValueError("m must be positive")
        object.__setattr__(self, "m", float(self.m))

    def __call__(self, t):
        return green(self.m, t)


@dataclass(frozen=True, eq=False)
class ProcessPath:
    """States X(t_k) on a grid, with the inputs that produced them.

    ``kind`` records the simulator ("exact-gaussian" or "noise-driven");
    ``seed`` is None when the path was driven by an explicit noise path.
    """

    grid: TimeGrid
    states: np.ndarray
    params: OUParams
    triplet: LevyTriplet
    kind: str
    seed: int = None

    def __post_init__(self):
        states = np.asarray(self.states, dtype=float)
        if states.ndim == 1:
            states = states.reshape(-1, 1)
        states = states.copy()
        if states.shape != (self.grid.n_steps + 1, self.params.dim):
            raise ValueError(
                f"states must have shape ({self.grid.n_steps + 1}, "
                f"{self.params.dim}), got {states.shape}"
            )
        if not np.array_equal(states[0], self.params.x0):
            raise ValueError("states must start at x0")
        states.setflags(write=False)
        object.__setattr__(self, "states", states)


def _require_gaussian(triplet):
    if triplet.jump_rate != 0.0 or triplet.n_jumps:
        raise ValueError("triplet has jumps")


def _gaussian_step(params, triplet, dt):
    # exact one-step transition: decay, drift plateau, and noise factor
    alpha = np.exp(-params.m * dt)
    shift = triplet.drift * (1.0 - alpha) / params.m
    cov = triplet.diffusion * (1.0 - alpha * alpha) / (2.0 * params.m)
    return alpha, shift, psd_sqrt(cov)


def simulate_exact_gaussian(
    params: OUParams, triplet: LevyTriplet, grid: TimeGrid, seed
) -> ProcessPath:
    """Sample the process at grid nodes using the exact Gaussian transition.

    Requires a jump-free triplet.  Each step applies

        X_{k+1} = exp(-m dt) X_k + a (1 - exp(-m dt)) / m + G_k,

    where G_k is Gaussian with covariance Sigma (1 - exp(-2 m dt)) / (2 m),
    so every marginal has exactly the stationary-form law; the step size
    affects nothing but the set of recorded nodes.
    """
    validate(triplet)
    _require_gaussian(triplet)
    if triplet.dim != params.dim:
        raise ValueError("triplet and parameters disagree on dimension")
    alpha, shift, factor = _gaussian_step(params, triplet, grid.dt)
    rng = make_rng(int(seed))
    draws = rng.standard_normal((grid.n_steps, params.dim)) @ factor.T
    states = np.empty((grid.n_steps + 1, params.dim))
    states[0] = params.x0
    for k in range(grid.n_steps):
        states[k + 1] = alpha * states[k] + shift + draws[k]
    return ProcessPath(grid, states, params, triplet, "exact-gaussian", int(seed))


def terminal_samples_exact(
    params: OUParams, triplet: LevyTriplet, t, n_samples, seed, n_steps=1
) -> np.ndarray:
    """Ensemble of X_t samples from the exact Gaussian transition.

    Returns shape (n_samples, dim).  Sampling is chunked with sub-seeds
    derived from (seed, chunk index), so results do not depend on scheduling.
    """
    validate(triplet)
    _require_gaussian(triplet)
    t = float(t)
    if t <= 0.0:
        raise ValueError("t must be positive")
    n_steps = int(n_steps)
    alpha, shift, factor = _gaussian_step(params, triplet, t / n_steps)
    out = np.empty((int(n_samples), params.dim))
    for ci, start, stop in chunked(n_samples):
        m_chunk = stop - start
        rng = sub_rng(seed, ci)
        x = np.tile(params.x0, (m_chunk, 1))
        for _ in range(n_steps):
            x = alpha * x + shift + rng.standard_normal((m_chunk, params.dim)) @ factor.T
        out[start:stop] = x
    return out


def simulate_from_noise(params: OUParams, path: NoisePath) -> ProcessPath:
    """Integrate X' = -m X + eta along a noise path.

    The homogeneous decay is exact and each increment enters through the
    midpoint kernel weight,

        X_{k+1} = exp(-m dt) X_k + exp(-m dt / 2) dL_k,

    a second order quadrature of the stochastic convolution with no
    stability constraint.
    """
    if params.dim != path.dim:
        raise ValueError("noise and parameters disagree on dimension")
    dt = path.grid.dt
    alpha = np.exp(-params.m * dt)
    beta = np.exp(-params.m * dt / 2.0)
    states = np.empty((path.grid.n_steps + 1, params.dim))
    states[0] = params.x0
    inc = path.increments
    for k in range(path.grid.n_steps):
        states[k + 1] = alpha * states[k] + beta * inc[k]
    return ProcessPath(path.grid, states, params, path.triplet, "noise-driven", None)


def terminal_samples_from_noise(
    params: OUParams, triplet: LevyTriplet, grid: TimeGrid, n_paths, seed
) -> np.ndarray:
    """Ensemble of noise-driven X(t_end) values, shape (n_paths, dim).

    Applies the same recursion as simulate_from_noise to chunks of
    independently seeded paths.
    """
    validate(triplet)
    if triplet.dim != params.dim:
        raise ValueError("triplet and parameters disagree on dimension")
    dt = grid.dt
    k_steps = grid.n_steps
    alpha = np.exp(-params.m * dt)
    beta = np.exp(-params.m * dt / 2.0)
    out = np.empty((int(n_paths), params.dim))
    for ci, start, stop in chunked(n_paths):
        m_chunk = stop - start
        rng = sub_rng(seed, ci)
        inc = sample_increments(triplet, dt, m_chunk * k_steps, rng)
        inc = inc.reshape(m_chunk, k_steps, params.dim)
        x = np.tile(params.x0, (m_chunk, 1))
        for k in range(k_steps):
            x = alpha * x + beta * inc[:, k, :]
        out[start:stop] = x
    return out


def char_function_xt(
    params: OUParams, triplet: LevyTriplet, t, p, n_quad=2001
) -> complex:
    """Characteristic function of X_t.

    E[exp(i <p, X_t>)] = exp( i <x0, p> e^{-m t}
                              + integral_0^t psi(e^{-m (t - t')} p) dt' ),

    with the integral computed by trapezoid on n_quad uniform nodes.  For a
    pure Gaussian triplet the exact exponent is
    -<p, Sigma p> (1 - exp(-2 m t)) / (4 m); the trapezoid error scales like
    (t / n_quad)^2 times m <p, Sigma p>, so accuracy targets must pick
    n_quad accordingly.
    """
    validate(triplet)
    t = float(t)
    if t <= 0.0:
        raise ValueError("t must be positive")
    n_quad = int(n_quad)
    if n_quad < 2:
        raise ValueError("n_quad must be at least 2")
    p = np.atleast_1d(np.asarray(p, dtype=float))
    if p.shape != (params.dim,):
        raise ValueError(f"p must have {params.dim} components")
    us = np.linspace(0.0, t, n_quad)
    decay = np.exp(-params.m * (t - us))
    ks = decay[:, None] * p[None, :]
    if triplet.dim == 1:
        vals = psi(triplet, ks[:, 0])
    else:
        vals = psi(triplet, ks)
    exponent = 1j * float(params.x0 @ p) * np.exp(-params.m * t)
    exponent += np.trapezoid(vals, dx=t / (n_quad - 1))
    return complex(np.exp(exponent))


def _coerce_spd(d_mat, dim):
    d_mat = np.asarray(d_mat, dtype=float)
    if d_mat.ndim == 0:
        d_mat = d_mat.reshape(1, 1)
    if d_mat.shape != (dim, dim):
        raise ValueError(f"D must have shape ({dim}, {dim})")
    if not np.allclose(d_mat, d_mat.T, rtol=0.0, atol=1e-12):
        raise ValueError("D must be symmetric")
    if np.linalg.eigvalsh(d_mat).min() <= 0.0:
        raise ValueError("D must be positive definite")
    return d_mat


def mehler_density(params: OUParams, D, t, x):
    """Gaussian transition density of the process driven by diffusion D.

    The law of X_t is Gaussian with mean exp(-m t) x0 and covariance
    (D / m)(1 - exp(-2 m t)); D relates to the sampling convention by
    D = Sigma / 2.  Accepts a single point or an array of points (last axis
    = dim for dim > 1, any shape for dim 1).
    """
    t = float(t)
    if t <= 0.0:
        raise ValueError("t must be positive")
    d_mat = _coerce_spd(D, params.dim)
    spread = -np.expm1(-2.0 * params.m * t) / params.m
    cov = d_mat * spread
    mean = np.exp(-params.m * t) * params.x0
    return _gaussian_density(cov, mean, x, params.dim)


def brownian_density(D, t, x, x0):
    """Spreading Gaussian kernel (4 pi t)^{-d/2} det(D)^{-1/2}
    exp( -<x - x0, D^{-1} (x - x0)> / (4 t) ).

    This is the m -> 0 limit of the transition density: a Gaussian centred
    at x0 with covariance 2 D t.
    """
    t = float(t)
    if t <= 0.0:
        raise ValueError("t must be positive")
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    dim = x0.size
    d_mat = _coerce_spd(D, dim)
    return _gaussian_density(2.0 * t * d_mat, x0, x, dim)


def _gaussian_density(cov, mean, x, dim):
    x = np.asarray(x, dtype=float)
    if dim == 1:
        var = float(cov[0, 0])
        dx = x - float(mean[0])
        out = np.exp(-0.5 * dx * dx / var) / np.sqrt(2.0 * np.pi * var)
        if out.ndim == 0:
            return float(out)
        return out
    if x.shape[-1] != dim:
        raise ValueError(f"x must have {dim} components on its last axis")
    scalar = x.ndim == 1
    pts = x.reshape(-1, dim) - mean
    sol = np.linalg.solve(cov, pts.T).T
    quad = np.einsum("nd,nd->n", pts, sol)
    sign, logdet = np.linalg.slogdet(cov)
    if sign <= 0:
        raise ValueError("D must be positive definite")
    out = np.exp(-0.5 * quad - 0.5 * (logdet + dim * np.log(2.0 * np.pi)))
    if scalar:
        return float(out[0])
    return out.reshape(x.shape[:-1])


def generator_apply(triplet: LevyTriplet, x_nodes, values, x_index):
    """Apply the noise generator to a sampled function at one grid node.

    Central differences give

        -a P'(x) + D P''(x) + z sum_i w_i (P(x + s_i) - P(x)),

    with D = Sigma / 2, both stencils second order in the spacing h.  Jump
    vectors are rounded to the nearest grid node; the rounding error is
    available from jump_snap_error.  Dimension 1 only.
    """
    if triplet.dim != 1:
        raise ValueError("grid generator is implemented for dimension 1")
    validate(triplet)
    x_nodes = np.asarray(x_nodes, dtype=float)
    values = np.asarray(values)
    if x_nodes.ndim != 1 or x_nodes.size < 3:
        raise ValueError("need a one-dimensional grid with at least 3 nodes")
    if values.shape != x_nodes.shape:
        raise ValueError("values must be sampled on the grid")
    steps = np.diff(x_nodes)
    h = steps[0]
    if not h > 0.0 or np.max(np.abs(steps - h)) > 1e-9 * h:
        raise ValueError("grid must be uniform and increasing")
    i = int(x_index)
    if i < 1 or i > x_nodes.size - 2:
        raise ValueError("x too close to the grid boundary for the stencil")
    a = float(triplet.drift[0])
    d_coef = 0.5 * float(triplet.diffusion[0, 0])
    out = -a * (values[i + 1] - values[i - 1]) / (2.0 * h)
    out = out + d_coef * (values[i + 1] - 2.0 * values[i] + values[i - 1]) / (h * h)
    if triplet.jump_rate > 0.0 and triplet.n_jumps:
        for w, s in zip(triplet.jump_weights, triplet.jump_vectors[:, 0]):
            j = i + int(np.rint(s / h))
            if j < 0 or j >= x_nodes.size:
                raise ValueError("jump leaves the grid")
            out = out + triplet.jump_rate * w * (values[j] - values[i])
    return complex(out) if np.iscomplexobj(values) else float(out)


def jump_snap_error(triplet: LevyTriplet, h) -> float:
    """Largest distance between a jump vector and its nearest grid node."""
    if triplet.n_jumps == 0:
        return 0.0
    s = triplet.jump_vectors[:, 0]
    h = float(h)
    return float(np.max(np.abs(s - np.rint(s / h) * h)))


def heat_residual(D, x_nodes, t_values, x0=0.0, time_step=1e-4, field=None) -> float:
    """Max residual of the forward equation d/dt P = D d2/dx2 P.

    ``field(t)`` must return P(t, .) sampled on x_nodes; it defaults to the
    spreading Gaussian kernel brownian_density(D, t, ., x0).  Time uses a
    centered difference with the given step, space the standard three point
    stencil, both second order, so the residual of an exact solution shrinks
    about fourfold when the spatial step is halved (with the time step small
    enough not to dominate).  Returns max |residual| over interior nodes and
    all requested times.
    """
    x_nodes = np.asarray(x_nodes, dtype=float)
    steps = np.diff(x_nodes)
    h = steps[0]
    if not h > 0.0 or np.max(np.abs(steps - h)) > 1e-9 * h:
        raise ValueError("grid must be uniform and increasing")
    tau = float(time_step)
    if tau <= 0.0:
        raise ValueError("time_step must be positive")
    d_coef = float(np.asarray(D, dtype=float).reshape(-1)[0])
    default_field = field is None
    if default_field:
        if d_coef <= 0.0:
            raise ValueError("D must be positive definite")

        def field(tt):
            return brownian_density(D, tt, x_nodes, x0)

    worst = 0.0
    for t in np.atleast_1d(np.asarray(t_values, dtype=float)):
        if default_field and t - tau <= 0.0:
            raise ValueError("t must exceed the time step")
        p_minus = np.asarray(field(t - tau), dtype=float)
        p_mid = np.asarray(field(t), dtype=float)
        p_plus = np.asarray(field(t + tau), dtype=float)
        dpdt = (p_plus - p_minus) / (2.0 * tau)
        lap = (p_mid[2:] - 2.0 * p_mid[1:-1] + p_mid[:-2]) / (h * h)
        resid = dpdt[1:-1] - d_coef * lap
        worst = max(worst, float(np.max(np.abs(resid))))
    return worst
