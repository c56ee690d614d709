"""Runnable validation suite.

Ten numbered checks exercise the library end to end: sampler laws against
closed-form densities and characteristic functions, lattice convergence of
the log characteristic functional, exact halving of increment fluctuations,
the L2 Cauchy property of the mollified kernels, exactness and remainder
order of the tree series, tree counts against a brute-force generator, and
the second-order heat-equation residual.  Each check returns a
CriterionResult; run_all executes any subset and format_result renders the
one-line verdicts printed by the command line front end and the test suite.

Statistical checks use fixed seeds so the suite is deterministic; the
tolerances come from analytic error bands (Monte Carlo standard errors,
quadrature truncation orders) with wide margins, not from tuning.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .levy_core import LevyTriplet, TestFunction, char_functional, sample_increments
from .noise_field import (
    TimeGrid,
    generate_path,
    increment_fluctuation,
    l2_cauchy_gap,
    log_cf_riemann,
    unit_interval_covariance,
)
from .numerics import fit_loglog_slope, make_rng
from .ou_process import (
    OUParams,
    brownian_density,
    char_function_xt,
    heat_residual,
    mehler_density,
    simulate_from_noise,
    terminal_samples_exact,
    terminal_samples_from_noise,
)
from .tree_expansion import enumerate_trees, truncated_series

__all__ = [
    "CriterionResult",
    "brute_force_tree_count",
    "run_all",
    "format_result",
    "N_CRITERIA",
]


@dataclass(frozen=True)
class CriterionResult:
    index: int
    name: str
    passed: bool
    detail: str
    seconds: float


def _jumpy_triplet():
    # diffusion 0.5 plus unit-rate jumps +1 / -2 with equal weight;
    # unit-interval variance 0.5 + (0.5 + 2.0) = 3
    return LevyTriplet(1, 0.0, 0.5, 1.0, [0.5, 0.5], [1.0, -2.0])


def _criterion_1():
    """Exact transition sampler against the Gaussian transition law."""
    params = OUParams(1.0, 2.0)
    triplet = LevyTriplet.gaussian(1.0)
    t = 1.0
    n = 100000
    samples = terminal_samples_exact(params, triplet, t, n, seed=2001)[:, 0]
    mean = 2.0 * np.exp(-t)
    sd = np.sqrt(0.5 * -np.expm1(-2.0 * t))
    ks = stats.kstest(samples, "norm", args=(mean, sd)).statistic
    return ks < 0.01, f"KS distance {ks:.4f} < 0.01 on {n} one-step draws"


def _criterion_2():
    """Empirical characteristic function of X_1 against the quadrature form."""
    triplet = _jumpy_triplet()
    params = OUParams(1.0, 0.0)
    grid = TimeGrid.from_step(1e-3, 1.0)
    n = 100000
    samples = terminal_samples_from_noise(params, triplet, grid, n, seed=2002)[:, 0]
    ps = np.linspace(-5.0, 5.0, 21)
    emp = np.exp(1j * samples[:, None] * ps[None, :]).mean(axis=0)
    ana = np.array(
        [char_function_xt(params, triplet, 1.0, [pv], n_quad=4001) for pv in ps]
    )
    err = float(np.max(np.abs(emp - ana)))
    tol = 5.0 / np.sqrt(n)
    return err < tol, f"max CF gap {err:.4f} < {tol:.4f} over {ps.size} frequencies"


def _criterion_3():
    """Small-damping transition density against the spreading kernel."""
    xs = np.linspace(-5.0, 5.0, 401)
    meh = mehler_density(OUParams(1e-8, 0.0), 0.5, 1.0, xs)
    bro = brownian_density(0.5, 1.0, xs, 0.0)
    rel = float(np.max(np.abs(meh - bro) / bro))
    return rel < 1e-4, f"max relative gap {rel:.2e} < 1e-4 on 401 nodes"


def _criterion_4():
    """Lattice log characteristic functional converges to the integral."""
    triplet = LevyTriplet.gaussian(1.0)
    f = TestFunction.from_callable(lambda t: np.exp(-t), 10.0, 10001)
    log_ref = complex(np.log(char_functional(triplet, f)))
    ns = np.array([10, 100, 1000, 10000])
    gaps = np.array([abs(log_cf_riemann(triplet, f, n) - log_ref) for n in ns])
    slope = fit_loglog_slope(ns, gaps)
    ok = (-slope >= 0.8) and gaps[-1] < 1e-4
    return ok, f"decay order {-slope:.2f} >= 0.8, gap at n=10^4 {gaps[-1]:.2e} < 1e-4"


def _criterion_5():
    """Increment fluctuations halve exactly and match a sampled variance."""
    triplet = _jumpy_triplet()
    exact = all(
        increment_fluctuation(triplet, 2 * n) == increment_fluctuation(triplet, n) / 2.0
        for n in (1, 2, 3, 5, 10, 50, 100)
    )
    n_lattice = 100
    dt = 1.0 / n_lattice
    n_draws = 100000
    draws = sample_increments(triplet, dt, n_draws, make_rng(2005))[:, 0]
    var = float(np.var(draws, ddof=1))
    kappa2 = float(unit_interval_covariance(triplet)[0, 0]) * dt
    s4 = float(triplet.jump_weights @ triplet.jump_vectors[:, 0] ** 4)
    kappa4 = triplet.jump_rate * dt * s4
    band = 3.0 * np.sqrt((kappa4 + 2.0 * kappa2**2) / n_draws)
    dev = abs(var - kappa2)
    ok = exact and dev < band
    return ok, (
        f"exact halving on 7 lattice pairs; sampled variance off by "
        f"{dev:.2e} < {band:.2e}"
    )


def _criterion_6():
    """Mollified kernels are L2 Cauchy with at least first-order decay."""
    triplet = LevyTriplet.gaussian(1.0)
    g1 = l2_cauchy_gap(triplet, 1.0, 1.0, 8, 16)
    g2 = l2_cauchy_gap(triplet, 1.0, 1.0, 64, 128)
    ok = g2 < g1 and g2 <= g1 / 4.0
    return ok, f"gap(8,16)={g1:.3e}, gap(64,128)={g2:.3e}, ratio {g1 / g2:.1f} >= 4"


def _criterion_7():
    """Zero-coupling tree series reproduces the linear integrator."""
    params = OUParams(1.0, 0.5)
    triplet = LevyTriplet.gaussian(0.25)
    grid = TimeGrid.from_step(1e-3, 1.0)
    path = generate_path(triplet, grid, seed=2007)
    report = truncated_series(params, triplet, 0.0, 2, 3, path, 1.0)
    linear = float(simulate_from_noise(params, path).states[-1, 0])
    gap = abs(report.total - linear)
    return gap <= 1e-12, f"|series - linear integrator| = {gap:.2e} <= 1e-12"


def _criterion_8():
    """Truncation error scales like the next power of the coupling."""
    params = OUParams(1.0, 0.5)
    triplet = LevyTriplet.gaussian(0.25)
    grid = TimeGrid.from_step(1e-3, 1.0)
    path = generate_path(triplet, grid, seed=2008)
    lams = np.array([0.05, 0.1, 0.2])
    errs = np.array(
        [
            truncated_series(params, triplet, lam, 2, 2, path, 1.0, refine=4).error
            for lam in lams
        ]
    )
    slope = fit_loglog_slope(lams, errs)
    return 2.6 <= slope <= 3.4, f"remainder order {slope:.2f} in [2.6, 3.4]"


def brute_force_tree_count(p, i):
    """Count plane rooted trees by exhausting preorder symbol strings.

    A string over inner '*' and leaves 'o', '#' is a valid preorder walk
    exactly when the count of pending child slots stays positive before
    every symbol and ends at zero; an inner symbol turns one slot into p.
    Exhaustive over all 3^(p i + 1) strings, sharing nothing with the
    recursive enumerator.
    """
    p = int(p)
    i = int(i)
    count = 0
    for word in itertools.product("*o#", repeat=p * i + 1):
        need = 1
        inner = 0
        for ch in word:
            if need == 0:
                break
            if ch == "*":
                need += p - 1
                inner += 1
            else:
                need -= 1
        else:
            if need == 0 and inner == i:
                count += 1
    return count


def _criterion_9():
    """Tree enumeration counts match the brute-force generator."""
    cases = [(2, 0, 2), (2, 1, 4), (2, 2, 16), (2, 3, 80), (3, 1, 8)]
    found = []
    ok = True
    for p, i, expected in cases:
        n_enum = len(enumerate_trees(p, i))
        n_brute = brute_force_tree_count(p, i)
        found.append(n_enum)
        ok = ok and n_enum == expected == n_brute
    labels = ", ".join(f"(p={p},i={i})->{n}" for (p, i, _), n in zip(cases, found))
    return ok, f"{labels} all equal to brute force"


def _criterion_10():
    """Heat-equation residual of the exact kernel shrinks at second order."""
    coarse = np.linspace(-6.0, 6.0, 301)
    fine = np.linspace(-6.0, 6.0, 601)
    r_coarse = heat_residual(0.5, coarse, [1.0])
    r_fine = heat_residual(0.5, fine, [1.0])
    ratio = r_coarse / r_fine
    ok = 3.2 <= ratio <= 4.8 and r_fine < 1e-3
    return ok, (
        f"residual ratio {ratio:.2f} in [3.2, 4.8], max {r_fine:.2e} < 1e-3 at h=0.02"
    )


_CRITERIA = (
    ("transition law of the exact sampler", _criterion_1),
    ("terminal characteristic function, ensemble vs quadrature", _criterion_2),
    ("small-damping limit of the transition density", _criterion_3),
    ("lattice convergence of the log characteristic functional", _criterion_4),
    ("vanishing increment fluctuations", _criterion_5),
    ("L2 Cauchy property of the mollified kernels", _criterion_6),
    ("zero-coupling exactness of the tree series", _criterion_7),
    ("remainder order of the truncated tree series", _criterion_8),
    ("tree counts against brute force", _criterion_9),
    ("second-order heat-equation residual", _criterion_10),
)

N_CRITERIA = len(_CRITERIA)


def run_criterion(index) -> CriterionResult:
    """Run one numbered check (1-based) and time it."""
    index = int(index)
    if index < 1 or index > N_CRITERIA:
        raise ValueError(f"criterion index must be in 1..{N_CRITERIA}")
    name, func = _CRITERIA[index - 1]
    start = time.perf_counter()
    try:
        passed, detail = func()
    except Exception as exc:
        passed, detail = False, f"raised {type(exc).__name__}: {exc}"
    seconds = time.perf_counter() - start
    return CriterionResult(index, name, bool(passed), detail, seconds)


def run_all(indices=None):
    """Run the numbered checks (all by default) and return their results."""
    if indices is None:
        indices = range(1, N_CRITERIA + 1)
    return [run_criterion(i) for i in indices]


def format_result(result: CriterionResult) -> str:
    status = "PASS" if result.passed else "FAIL"
    return (
        f"[{result.index:2d}] {status}  {result.name}: "
        f"{result.detail}  ({result.seconds:.2f} s)"
    )
