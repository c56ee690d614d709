"""Levy noise fields, the damped linear response process they drive, and a
rooted-tree expansion of its nonlinear perturbation.

The package splits into construction of the noise from its characteristic
exponent (levy_core), lattice noise paths and the characteristic functional
(noise_field), the response process with its closed-form laws (ou_process),
the tree series with independent integrator oracles (tree_expansion), the
validation suite (acceptance), and a command line front end (cli).
"""

from __future__ import annotations

__version__ = "0.1.0"

from .levy_core import (
    LevyTriplet,
    TestFunction,
    char_functional,
    psi,
    sample_increment,
    sample_increments,
    validate,
)
from .noise_field import (
    NoisePath,
    TimeGrid,
    causal_kernel_value,
    chi_transition,
    empirical_cf,
    generate_path,
    increment_fluctuation,
    l2_cauchy_gap,
    log_cf_riemann,
    mollified_kernel,
    mollified_kernel_value,
    pair,
    unit_interval_covariance,
)
from .numerics import fit_loglog_slope, make_rng, psd_sqrt, sub_rng
from .ou_process import (
    GreenKernel,
    OUParams,
    ProcessPath,
    brownian_density,
    char_function_xt,
    generator_apply,
    green,
    heat_residual,
    jump_snap_error,
    mehler_density,
    simulate_exact_gaussian,
    simulate_from_noise,
    terminal_samples_exact,
    terminal_samples_from_noise,
)
from .tree_expansion import (
    Inner,
    LeafInit,
    LeafNoise,
    SeriesReport,
    Tree,
    enumerate_trees,
    evaluate_tree,
    parse_tree,
    reference_solution,
    render_tree,
    truncated_series,
)

__all__ = [
    "__version__",
    "LevyTriplet",
    "TestFunction",
    "char_functional",
    "psi",
    "sample_increment",
    "sample_increments",
    "validate",
    "NoisePath",
    "TimeGrid",
    "causal_kernel_value",
    "chi_transition",
    "empirical_cf",
    "generate_path",
    "increment_fluctuation",
    "l2_cauchy_gap",
    "log_cf_riemann",
    "mollified_kernel",
    "mollified_kernel_value",
    "pair",
    "unit_interval_covariance",
    "fit_loglog_slope",
    "make_rng",
    "psd_sqrt",
    "sub_rng",
    "GreenKernel",
    "OUParams",
    "ProcessPath",
    "brownian_density",
    "char_function_xt",
    "generator_apply",
    "green",
    "heat_residual",
    "jump_snap_error",
    "mehler_density",
    "simulate_exact_gaussian",
    "simulate_from_noise",
    "terminal_samples_exact",
    "terminal_samples_from_noise",
    "Inner",
    "LeafInit",
    "LeafNoise",
    "SeriesReport",
    "Tree",
    "enumerate_trees",
    "evaluate_tree",
    "parse_tree",
    "reference_solution",
    "render_tree",
    "truncated_series",
]
