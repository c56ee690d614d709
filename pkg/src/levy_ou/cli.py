"""Command line front end.

Subcommands cover the whole library: noise paths and the lattice
characteristic-functional check, process simulation (exact Gaussian or
noise-driven, single paths or ensembles), closed-form densities, the
characteristic function of X_t, the generator and heat-equation residuals,
tree enumeration and series evaluation, and the validation suite.

Every run is deterministic given (argv, input files): outputs carry no
timestamps, ensembles use the chunked sub-seeding scheme, and --threads
never changes bytes.  Results go to --out (or standard output); a JSON
metadata record with the fully resolved configuration travels with them,
as a .meta.json sidecar next to a file or on standard error otherwise.
Numeric CSV cells use repr round-trip precision.

Exit codes: 0 success, 1 numerical failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .acceptance import format_result, run_all
from .levy_core import LevyTriplet, TestFunction, char_functional
from .levy_core import validate as validate_triplet
from .noise_field import TimeGrid, generate_path, log_cf_riemann
from .ou_process import (
    OUParams,
    brownian_density,
    char_function_xt,
    generator_apply,
    heat_residual,
    mehler_density,
    simulate_exact_gaussian,
    simulate_from_noise,
    terminal_samples_exact,
    terminal_samples_from_noise,
)
from .tree_expansion import enumerate_trees, render_tree, truncated_series

__all__ = ["main"]


class ConfigError(Exception):
    """Bad flags or input files; mapped to exit code 2."""


def _parse_float_list(text, flag):
    try:
        return [float(part) for part in str(text).split(",") if part != ""]
    except ValueError as exc:
        raise ConfigError(f"{flag} expects comma-separated numbers: {exc}") from exc


def _parse_int_list(text, flag):
    try:
        return [int(part) for part in str(text).split(",") if part != ""]
    except ValueError as exc:
        raise ConfigError(f"{flag} expects comma-separated integers: {exc}") from exc


def _load_triplet(path):
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read triplet file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"triplet file {path} is not valid JSON: {exc}") from exc
    try:
        triplet = LevyTriplet.from_dict(doc)
        validate_triplet(triplet)
    except ValueError as exc:
        raise ConfigError(f"invalid triplet in {path}: {exc}") from exc
    return triplet


def _triplet_or_default(args, default):
    if getattr(args, "triplet", None):
        return _load_triplet(args.triplet)
    return default


def _triplet_hash(triplet):
    blob = json.dumps(triplet.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _meta(args, **extra):
    cfg = {}
    for key, value in sorted(vars(args).items()):
        if key == "func" or callable(value):
            continue
        cfg[key] = value
    command = args.cmd
    if getattr(args, "tree_cmd", None):
        command = f"{command} {args.tree_cmd}"
    meta = {
        "tool": "levy-ou",
        "version": __version__,
        "command": command,
        "seed": args.seed,
        "config": cfg,
    }
    meta.update(extra)
    return meta


def _fmt_cell(value):
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _json_cell(value):
    if isinstance(value, str):
        return value if value else None
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    return float(value)


def _write_payload(args, text):
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_meta(args, meta):
    if args.out:
        blob = json.dumps(meta, sort_keys=True, indent=2) + "\n"
        Path(args.out + ".meta.json").write_text(blob)
    else:
        sys.stderr.write(json.dumps(meta, sort_keys=True) + "\n")


def _emit_table(args, header, rows, meta):
    if args.format == "json":
        doc = {
            "meta": meta,
            "columns": list(header),
            "rows": [[_json_cell(c) for c in row] for row in rows],
        }
        _write_payload(args, json.dumps(doc, sort_keys=True, indent=2) + "\n")
        return
    lines = [",".join(header)]
    lines.extend(",".join(_fmt_cell(c) for c in row) for row in rows)
    _write_payload(args, "\n".join(lines) + "\n")
    _emit_meta(args, meta)


def _emit_doc(args, results, meta):
    payload = {"meta": meta, "results": results}
    _write_payload(args, json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _grid_from_args(args):
    if args.t_end is None:
        raise ConfigError("path output needs --t-end")
    if args.n is not None and args.dt is not None:
        raise ConfigError("give --n or --dt, not both")
    try:
        if args.dt is not None:
            return TimeGrid.from_step(float(args.dt), float(args.t_end))
        if args.n is not None:
            n = int(args.n)
            if n < 1:
                raise ConfigError("--n must be a positive integer")
            return TimeGrid.from_step(float(args.t_end) / n, float(args.t_end))
    except ValueError as exc:
        raise ConfigError(f"bad grid: {exc}") from exc
    raise ConfigError("path output needs --n or --dt")


def cmd_noise(args) -> int:
    if args.check_cf:
        return _noise_check_cf(args)
    if not args.triplet:
        raise ConfigError("noise needs --triplet (or --check-cf)")
    triplet = _load_triplet(args.triplet)
    grid = _grid_from_args(args)
    path = generate_path(triplet, grid, args.seed)
    header = ["t"] + [f"dL_{j + 1}" for j in range(triplet.dim)]
    starts = grid.interval_starts
    rows = [[starts[k], *path.increments[k]] for k in range(grid.n_steps)]
    meta = _meta(args, triplet=triplet.to_dict(), triplet_hash=_triplet_hash(triplet))
    _emit_table(args, header, rows, meta)
    return 0


def _noise_check_cf(args) -> int:
    triplet = _triplet_or_default(args, LevyTriplet.gaussian(1.0))
    t_end = 10.0 if args.t_end is None else float(args.t_end)
    num = int(args.num_nodes)
    if args.f == "exp-decay":
        f = TestFunction.from_callable(lambda t: np.exp(-t), t_end, num)
    else:
        f = TestFunction.constant(1.0, t_end, num=num)
    ns = _parse_int_list(args.n or "10,100,1000", "--n")
    if not ns or min(ns) < 1:
        raise ConfigError("--n expects positive lattice densities")
    log_ref = complex(np.log(char_functional(triplet, f)))
    rows = []
    for n in ns:
        gap = abs(log_cf_riemann(triplet, f, n) - log_ref)
        rows.append([n, gap])
    meta = _meta(
        args, triplet=triplet.to_dict(), triplet_hash=_triplet_hash(triplet)
    )
    _emit_table(args, ["n", "gap"], rows, meta)
    return 0


def cmd_simulate(args) -> int:
    triplet = _triplet_or_default(args, LevyTriplet.gaussian(1.0))
    params = OUParams(args.m, args.x0)
    if args.exact and (triplet.jump_rate != 0.0 or triplet.n_jumps > 0):
        raise ConfigError("--exact requires a jump-free triplet")
    meta_extra = {
        "triplet": triplet.to_dict(),
        "triplet_hash": _triplet_hash(triplet),
    }
    if args.ensemble is not None:
        if args.ensemble < 1:
            raise ConfigError("--ensemble must be positive")
        t = float(args.t)
        if args.exact:
            samples = terminal_samples_exact(
                params, triplet, t, args.ensemble, args.seed, n_steps=args.steps
            )
        else:
            dt = 1e-3 if args.dt is None else float(args.dt)
            try:
                grid = TimeGrid.from_step(dt, t)
            except ValueError as exc:
                raise ConfigError(f"bad grid: {exc}") from exc
            samples = terminal_samples_from_noise(
                params, triplet, grid, args.ensemble, args.seed
            )
        if args.summary:
            var = samples.var(axis=0, ddof=1)
            doc = {
                "n": int(args.ensemble),
                "t": t,
                "mean": samples.mean(axis=0).tolist(),
                "variance": var.tolist(),
                "stderr": np.sqrt(var / args.ensemble).tolist(),
            }
            _emit_doc(args, doc, _meta(args, **meta_extra))
            return 0
        header = [f"x_{j + 1}" for j in range(params.dim)]
        rows = [list(row) for row in samples]
        _emit_table(args, header, rows, _meta(args, **meta_extra))
        return 0
    grid = _grid_from_args(args)
    if args.exact:
        proc = simulate_exact_gaussian(params, triplet, grid, args.seed)
    else:
        proc = simulate_from_noise(params, generate_path(triplet, grid, args.seed))
    header = ["t"] + [f"x_{j + 1}" for j in range(params.dim)]
    nodes = grid.nodes
    rows = [[nodes[k], *proc.states[k]] for k in range(grid.n_steps + 1)]
    _emit_table(args, header, rows, _meta(args, **meta_extra))
    return 0


def cmd_density(args) -> int:
    if args.x_nodes < 2:
        raise ConfigError("--x-nodes must be at least 2")
    xs = np.linspace(args.x_min, args.x_max, args.x_nodes)
    if args.mehler:
        dens = mehler_density(OUParams(args.m, args.x0), args.D, args.t, xs)
    else:
        dens = brownian_density(args.D, args.t, xs, args.x0)
    header = ["x", "density"]
    columns = [xs, dens]
    extra = {}
    if args.compare_brownian:
        if not args.mehler:
            raise ConfigError("--compare-brownian only applies to --mehler")
        bro = brownian_density(args.D, args.t, xs, args.x0)
        rel = float(np.max(np.abs(dens - bro) / bro))
        header.append("brownian")
        columns.append(bro)
        extra["max_relative_gap"] = rel
        sys.stderr.write(f"max relative gap {rel!r}\n")
    rows = [list(row) for row in zip(*columns)]
    _emit_table(args, header, rows, _meta(args, **extra))
    return 0


def cmd_charfn(args) -> int:
    triplet = _triplet_or_default(args, LevyTriplet.gaussian(1.0))
    params = OUParams(args.m, args.x0)
    if args.p is not None:
        ps = np.asarray(_parse_float_list(args.p, "--p"))
    else:
        if args.p_nodes < 1:
            raise ConfigError("--p-nodes must be positive")
        ps = np.linspace(args.p_min, args.p_max, args.p_nodes)
    if ps.size == 0:
        raise ConfigError("empty frequency grid")
    vals = np.array(
        [
            char_function_xt(params, triplet, args.t, [pv], n_quad=args.n_quad)
            for pv in ps
        ]
    )
    header = ["p", "re", "im"]
    columns = [ps, vals.real, vals.imag]
    if args.empirical:
        dt = 1e-3 if args.dt is None else float(args.dt)
        try:
            grid = TimeGrid.from_step(dt, float(args.t))
        except ValueError as exc:
            raise ConfigError(f"bad grid: {exc}") from exc
        samples = terminal_samples_from_noise(
            params, triplet, grid, args.ensemble, args.seed
        )[:, 0]
        emp = np.exp(1j * samples[:, None] * ps[None, :]).mean(axis=0)
        header.extend(["emp_re", "emp_im"])
        columns.extend([emp.real, emp.imag])
    rows = [list(row) for row in zip(*columns)]
    meta = _meta(args, triplet=triplet.to_dict(), triplet_hash=_triplet_hash(triplet))
    _emit_table(args, header, rows, meta)
    return 0


def cmd_generator(args) -> int:
    if args.heat:
        return _generator_heat(args)
    triplet = _triplet_or_default(args, LevyTriplet.gaussian(1.0))
    if args.x_nodes < 3:
        raise ConfigError("--x-nodes must be at least 3")
    xs = np.linspace(args.x_min, args.x_max, args.x_nodes)
    if args.gen_func == "const":
        values = np.ones_like(xs)
    elif args.gen_func == "square":
        values = xs * xs
    else:
        values = np.cos(xs)
    # restrict to nodes whose stencil and jump targets stay on the grid
    h = xs[1] - xs[0]
    lo, hi = 1, xs.size - 2
    for s in triplet.jump_vectors[:, 0] if triplet.n_jumps else []:
        shift = int(np.rint(s / h))
        lo = max(lo, -shift)
        hi = min(hi, xs.size - 1 - shift)
    if lo > hi:
        raise ConfigError("no interior node keeps every jump on the grid")
    rows = [
        [xs[i], generator_apply(triplet, xs, values, i)] for i in range(lo, hi + 1)
    ]
    meta = _meta(args, triplet=triplet.to_dict(), triplet_hash=_triplet_hash(triplet))
    _emit_table(args, ["x", "value"], rows, meta)
    return 0


def _generator_heat(args) -> int:
    hs = _parse_float_list(args.h, "--h")
    if not hs or min(hs) <= 0.0:
        raise ConfigError("--h expects positive spacings")
    span = float(args.x_max) - float(args.x_min)
    rows = []
    prev = None
    for h in hs:
        count = int(round(span / h)) + 1
        if count < 3 or abs((count - 1) * h - span) > 1e-9 * max(1.0, span):
            raise ConfigError(
                f"spacing {h} does not tile [{args.x_min}, {args.x_max}]"
            )
        xs = np.linspace(args.x_min, args.x_max, count)
        res = heat_residual(
            args.D, xs, [args.t], x0=args.x0, time_step=args.time_step
        )
        ratio = "" if prev is None else prev / res
        rows.append([h, res, ratio])
        prev = res
    _emit_table(args, ["h", "residual", "ratio"], rows, _meta(args))
    return 0


def cmd_trees(args) -> int:
    if args.tree_cmd == "enumerate":
        return _trees_enumerate(args)
    if args.tree_cmd == "evaluate":
        return _trees_evaluate(args)
    return _trees_order_check(args)


def _trees_enumerate(args) -> int:
    trees = enumerate_trees(args.p, args.i)
    lines = [render_tree(tree) for tree in trees]
    text = "\n".join(lines) + "\n" if lines else ""
    if args.out:
        Path(args.out).write_text(text)
        _emit_meta(args, _meta(args, count=len(trees)))
    else:
        sys.stdout.write(text)
    sys.stderr.write(f"{len(trees)} trees\n")
    return 0


def _tree_series_inputs(args):
    triplet = _triplet_or_default(args, LevyTriplet.gaussian(args.sigma))
    params = OUParams(args.m, args.x0)
    try:
        grid = TimeGrid.from_step(float(args.dt), float(args.t))
    except ValueError as exc:
        raise ConfigError(f"bad grid: {exc}") from exc
    path = generate_path(triplet, grid, args.seed)
    return triplet, params, path


def _trees_evaluate(args) -> int:
    triplet, params, path = _tree_series_inputs(args)
    report = truncated_series(
        params, triplet, args.lam, args.p, args.order, path, args.t,
        refine=args.refine,
    )
    partial = np.abs(np.cumsum(report.order_sums) - report.oracle)
    doc = {
        "order": report.order,
        "order_sums": list(report.order_sums),
        "total": report.total,
        "oracle": report.oracle,
        "error": report.error,
        "linear_gap": report.linear_gap,
        "partial_errors": partial.tolist(),
    }
    meta = _meta(args, triplet=triplet.to_dict(), triplet_hash=_triplet_hash(triplet))
    _emit_doc(args, doc, meta)
    return 0


def _trees_order_check(args) -> int:
    lams = _parse_float_list(args.lambdas, "--lambdas")
    if len(lams) < 2:
        raise ConfigError("--lambdas needs at least two couplings to fit a slope")
    if min(lams) <= 0.0:
        raise ConfigError("--lambdas expects positive couplings")
    triplet, params, path = _tree_series_inputs(args)
    errors = [
        truncated_series(
            params, triplet, lam, args.p, args.order, path, args.t,
            refine=args.refine,
        ).error
        for lam in lams
    ]
    slope = float(np.polyfit(np.log(lams), np.log(errors), 1)[0])
    doc = {
        "lambdas": lams,
        "errors": errors,
        "slope": slope,
        "target_order": args.order + 1,
    }
    meta = _meta(args, triplet=triplet.to_dict(), triplet_hash=_triplet_hash(triplet))
    _emit_doc(args, doc, meta)
    return 0


def cmd_validate(args) -> int:
    indices = None
    if args.only:
        indices = _parse_int_list(args.only, "--only")
    results = run_all(indices)
    for result in results:
        print(format_result(result))
    if args.out:
        doc = [
            {
                "index": r.index,
                "name": r.name,
                "passed": r.passed,
                "detail": r.detail,
                "seconds": r.seconds,
            }
            for r in results
        ]
        _emit_doc(args, doc, _meta(args))
    return 0 if all(r.passed for r in results) else 1


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument(
        "--format", choices=("csv", "json"), default="csv",
        help="table output format",
    )
    common.add_argument(
        "--threads", type=int, default=1,
        help="worker hint; never changes output bytes",
    )

    parser = argparse.ArgumentParser(
        prog="levy-ou",
        description="Levy noise, the damped response process, and its tree series.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="cmd")

    p_noise = sub.add_parser(
        "noise", parents=[common], help="sample noise increments on a grid"
    )
    p_noise.add_argument("--triplet", help="triplet JSON file")
    p_noise.add_argument("--t-end", type=float, default=None)
    p_noise.add_argument("--n", default=None, help="steps, or density list with --check-cf")
    p_noise.add_argument("--dt", type=float, default=None)
    p_noise.add_argument(
        "--check-cf", action="store_true",
        help="emit the lattice log-CF convergence table instead of a path",
    )
    p_noise.add_argument("--f", choices=("exp-decay", "const"), default="exp-decay")
    p_noise.add_argument("--num-nodes", type=int, default=10001,
                         help="reference quadrature nodes for --check-cf")
    p_noise.set_defaults(func=cmd_noise)

    p_sim = sub.add_parser(
        "simulate", parents=[common], help="integrate the response process"
    )
    p_sim.add_argument("--triplet", help="triplet JSON file (default unit Gaussian)")
    p_sim.add_argument("--m", type=float, default=1.0)
    p_sim.add_argument("--x0", type=float, default=0.0)
    p_sim.add_argument("--exact", action="store_true",
                       help="exact Gaussian transition (jump-free triplets only)")
    p_sim.add_argument("--ensemble", type=int, default=None,
                       help="sample this many terminal values instead of a path")
    p_sim.add_argument("--t", type=float, default=1.0, help="ensemble horizon")
    p_sim.add_argument("--steps", type=int, default=1,
                       help="transition steps per exact ensemble sample")
    p_sim.add_argument("--summary", action="store_true",
                       help="emit ensemble mean/variance JSON instead of samples")
    p_sim.add_argument("--t-end", type=float, default=None, help="path horizon")
    p_sim.add_argument("--n", default=None, help="path steps")
    p_sim.add_argument("--dt", type=float, default=None)
    p_sim.set_defaults(func=cmd_simulate)

    p_den = sub.add_parser(
        "density", parents=[common], help="closed-form transition densities"
    )
    mode = p_den.add_mutually_exclusive_group(required=True)
    mode.add_argument("--mehler", action="store_true")
    mode.add_argument("--brownian", action="store_true")
    p_den.add_argument("--m", type=float, default=1.0)
    p_den.add_argument("--x0", type=float, default=0.0)
    p_den.add_argument("--D", type=float, default=0.5)
    p_den.add_argument("--t", type=float, default=1.0)
    p_den.add_argument("--x-min", type=float, default=-5.0)
    p_den.add_argument("--x-max", type=float, default=5.0)
    p_den.add_argument("--x-nodes", type=int, default=401)
    p_den.add_argument("--compare-brownian", action="store_true",
                       help="add the spreading-kernel column and report the gap")
    p_den.set_defaults(func=cmd_density)

    p_cf = sub.add_parser(
        "charfn", parents=[common], help="characteristic function of X_t"
    )
    p_cf.add_argument("--triplet", help="triplet JSON file (default unit Gaussian)")
    p_cf.add_argument("--m", type=float, default=1.0)
    p_cf.add_argument("--x0", type=float, default=0.0)
    p_cf.add_argument("--t", type=float, default=1.0)
    p_cf.add_argument("--p", default=None, help="comma list of frequencies")
    p_cf.add_argument("--p-min", type=float, default=-5.0)
    p_cf.add_argument("--p-max", type=float, default=5.0)
    p_cf.add_argument("--p-nodes", type=int, default=21)
    p_cf.add_argument("--n-quad", type=int, default=2001)
    p_cf.add_argument("--empirical", action="store_true",
                      help="add Monte Carlo columns from noise-driven paths")
    p_cf.add_argument("--ensemble", type=int, default=10000)
    p_cf.add_argument("--dt", type=float, default=None)
    p_cf.set_defaults(func=cmd_charfn)

    p_gen = sub.add_parser(
        "generator", parents=[common],
        help="apply the generator or check the heat-equation residual",
    )
    p_gen.add_argument("--triplet", help="triplet JSON file (default unit Gaussian)")
    p_gen.add_argument("--func", dest="gen_func",
                       choices=("const", "square", "cos"), default="square")
    p_gen.add_argument("--heat", action="store_true",
                       help="residual refinement table for the spreading kernel")
    p_gen.add_argument("--h", default="0.1,0.05", help="spacings for --heat")
    p_gen.add_argument("--D", type=float, default=0.5)
    p_gen.add_argument("--t", type=float, default=1.0)
    p_gen.add_argument("--x0", type=float, default=0.0)
    p_gen.add_argument("--x-min", type=float, default=-6.0)
    p_gen.add_argument("--x-max", type=float, default=6.0)
    p_gen.add_argument("--x-nodes", type=int, default=241)
    p_gen.add_argument("--time-step", type=float, default=1e-4)
    p_gen.set_defaults(func=cmd_generator)

    p_trees = sub.add_parser("trees", help="tree enumeration and series evaluation")
    tree_sub = p_trees.add_subparsers(dest="tree_cmd")

    p_enum = tree_sub.add_parser(
        "enumerate", parents=[common], help="list trees, one render per line"
    )
    p_enum.add_argument("--p", type=int, default=2, help="inner vertex arity")
    p_enum.add_argument("--i", type=int, default=2, help="inner vertex count")
    p_enum.set_defaults(func=cmd_trees)

    series_common = argparse.ArgumentParser(add_help=False)
    series_common.add_argument("--p", type=int, default=2, help="inner vertex arity")
    series_common.add_argument("--triplet",
                               help="triplet JSON file (default Gaussian --sigma)")
    series_common.add_argument("--sigma", type=float, default=0.25,
                               help="diffusion of the default Gaussian triplet")
    series_common.add_argument("--m", type=float, default=1.0)
    series_common.add_argument("--x0", type=float, default=0.5)
    series_common.add_argument("--t", type=float, default=1.0)
    series_common.add_argument("--dt", type=float, default=1e-3)
    series_common.add_argument("--N", type=int, default=2, dest="order",
                               help="truncation order")

    p_eval = tree_sub.add_parser(
        "evaluate", parents=[common, series_common],
        help="sum the series on a seeded path and compare with the integrator",
    )
    p_eval.add_argument("--lambda", type=float, default=0.1, dest="lam")
    p_eval.add_argument("--refine", type=int, default=8,
                        help="integrator substeps per grid cell")
    p_eval.set_defaults(func=cmd_trees)

    p_order = tree_sub.add_parser(
        "order-check", parents=[common, series_common],
        help="fit the decay order of the truncation error in the coupling",
    )
    p_order.add_argument("--lambdas", default="0.05,0.1,0.2")
    p_order.add_argument("--refine", type=int, default=4)
    p_order.set_defaults(func=cmd_trees)

    p_val = sub.add_parser(
        "validate", parents=[common], help="run the validation suite"
    )
    p_val.add_argument("--only", default=None,
                       help="comma list of criterion numbers")
    p_val.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "cmd", None) is None:
        parser.print_usage(sys.stderr)
        return 2
    if args.cmd == "trees" and getattr(args, "tree_cmd", None) is None:
        sys.stderr.write("usage: levy-ou trees {enumerate,evaluate,order-check}\n")
        return 2
    if getattr(args, "threads", 1) is not None and getattr(args, "threads", 1) < 1:
        sys.stderr.write("error: --threads must be positive\n")
        return 2
    try:
        return int(args.func(args))
    except ConfigError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
