"""Plane rooted trees with two leaf types and the perturbative expansion of

    x' = -m x - lambda x^p + eta,        x(0) = x0.

Iterating the integral form x = G * (x0 delta) + G * eta - lambda G * (x^p)
indexes the terms of the solution by ordered rooted trees whose inner
vertices have arity p: a noise leaf stands for the convolution of the causal
kernel with the noise, an initial-condition leaf for exp(-m s) x0, and an
inner vertex for -lambda times the kernel convolved with the product of its
children.  Summing every tree with at most N inner vertices reproduces the
solution up to a remainder of order lambda^{N+1}.

Because Picard iteration produces ordered tuples of children, plane (ordered)
trees carry the correct multiplicities with no explicit symmetry factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .noise_field import NoisePath
from .ou_process import OUParams, simulate_from_noise

__all__ = [
    "LeafNoise",
    "LeafInit",
    "Inner",
    "Tree",
    "SeriesReport",
    "enumerate_trees",
    "render_tree",
    "parse_tree",
    "evaluate_tree",
    "truncated_series",
    "reference_solution",
]


@dataclass(frozen=True)
class LeafNoise:
    """Leaf bound to the noise: the kernel-noise convolution G * eta."""


@dataclass(frozen=True)
class LeafInit:
    """Leaf bound to the initial condition: exp(-m s) x0."""


@dataclass(frozen=True)
class Inner:
    """Inner vertex: -lambda times the kernel convolved with the product
    of its children's values."""

    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))


def _count_inner(node) -> int:
    if isinstance(node, Inner):
        return 1 + sum(_count_inner(c) for c in node.children)
    return 0


def _count_leaves(node) -> int:
    if isinstance(node, Inner):
        return sum(_count_leaves(c) for c in node.children)
    return 1


def _check_arity(node, arity) -> None:
    if isinstance(node, Inner):
        if len(node.children) != arity:
            raise ValueError(
                f"inner vertex has {len(node.children)} children, expected {arity}"
            )
        for c in node.children:
            _check_arity(c, arity)
    elif not isinstance(node, (LeafNoise, LeafInit)):
        raise ValueError(f"not a tree node: {node!r}")


@dataclass(frozen=True)
class Tree:
    """A rooted tree together with its arity p and inner vertex count i.

    Every inner vertex has exactly p children, which forces the leaf count
    to be (p - 1) i + 1.
    """

    root: object
    arity: int
    inner_count: int

    def __post_init__(self):
        arity = int(self.arity)
        if arity < 2:
            raise ValueError("arity must be at least 2")
        _check_arity(self.root, arity)
        actual = _count_inner(self.root)
        if actual != int(self.inner_count):
            raise ValueError(
                f"tree has {actual} inner vertices, label says {self.inner_count}"
            )
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "inner_count", int(self.inner_count))

    @property
    def n_leaves(self):
        return _count_leaves(self.root)


def _compositions(total, parts):
    # ordered tuples of `parts` nonnegative integers summing to `total`
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _nodes_with_inner(p, i):
    if i == 0:
        return (LeafNoise(), LeafInit())
    out = []
    for comp in _compositions(i - 1, p):
        pools = [_nodes_with_inner(p, j) for j in comp]
        stack = [()]
        for pool in pools:
            stack = [tup + (child,) for tup in stack for child in pool]
        out.extend(Inner(tup) for tup in stack)
    return tuple(out)


def enumerate_trees(p, i):
    """All plane rooted trees with i inner vertices of arity p, in a fixed
    deterministic order, leaves labeled both ways."""
    p = int(p)
    i = int(i)
    if p < 2:
        raise ValueError("arity must be at least 2")
    if i < 0:
        raise ValueError("inner vertex count must be nonnegative")
    return [Tree(node, p, i) for node in _nodes_with_inner(p, i)]


def render_tree(tree: Tree) -> str:
    """ASCII form: x- marks the root edge, * inner vertices, o noise leaves,
    # initial-condition leaves; children are parenthesized in order."""
    return "x-" + _render_node(tree.root)


def _render_node(node) -> str:
    if isinstance(node, LeafNoise):
        return "o"
    if isinstance(node, LeafInit):
        return "#"
    return "*(" + ",".join(_render_node(c) for c in node.children) + ")"


def parse_tree(text: str, arity=None) -> Tree:
    """Inverse of render_tree.  The arity is inferred from the first inner
    vertex; leaf-only trees default to arity 2 unless one is given."""
    s = text.strip()
    if not s.startswith("x-"):
        raise ValueError("tree text must start with 'x-'")
    node, pos = _parse_node(s, 2)
    if pos != len(s):
        raise ValueError(f"trailing characters at {pos}: {s[pos:]!r}")
    found = _infer_arity(node)
    if found is not None:
        if arity is not None and int(arity) != found:
            raise ValueError(f"tree has arity {found}, expected {arity}")
        arity = found
    elif arity is None:
        arity = 2
    return Tree(node, int(arity), _count_inner(node))


def _parse_node(s, pos):
    if pos >= len(s):
        raise ValueError("unexpected end of tree text")
    ch = s[pos]
    if ch == "o":
        return LeafNoise(), pos + 1
    if ch == "#":
        return LeafInit(), pos + 1
    if ch != "*":
        raise ValueError(f"unexpected character {ch!r} at {pos}")
    if pos + 1 >= len(s) or s[pos + 1] != "(":
        raise ValueError(f"expected '(' after '*' at {pos}")
    pos += 2
    children = []
    while True:
        child, pos = _parse_node(s, pos)
        children.append(child)
        if pos >= len(s):
            raise ValueError("unclosed '('")
        if s[pos] == ",":
            pos += 1
            continue
        if s[pos] == ")":
            return Inner(tuple(children)), pos + 1
        raise ValueError(f"unexpected character {s[pos]!r} at {pos}")


def _infer_arity(node):
    if isinstance(node, Inner):
        return len(node.children)
    return None


class _EvalContext:
    """Per-(path, t) workspace: leaf value vectors over the grid nodes up to
    t, plus the recursion that convolves the causal kernel with a sampled
    integrand by composite trapezoid."""

    def __init__(self, params: OUParams, lam, path: NoisePath, t):
        if params.dim != 1 or path.dim != 1:
            raise ValueError("tree evaluation is implemented for dimension 1")
        dt = path.grid.dt
        idx = int(np.rint(float(t) / dt))
        if idx < 0 or idx > path.grid.n_steps or abs(idx * dt - float(t)) > 1e-9 * max(
            1.0, abs(float(t))
        ):
            raise ValueError("t must lie on the path's grid")
        self.params = params
        self.lam = float(lam)
        self.dt = dt
        self.idx = idx
        self.nodes = path.grid.nodes[: idx + 1]
        self.alpha = np.exp(-params.m * dt)
        inc = np.ascontiguousarray(path.increments[:idx, 0])
        # noise leaf: V[j] = sum_{t_k < t_j} exp(-m (t_j - t_k - dt/2)) dL_k,
        # evaluated as explicit weighted sums (independent of the recursion
        # used by the simulators)
        noise_vec = np.empty(idx + 1)
        noise_vec[0] = 0.0
        half = 0.5 * dt
        for j in range(1, idx + 1):
            weights = np.exp(-params.m * (self.nodes[j] - self.nodes[:j] - half))
            noise_vec[j] = weights @ inc[:j]
        self.noise_vec = noise_vec
        self.init_vec = np.exp(-params.m * self.nodes) * params.x0[0]
        self.cache = {}

    def convolve(self, integrand):
        """I[j] = trapezoid of exp(-m (t_j - u)) integrand(u) over [0, t_j].

        Uses the stable recursion
            I[j+1] = alpha I[j] + dt/2 (alpha g[j] + g[j+1]),
        which reproduces the composite trapezoid values exactly.
        """
        out = np.empty_like(integrand)
        out[0] = 0.0
        c = 0.5 * self.dt
        alpha = self.alpha
        acc = 0.0
        for j in range(len(integrand) - 1):
            acc = alpha * acc + c * (alpha * integrand[j] + integrand[j + 1])
            out[j + 1] = acc
        return out

    def value(self, node):
        cached = self.cache.get(node)
        if cached is not None:
            return cached
        if isinstance(node, LeafNoise):
            val = self.noise_vec
        elif isinstance(node, LeafInit):
            val = self.init_vec
        else:
            prod = self.value(node.children[0]).copy()
            for child in node.children[1:]:
                prod *= self.value(child)
            val = -self.lam * self.convolve(prod)
        self.cache[node] = val
        return val


def evaluate_tree(tree: Tree, params: OUParams, lam, path: NoisePath, t) -> float:
    """Value of one tree at time t along a noise path."""
    ctx = _EvalContext(params, lam, path, t)
    return float(ctx.value(tree.root)[-1])


@dataclass(frozen=True)
class SeriesReport:
    """Truncated tree series next to its integrator oracle.

    ``order_sums[i]`` is the sum over all trees with i inner vertices;
    ``total`` is their sum, ``oracle`` the Runge-Kutta reference value,
    ``error`` their absolute difference, and ``linear_gap`` the gap between
    the zero-inner-vertex sum and the linear integrator on the same path
    (an exactness identity when lambda = 0).
    """

    order: int
    order_sums: tuple
    total: float
    oracle: float
    error: float
    linear_gap: float

    def __post_init__(self):
        if self.total != sum(self.order_sums):
            raise ValueError("total must equal the sum of the order sums")


def truncated_series(
    params: OUParams, triplet, lam, p, n_orders, path: NoisePath, t, refine=8
) -> SeriesReport:
    """Sum the tree series through order ``n_orders`` and compare oracles.

    All trees are evaluated on the same path through one shared workspace,
    so identical subtrees are computed once; per-order sums run in the
    enumerator's canonical order for bit-stable totals.
    """
    if triplet.dim != path.triplet.dim:
        raise ValueError("triplet dimension does not match the path")
    n_orders = int(n_orders)
    if n_orders < 0:
        raise ValueError("truncation order must be nonnegative")
    ctx = _EvalContext(params, lam, path, t)
    sums = []
    for i in range(n_orders + 1):
        sums.append(sum(float(ctx.value(tr.root)[-1]) for tr in enumerate_trees(p, i)))
    total = sum(sums)
    oracle = reference_solution(params, lam, p, path, t, refine=refine)
    linear = float(simulate_from_noise(params, path).states[ctx.idx, 0])
    return SeriesReport(
        order=n_orders,
        order_sums=tuple(sums),
        total=total,
        oracle=oracle,
        error=abs(total - oracle),
        linear_gap=abs(sums[0] - linear),
    )


def _rk4_unforced(m, lam, p, x, span, steps):
    # classical steps for x' = -m x - lambda x^p on one smooth segment
    h = span / steps
    for _ in range(steps):
        k1 = -m * x - lam * x**p
        x2 = x + 0.5 * h * k1
        k2 = -m * x2 - lam * x2**p
        x3 = x + 0.5 * h * k2
        k3 = -m * x3 - lam * x3**p
        x4 = x + h * k3
        k4 = -m * x4 - lam * x4**p
        x = x + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
    return x


def reference_solution(params: OUParams, lam, p, path: NoisePath, t, refine=8) -> float:
    """Independent integrator: fourth order stepping between noise impulses.

    A lattice increment acts as a point kick at its cell's midpoint: the
    state follows the unforced equation x' = -m x - lambda x^p, integrated
    with ``refine`` classical steps per half cell, and jumps by dL_k at
    t_k + dt/2.  This is the continuum reading of the discrete noise under
    which the recursion of simulate_from_noise is exact at lambda = 0.
    Deterministic given the path; raises OverflowError when the state
    leaves the representable range (destabilizing couplings can blow up in
    finite time).
    """
    if params.dim != 1 or path.dim != 1:
        raise ValueError("the reference integrator is implemented for dimension 1")
    refine = int(refine)
    if refine < 1:
        raise ValueError("refine must be at least 1")
    lam = float(lam)
    p = int(p)
    dt = path.grid.dt
    idx = int(np.rint(float(t) / dt))
    if idx < 0 or idx > path.grid.n_steps or abs(idx * dt - float(t)) > 1e-9 * max(
        1.0, abs(float(t))
    ):
        raise ValueError("t must lie on the path's grid")
    m = params.m
    x = float(params.x0[0])
    half = 0.5 * dt
    inc = path.increments[:, 0]
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(idx):
            x = _rk4_unforced(m, lam, p, x, half, refine)
            x = x + inc[k]
            x = _rk4_unforced(m, lam, p, x, half, refine)
            if not np.isfinite(x):
                raise OverflowError(
                    f"reference integration overflowed at t = {(k + 1) * dt:g}"
                )
    return float(x)
