"""Plots with pull-back metrics: arc length, pseudo-distance estimation,
the glued-lines vanishing-distance example, Hausdorff volumes of plots,
and the wedge identity certifying forms of complementary degree.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize

from .errors import (ConnectivityError, DomainError, MetricError,
                     PreconditionError)
from .spectral import FourierLoop, sobolev_norm

# ---------------------------------------------------------------------------
# plots (finite-dimensional parametrizations with a pulled-back metric)


@dataclass(frozen=True)
class PlotChart:
    """A p-dimensional parametrization over an axis-aligned box.

    ``embedding`` maps a batch of domain points (k, p) to target coordinates
    (k, d); ``metric`` maps the batch to symmetric psd matrices (k, p, p).
    ``mask`` optionally carves a sub-region out of the box.
    """

    dim: int
    lower: np.ndarray
    upper: np.ndarray
    embedding: object  # callable (k, p) -> (k, d)
    metric: object     # callable (k, p) -> (k, p, p)
    mask: object | None = None  # callable (k, p) -> bool (k,)
    name: str = "plot"

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=float).reshape(-1)
        hi = np.asarray(self.upper, dtype=float).reshape(-1)
        if lo.shape[0] != self.dim or hi.shape[0] != self.dim:
            raise PreconditionError("box bounds must match the plot dimension")
        if np.any(hi <= lo):
            raise PreconditionError("empty domain box")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    def contains(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(points)
        ok = np.all((pts >= self.lower - 1e-12) & (pts <= self.upper + 1e-12), axis=1)
        if self.mask is not None:
            ok = ok & self.mask(pts)
        return ok


def flat_chart(dim: int = 2, side: float = 1.0) -> PlotChart:
    eye = np.eye(dim)
    return PlotChart(
        dim=dim, lower=np.zeros(dim), upper=np.full(dim, side),
        embedding=lambda x: np.atleast_2d(x),
        metric=lambda x: np.broadcast_to(eye, (np.atleast_2d(x).shape[0], dim, dim)),
        name="flat",
    )


def _sphere_metric(points: np.ndarray) -> np.ndarray:
    pts = np.atleast_2d(points)
    r = np.sqrt(np.sum(pts ** 2, axis=1))
    with np.errstate(invalid="ignore", divide="ignore"):
        a = np.where(r > 1e-12, (np.sin(r) / np.where(r > 0, r, 1.0)) ** 2, 1.0)
        unit = np.where(r[:, None] > 1e-12, pts / np.where(r[:, None] > 0, r[:, None], 1.0), 0.0)
    eye = np.eye(2)
    outer = unit[:, :, None] * unit[:, None, :]
    return a[:, None, None] * (eye - outer) + outer


def _sphere_embedding(points: np.ndarray) -> np.ndarray:
    pts = np.atleast_2d(points)
    r = np.sqrt(np.sum(pts ** 2, axis=1))
    unit = np.where(r[:, None] > 1e-12, pts / np.where(r[:, None] > 0, r[:, None], 1.0), 0.0)
    sin_r = np.sin(r)[:, None]
    return np.column_stack([sin_r * unit, np.cos(r)[:, None]])


def sphere_exponential_chart(max_radius: float = 1.5 * np.pi) -> PlotChart:
    """Exponential parametrization of the round 2-sphere from a pole; the
    metric degenerates on the circle of radius pi (the cut locus image)."""
    return PlotChart(
        dim=2,
        lower=np.full(2, -max_radius), upper=np.full(2, max_radius),
        embedding=_sphere_embedding,
        metric=_sphere_metric,
        mask=lambda pts: np.sum(np.atleast_2d(pts) ** 2, axis=1) <= max_radius ** 2,
        name=f"sphere-exp-r{max_radius:.6g}",
    )


def _mobius_embedding(points: np.ndarray) -> np.ndarray:
    pts = np.atleast_2d(points)
    x = pts[:, 0]
    y = pts[:, 1].copy()
    y = np.where(y < 0.0, y + 1.0, y)
    y = np.where(y > 1.0, y - 1.0, y)
    return np.column_stack([x, y])


def mobius_chart() -> PlotChart:
    """Flat chart ]0,1[ x ]-1/2, 3/2[ of the open Moebius band; the
    vertical coordinate wraps through the gluing, the metric stays flat."""
    eye = np.eye(2)
    return PlotChart(
        dim=2,
        lower=np.array([0.0, -0.5]), upper=np.array([1.0, 1.5]),
        embedding=_mobius_embedding,
        metric=lambda x: np.broadcast_to(eye, (np.atleast_2d(x).shape[0], 2, 2)),
        name="moebius",
    )


def restrict(plot: PlotChart, lower, upper) -> PlotChart:
    lo = np.maximum(plot.lower, np.asarray(lower, dtype=float))
    hi = np.minimum(plot.upper, np.asarray(upper, dtype=float))
    return replace(plot, lower=lo, upper=hi)


def pullback_metric(plot: PlotChart, x, u, v) -> float:
    """g_p(x)(u, v); symmetric, positive-semidefinite."""
    x = np.asarray(x, dtype=float).reshape(1, -1)
    if not plot.contains(x)[0]:
        raise DomainError(f"point {x.ravel()} outside the plot domain")
    g = plot.metric(x)[0]
    return float(np.asarray(u) @ g @ np.asarray(v))


def metric_from_embedding(plot: PlotChart, step: float = 1e-6):
    """Finite-difference pull-back of the flat target metric through the
    embedding: J^T J with J the numerical Jacobian.  Oracle companion to
    analytically supplied metrics."""
    def g(points):
        pts = np.atleast_2d(points)
        k, p = pts.shape
        cols = []
        for i in range(p):
            e = np.zeros(p)
            e[i] = step
            cols.append((plot.embedding(pts + e) - plot.embedding(pts - e)) / (2 * step))
        jac = np.stack(cols, axis=2)  # (k, d, p)
        return np.einsum("kdi,kdj->kij", jac, jac)
    return g


# ---------------------------------------------------------------------------
# paths and arc length


@dataclass(frozen=True)
class DiscretePath:
    """Polyline in a chart domain; ``speeds`` only reweights the
    parametrization of each segment and never changes the arc length."""

    nodes: np.ndarray  # (k, p)
    speeds: np.ndarray | None = None

    def __post_init__(self):
        nodes = np.atleast_2d(np.asarray(self.nodes, dtype=float))
        if not np.all(np.isfinite(nodes)):
            raise PreconditionError("path nodes must be finite")
        object.__setattr__(self, "nodes", nodes)
        if self.speeds is not None:
            sp = np.asarray(self.speeds, dtype=float)
            if sp.shape[0] != nodes.shape[0] - 1 or np.any(sp <= 0):
                raise PreconditionError("need one positive speed per segment")
            object.__setattr__(self, "speeds", sp)

    def subdivide(self, per_segment: int) -> "DiscretePath":
        out = [self.nodes[:1]]
        for a, b in zip(self.nodes[:-1], self.nodes[1:]):
            frac = np.linspace(0.0, 1.0, per_segment + 1)[1:]
            out.append(a[None, :] + frac[:, None] * (b - a)[None, :])
        return DiscretePath(np.vstack(out))


_GAUSS_X, _GAUSS_W = np.polynomial.legendre.leggauss(8)
_GAUSS_T = 0.5 * (_GAUSS_X + 1.0)
_GAUSS_W = 0.5 * _GAUSS_W


def arc_length(path: DiscretePath, plot: PlotChart) -> float:
    """Sum over segments of the Gauss-quadrature length integral."""
    if not np.all(plot.contains(path.nodes)):
        raise DomainError("path escapes the plot domain")
    total = 0.0
    for a, b in zip(path.nodes[:-1], path.nodes[1:]):
        d = b - a
        pts = a[None, :] + _GAUSS_T[:, None] * d[None, :]
        g = plot.metric(pts)
        speed_sq = np.einsum("i,kij,j->k", d, g, d)
        total += float(np.sum(_GAUSS_W * np.sqrt(np.maximum(speed_sq, 0.0))))
    return total


# ---------------------------------------------------------------------------
# pseudo-distance by budgeted path optimization


@dataclass(frozen=True)
class OptimizerBudget:
    node_count: int = 17
    restarts: int = 3
    max_iterations: int = 200
    seed: int = 0
    perturbation: float = 0.1


@dataclass(frozen=True)
class DistanceResult:
    upper_bound: float
    certificate: DiscretePath
    restarts_used: int

    def certificate_to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            p = self.certificate.nodes.shape[1]
            writer.writerow(["node_index"] + [f"coord_{i}" for i in range(p)])
            for j, row in enumerate(self.certificate.nodes):
                writer.writerow([j] + [repr(float(x)) for x in row])


@dataclass(frozen=True)
class ChartSpace:
    """Single-plot space: points are domain coordinates of the plot."""

    plot: PlotChart


def pseudo_distance(space, x, y, budget: OptimizerBudget = OptimizerBudget()):
    """Budgeted upper bound on the infimum of arc lengths between x and y,
    with the optimized discrete path attached as a certificate."""
    if isinstance(space, GluedLinesSpace):
        return _glued_lines_pseudo_distance(space, x, y)
    if isinstance(space, ChartSpace):
        return _chart_pseudo_distance(space.plot, np.asarray(x, dtype=float),
                                      np.asarray(y, dtype=float), budget)
    raise PreconditionError(f"unsupported space descriptor {type(space).__name__}")


def _chart_pseudo_distance(plot, x, y, budget):
    if not (plot.contains(x.reshape(1, -1))[0] and plot.contains(y.reshape(1, -1))[0]):
        raise ConnectivityError("endpoints outside the chart domain")
    k = budget.node_count
    frac = np.linspace(0.0, 1.0, k)
    straight = x[None, :] + frac[:, None] * (y - x)[None, :]
    if not np.all(plot.contains(straight)):
        raise ConnectivityError("no admissible initial path found in the chart")
    rng = np.random.default_rng(budget.seed)
    p = plot.dim
    span = np.max(plot.upper - plot.lower)

    def objective(flat):
        nodes = np.vstack([x, flat.reshape(-1, p), y])
        pts = nodes
        if not np.all(plot.contains(pts)):
            return 1e6
        return arc_length(DiscretePath(nodes), plot)

    best_val = np.inf
    best_nodes = straight
    bounds = [(lo, hi) for lo, hi in zip(plot.lower, plot.upper)] * (k - 2)
    for r in range(budget.restarts):
        init = straight[1:-1].copy()
        if r > 0:
            init = init + rng.normal(scale=budget.perturbation * span, size=init.shape)
            init = np.clip(init, plot.lower, plot.upper)
        res = minimize(objective, init.ravel(), method="L-BFGS-B", bounds=bounds,
                       options={"maxiter": budget.max_iterations})
        nodes = np.vstack([x, res.x.reshape(-1, p), y])
        if np.all(plot.contains(nodes)):
            val = arc_length(DiscretePath(nodes), plot)
            if val < best_val:
                best_val, best_nodes = val, nodes
    if not np.isfinite(best_val):
        raise ConnectivityError("optimizer produced no admissible path")
    return DistanceResult(float(best_val), DiscretePath(best_nodes), budget.restarts)


# ---------------------------------------------------------------------------
# the glued-lines space


@dataclass(frozen=True)
class GluedLinesPoint:
    """Point of the quotient of countably many lines: the half-line x <= 0
    is shared, the right tails are glued so the class of 1/i in copy i is a
    single point, and (0, 1/i) is private to copy i."""

    copy: int
    x: float

    def __post_init__(self):
        if self.copy < 1:
            raise PreconditionError("copy index must be >= 1")

    def canonical(self):
        """('L', x<=0) shared left; ('R', pos>=1) glued right, normalized to
        copy 1; ('I', i, x) copy-private interior."""
        i, x = self.copy, self.x
        if x <= 0.0:
            return ("L", x)
        if x >= 1.0 / i:
            return ("R", x + 1.0 - 1.0 / i)
        return ("I", i, x)

    def same_class(self, other: "GluedLinesPoint") -> bool:
        return self.canonical() == other.canonical()


ZERO_BAR = GluedLinesPoint(1, 0.0)
ONE_BAR = GluedLinesPoint(1, 1.0)


@dataclass(frozen=True)
class GluedLinesSpace:
    max_copy: int = 10 ** 6


def glued_lines_distance(i: int) -> float:
    """Length of the straight path from the shared 0 to the glued 1 inside
    copy i: exactly 1/i."""
    if i < 1:
        raise PreconditionError("copy index must be >= 1")
    return 1.0 / i


def _glued_lines_pseudo_distance(space, a: GluedLinesPoint, b: GluedLinesPoint):
    bridge = 1.0 / space.max_copy
    ca, cb = a.canonical(), b.canonical()

    def to_left(c):
        # distance from the point to the shared origin, staying in one copy
        if c[0] == "L":
            return -c[1]
        if c[0] == "I":
            return c[2]
        return (c[1] - 1.0) + bridge  # right tail -> glued 1 -> cheapest crossing

    def to_right(c):
        # distance from the point to the glued point 1
        if c[0] == "R":
            return c[1] - 1.0
        if c[0] == "I":
            return 1.0 / c[1] - c[2]
        return -c[1] + bridge

    if ca[0] == cb[0] == "L":
        d = abs(ca[1] - cb[1])
    elif ca[0] == cb[0] == "R":
        d = abs(ca[1] - cb[1])
    elif ca[0] == cb[0] == "I" and ca[1] == cb[1]:
        d = min(abs(ca[2] - cb[2]),
                to_left(ca) + to_left(cb),
                to_right(ca) + to_right(cb))
    else:
        d = min(to_left(ca) + to_left(cb),
                to_right(ca) + to_right(cb),
                to_left(ca) + bridge + to_right(cb),
                to_right(ca) + bridge + to_left(cb))
    copy = space.max_copy
    cert = DiscretePath(np.array([[0.0], [1.0 / copy]]))
    return DistanceResult(float(d), cert, 0)


def d_topology_separation_witness():
    """Membership predicates for the disjoint neighborhoods of the shared
    origin and the glued point 1, plus a randomized disjointness check."""

    def in_u0(pt: GluedLinesPoint) -> bool:
        c = pt.canonical()
        if c[0] == "L":
            return True
        if c[0] == "R":
            return False
        return c[2] < 1.0 / (2 * c[1])

    def in_u1(pt: GluedLinesPoint) -> bool:
        c = pt.canonical()
        if c[0] == "L":
            return False
        if c[0] == "R":
            return True
        return c[2] > 1.0 / (2 * c[1])

    def check(samples: int = 10_000, seed: int = 0) -> dict:
        rng = np.random.default_rng(seed)
        overlaps = 0
        for _ in range(samples):
            i = int(rng.integers(1, 50))
            x = float(rng.uniform(-1.0, 2.0))
            pt = GluedLinesPoint(i, x)
            if in_u0(pt) and in_u1(pt):
                overlaps += 1
        return {
            "samples": samples,
            "overlaps": overlaps,
            "zero_in_u0": in_u0(ZERO_BAR),
            "zero_in_u1": in_u1(ZERO_BAR),
            "one_in_u0": in_u0(ONE_BAR),
            "one_in_u1": in_u1(ONE_BAR),
            "disjoint": overlaps == 0,
        }

    return in_u0, in_u1, check


# ---------------------------------------------------------------------------
# Hausdorff volume of a plot


@dataclass(frozen=True)
class VolumeResult:
    value: float
    degenerate_points: int
    resolution: int

    def to_json(self) -> dict:
        return {"value": self.value, "degenerate_points": self.degenerate_points,
                "resolution": self.resolution}


def hausdorff_volume(plot: PlotChart, resolution: int = 512,
                     chunk: int = 1 << 20) -> VolumeResult:
    """Midpoint tensor quadrature of sqrt(det g) over the plot domain.
    Degenerate grid points (det = 0) contribute nothing and are counted."""
    p = plot.dim
    widths = (plot.upper - plot.lower) / resolution
    cell = float(np.prod(widths))
    axes = [plot.lower[i] + widths[i] * (np.arange(resolution) + 0.5)
            for i in range(p)]
    total = 0.0
    degenerate = 0
    # iterate the first axis, vectorize the rest, to bound memory
    rest = np.stack(np.meshgrid(*axes[1:], indexing="ij"), axis=-1).reshape(-1, p - 1) \
        if p > 1 else np.zeros((1, 0))
    for x0 in axes[0]:
        pts = np.column_stack([np.full(rest.shape[0], x0), rest]) if p > 1 \
            else np.array([[x0]])
        for start in range(0, pts.shape[0], chunk):
            block = pts[start:start + chunk]
            keep = plot.contains(block)
            if not np.any(keep):
                continue
            g = plot.metric(block[keep])
            det = np.linalg.det(g)
            if np.any(det < -1e-12):
                raise MetricError(f"negative metric determinant {det.min():.3e}")
            degenerate += int(np.count_nonzero(np.abs(det) < 1e-15))
            total += float(np.sum(np.sqrt(np.maximum(det, 0.0))))
    return VolumeResult(total * cell, degenerate, resolution)


def volume_report_dumps(result: VolumeResult) -> str:
    return json.dumps(result.to_json())


# ---------------------------------------------------------------------------
# wedge identity for complementary-degree forms


def _perm_sign(indices) -> int:
    sign = 1
    arr = list(indices)
    for i in range(len(arr)):
        for j in range(i + 1, len(arr)):
            if arr[i] > arr[j]:
                sign = -sign
    return sign


def form_wedge(a: dict, b: dict) -> dict:
    """Wedge of exterior forms given as {sorted index tuple: coefficient}."""
    out: dict = {}
    for ia, ca in a.items():
        for ib, cb in b.items():
            if set(ia) & set(ib):
                continue
            merged = tuple(sorted(ia + ib))
            sign = _perm_sign(ia + ib)
            out[merged] = out.get(merged, 0.0) + sign * ca * cb
    return {k: v for k, v in out.items() if v != 0.0}


def _form_degree(form: dict) -> int:
    degrees = {len(k) for k in form.keys()}
    if len(degrees) > 1:
        raise PreconditionError("mixed-degree form")
    return degrees.pop() if degrees else 0


def _as_form_fn(form):
    if callable(form):
        return form
    return lambda x, f=form: f


def wedge_defect(plot: PlotChart, alpha, beta, omega,
                 resolution: int = 16) -> float:
    """Max over a grid of |(alpha ^ beta - omega)| evaluated on the
    standard coordinate frame.  Zero certifies that (alpha, beta) realizes
    the volume form; forms are dicts {index tuple: coeff} or callables
    returning such dicts."""
    n = plot.dim
    alpha_fn, beta_fn, omega_fn = map(_as_form_fn, (alpha, beta, omega))
    widths = (plot.upper - plot.lower) / resolution
    axes = [plot.lower[i] + widths[i] * (np.arange(resolution) + 0.5)
            for i in range(n)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    keep = plot.contains(grid)
    full = tuple(range(n))
    worst = 0.0
    checked_degree = False
    for x in grid[keep]:
        a, b, w = alpha_fn(x), beta_fn(x), omega_fn(x)
        if not checked_degree:
            if _form_degree(a) + _form_degree(b) != n:
                raise PreconditionError(
                    f"degrees {_form_degree(a)} + {_form_degree(b)} != plot dim {n}")
            checked_degree = True
        val = form_wedge(a, b).get(full, 0.0) - w.get(full, 0.0)
        worst = max(worst, abs(val))
    return worst


# ---------------------------------------------------------------------------
# endpoint lower bound for polygonal paths of loops


@dataclass(frozen=True)
class EndpointBoundReport:
    length: float
    endpoint_gap: float
    satisfied: bool

    def to_json(self) -> dict:
        return {"length": self.length, "endpoint_gap": self.endpoint_gap,
                "satisfied": self.satisfied}


def endpoint_lower_bound_check(nodes: list, order,
                               slack: float = 1e-8) -> EndpointBoundReport:
    """For a polygonal path of loops in the flat H^s space the arc length
    is the sum of segment norms, which dominates the norm of the endpoint
    difference (triangle inequality in the Hilbert structure)."""
    if len(nodes) < 2:
        raise PreconditionError("need at least two path nodes")
    if not all(isinstance(n, FourierLoop) for n in nodes):
        raise PreconditionError("path nodes must be Fourier loops")
    length = sum(sobolev_norm(b - a, order) for a, b in zip(nodes[:-1], nodes[1:]))
    gap = sobolev_norm(nodes[-1] - nodes[0], order)
    return EndpointBoundReport(float(length), float(gap),
                               bool(length >= gap - slack))
