"""Smooth monotone time-change phi(l, .) of [0, l] onto [0, 1].

The construction integrates a mollified step density: the step takes the
value 1 outside the middle third [l/3, 2l/3] and the plateau value
(3 - 2l)/l inside, and is convolved with a unit-mass bump of width l/6.
The resulting cumulative map has unit slope and vanishing higher
derivatives at both endpoints, slope bounded by 3/l, and reduces to the
identity at l = 1.

Because the step is piecewise constant, the convolution reduces to a
closed form in the bump's first and second antiderivatives, which are
tabulated once at import time; evaluations are then cheap and smooth.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import cumulative_simpson, quad

from .errors import DomainError, PreconditionError

# ---------------------------------------------------------------------------
# the standard bump on [-1, 1]


@lru_cache(maxsize=1)
def _normalization() -> float:
    val, _ = quad(lambda t: np.exp(-1.0 / (1.0 - t * t)), -1.0, 1.0,
                  epsabs=1e-14, epsrel=1e-14)
    return 1.0 / val


def mollifier_eval(t):
    """The unit-mass bump m(t) = c exp(-1/(1-t^2)) on |t| < 1, else 0."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    ti = t[inside]
    out[inside] = _normalization() * np.exp(-1.0 / (1.0 - ti * ti))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class Mollifier:
    """Scaled family m_eps(t) = (1/eps) m(t/eps) with support [-eps, eps]."""

    width: float

    def __post_init__(self):
        if self.width <= 0:
            raise PreconditionError("mollifier width must be positive")

    def eval(self, t):
        return mollifier_eval(np.asarray(t, dtype=float) / self.width) / self.width

    def integral(self) -> float:
        val, _ = quad(self.eval, -self.width, self.width, epsabs=1e-12, epsrel=1e-12)
        return val


# Tabulated antiderivatives of the normalized bump:
#   _F(x)  = int_{-1}^{x} m,        _F2(x) = int_{-1}^{x} _F.
@lru_cache(maxsize=1)
def _tables():
    x = np.linspace(-1.0, 1.0, 1 << 14 | 1)
    m = mollifier_eval(x)
    f = cumulative_simpson(m, x=x, initial=0.0)
    f /= f[-1]  # pin the total mass to 1 exactly
    f2 = cumulative_simpson(f, x=x, initial=0.0)
    return x, f, f2


def _F(x):
    grid, f, _ = _tables()
    x = np.asarray(x, dtype=float)
    return np.interp(x, grid, f, left=0.0, right=1.0)


def _F2(x):
    grid, _, f2 = _tables()
    x = np.asarray(x, dtype=float)
    core = np.interp(x, grid, f2)
    # outside the support: flat on the left, slope 1 on the right
    return np.where(x <= -1.0, 0.0,
                    np.where(x >= 1.0, f2[-1] + (x - 1.0), core))


# ---------------------------------------------------------------------------
# the reparametrization


@dataclass(frozen=True)
class ReparamPhi:
    """Cached evaluator of phi(l, .) for one fixed l in (0, 1].

    ``density_table`` / ``cumulative_table`` hold the mollified density and
    its running integral on a uniform grid over [0, l]; evaluation itself
    uses the closed form and is grid-free.
    """

    l: float
    quadrature_step: float
    s_grid: np.ndarray
    density_table: np.ndarray
    cumulative_table: np.ndarray

    @property
    def plateau(self) -> float:
        return (3.0 - 2.0 * self.l) / self.l


def make_reparam(l: float, quadrature_step: float | None = None) -> ReparamPhi:
    if not 0.0 < l <= 1.0:
        raise DomainError(f"l = {l} outside (0, 1]")
    step = quadrature_step if quadrature_step is not None else l / 4096.0
    if step <= 0 or step > l / 2048.0:
        step = l / 2048.0
    n = max(2, int(np.ceil(l / step)))
    s = np.linspace(0.0, l, n + 1)
    ctx = ReparamPhi(l, l / n, s, np.empty(0), np.empty(0))
    density = _density(l, s)
    cumulative = _phi(l, s)
    object.__setattr__(ctx, "density_table", density)
    object.__setattr__(ctx, "cumulative_table", cumulative)
    return ctx


def _density(l: float, s):
    """Mollified step density psi(l, s) = d phi / d s, valid on all of R."""
    eps = l / 6.0
    delta = 3.0 * (1.0 - l) / l  # plateau - 1
    s = np.asarray(s, dtype=float)
    return 1.0 + delta * (_F((s - l / 3.0) / eps) - _F((s - 2.0 * l / 3.0) / eps))


def _phi(l: float, s):
    """Closed form of the cumulative integral; extends past [0, l] with
    unit slope (phi = s below 0, phi = 1 + (s - l) above l)."""
    eps = l / 6.0
    delta = 3.0 * (1.0 - l) / l
    s = np.asarray(s, dtype=float)
    return s + delta * eps * (_F2((s - l / 3.0) / eps) - _F2((s - 2.0 * l / 3.0) / eps))


def _check_domain(ctx: ReparamPhi, s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if np.any(s < -1e-15) or np.any(s > ctx.l + 1e-15):
        raise DomainError(f"s outside [0, {ctx.l}]")
    return np.clip(s, 0.0, ctx.l)


def phi_eval(ctx: ReparamPhi, s):
    """phi(l, s) for 0 <= s <= l; monotone, phi(l, 0) = 0, phi(l, l) = 1."""
    s = _check_domain(ctx, s)
    out = _phi(ctx.l, s)
    return out if out.ndim else float(out)


def phi_partial_s(ctx: ReparamPhi, s):
    """d phi / d s; equals 1 at both endpoints and is bounded by 3/l."""
    s = _check_domain(ctx, s)
    out = _density(ctx.l, s)
    return out if out.ndim else float(out)


def phi_partial_l(l: float, s, step: float | None = None) -> float:
    """Central-difference estimate of d phi / d l at fixed s (the Lipschitz
    data for continuity estimates in the family parameter)."""
    h = step if step is not None else max(1e-6, 1e-4 * l)
    lo = max(l - h, 1e-9)
    hi = min(l + h, 1.0)
    width = hi - lo
    if width <= 0:
        return 0.0
    return float((_phi(hi, np.minimum(s, hi)) - _phi(lo, np.minimum(s, lo))) / width)


def phi_lipschitz_l(l: float, n_probe: int = 257) -> float:
    """Max over s in [0, l] of |d phi / d l|, estimated on a probe grid."""
    s = np.linspace(0.0, l, n_probe)
    return max(abs(phi_partial_l(l, si)) for si in s)


# ---------------------------------------------------------------------------
# boundary-condition verification


_STENCILS = {
    0: (np.array([1.0]), np.array([0])),
    1: (np.array([-0.5, 0.0, 0.5]), np.array([-1, 0, 1])),
    2: (np.array([1.0, -2.0, 1.0]), np.array([-1, 0, 1])),
    3: (np.array([-0.5, 1.0, 0.0, -1.0, 0.5]), np.array([-2, -1, 0, 1, 2])),
    4: (np.array([1.0, -4.0, 6.0, -4.0, 1.0]), np.array([-2, -1, 0, 1, 2])),
}


def _fd_derivative(l: float, s0: float, order: int, h: float) -> float:
    if order not in _STENCILS:
        raise PreconditionError(f"no stencil for derivative order {order}")
    w, off = _STENCILS[order]
    vals = _phi(l, s0 + off * h)
    return float(np.sum(w * vals) / h ** order)


@dataclass(frozen=True)
class BoundaryReport:
    l: float
    tolerance: float
    rows: list  # dicts: order, at_zero, expect_zero, at_l, expect_l, passed

    @property
    def all_pass(self) -> bool:
        return all(r["passed"] for r in self.rows)

    def to_json(self) -> dict:
        return {"l": self.l, "tolerance": self.tolerance,
                "all_pass": self.all_pass, "rows": self.rows}


def verify_boundary_conditions(ctx: ReparamPhi, max_derivative_order: int,
                               tol: float) -> BoundaryReport:
    """Finite-difference check of the endpoint pattern: values (0, 1) at
    (s=0, s=l), unit first derivative at both ends, zero higher derivatives.
    The closed form extends smoothly past the endpoints, so central
    stencils apply directly."""
    if max_derivative_order < 2:
        raise PreconditionError("need max_derivative_order >= 2")
    l = ctx.l
    h = l / 64.0
    rows = []
    for k in range(max_derivative_order + 1):
        expect0 = {0: 0.0, 1: 1.0}.get(k, 0.0)
        expect1 = {0: 1.0, 1: 1.0}.get(k, 0.0)
        at0 = _fd_derivative(l, 0.0, k, h)
        at1 = _fd_derivative(l, l, k, h)
        rows.append({
            "order": k,
            "at_zero": at0, "expect_zero": expect0,
            "at_l": at1, "expect_l": expect1,
            "passed": bool(abs(at0 - expect0) <= tol and abs(at1 - expect1) <= tol),
        })
    return BoundaryReport(l, tol, rows)


def report_dumps(report: BoundaryReport) -> str:
    return json.dumps(report.to_json())


def tables_to_csv(ctx: ReparamPhi, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["s", "density", "phi"])
        for s, d, p in zip(ctx.s_grid, ctx.density_table, ctx.cumulative_table):
            writer.writerow([repr(float(s)), repr(float(d)), repr(float(p))])
