"""Three explicit homotopy families on loop spaces, with measurement.

* the basepoint family gamma_h: a bridge loop tau is grafted onto gamma
  through the mollified time-change, joining gamma to its based companions
  and degenerating to tau followed by its reversal as h -> 1;
* the retraction family H(s', gamma): reparametrize-then-freeze, which is
  1-Lipschitz in the loop for the L^2 norm;
* the truncation family H(t, gamma): cut the loop off to the basepoint
  after time t, with the delta_p ramp approximants.

Warped compositions gamma o phi are evaluated through a periodic cubic
spline of the samples; the interpolation operator is linear in the data,
so differences of warped loops are the warp of the difference.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import PreconditionError, ResolutionError
from .manifolds import ManifoldSpec
from .mollifier import ReparamPhi, make_reparam, phi_eval, phi_lipschitz_l
from .spectral import SampledLoop, SobolevOrder, dft_analyze, sobolev_norm


def periodic_interpolator(loop: SampledLoop):
    """Componentwise periodic cubic spline through the samples; accepts
    arbitrary real times (wrapped mod 1)."""
    m = loop.sample_count
    t = np.linspace(0.0, 1.0, m + 1)
    y = np.vstack([loop.samples, loop.samples[:1]])
    spline = CubicSpline(t, y, axis=0, bc_type="periodic")

    def evaluate(times):
        return spline(np.mod(np.asarray(times, dtype=float), 1.0))

    return evaluate


def warp_loop(loop: SampledLoop, times: np.ndarray) -> np.ndarray:
    return periodic_interpolator(loop)(times)


# ---------------------------------------------------------------------------
# the basepoint family gamma_h


def _check_bridge(gamma: SampledLoop, tau: SampledLoop):
    if gamma.sample_count != tau.sample_count:
        raise PreconditionError("gamma and tau need matching sample grids")
    m = tau.sample_count
    x = gamma.samples[0]
    mid = tau.samples[m // 2]
    if gamma.ambient.norm(mid - x) > 1e-5 * (1.0 + gamma.ambient.norm(x)):
        raise PreconditionError(
            "tau does not pass through gamma(0) at its midpoint (bridge condition)")


def gamma_h(gamma: SampledLoop, tau: SampledLoop, h: float) -> SampledLoop:
    """Three-branch graft: tau time-changed on [0, h/2] and [1-h/2, 1],
    gamma time-changed on the middle.  h = 0 returns gamma itself, h = 1
    the out-and-back limit of tau."""
    _check_bridge(gamma, tau)
    if not 0.0 <= h <= 1.0:
        raise PreconditionError(f"h = {h} outside [0, 1]")
    if h == 0.0:
        return gamma
    if h == 1.0:
        return tau_wedge_reverse(tau)
    m = gamma.sample_count
    s = np.arange(m) / m
    tau_f = periodic_interpolator(tau)
    gamma_f = periodic_interpolator(gamma)
    phi_edge = make_reparam(h / 2.0)
    phi_mid = make_reparam(1.0 - h)
    out = np.empty_like(gamma.samples)
    left = s <= h / 2.0
    right = s >= 1.0 - h / 2.0
    middle = ~(left | right)
    out[left] = tau_f(phi_eval(phi_edge, s[left]))
    out[middle] = gamma_f(phi_eval(phi_mid, s[middle] - h / 2.0))
    out[right] = tau_f(phi_eval(phi_edge, 1.0 - s[right]))
    return SampledLoop(out, gamma.ambient)


def tau_wedge_reverse(tau: SampledLoop) -> SampledLoop:
    """The h -> 1 limit loop: tau time-changed onto [0, 1/2], then its
    reversal on [1/2, 1]."""
    m = tau.sample_count
    s = np.arange(m) / m
    tau_f = periodic_interpolator(tau)
    phi_half = make_reparam(0.5)
    out = np.empty_like(tau.samples)
    first = s <= 0.5
    out[first] = tau_f(phi_eval(phi_half, s[first]))
    out[~first] = tau_f(phi_eval(phi_half, 1.0 - s[~first]))
    return SampledLoop(out, tau.ambient)


def gamma_h_bound(h: float, sup_tau: float, sup_gamma: float,
                  sup_dgamma: float) -> float:
    """Quantitative L^2 bound for ||gamma_h - gamma||: two edge terms
    h (sup||tau|| + sup||gamma||)^2 / 2 and a middle term driven by the
    time-change's Lipschitz data in the family parameter."""
    if h >= 1.0:
        raise PreconditionError("bound defined for h < 1")
    m_lip = phi_lipschitz_l(1.0 - h)
    edge = h * (sup_tau + sup_gamma) ** 2 / 2.0
    middle = (1.0 - h) * (h * m_lip * sup_dgamma
                          + 3.0 * h * sup_dgamma / (2.0 * (1.0 - h))) ** 2
    return float(np.sqrt(2.0 * edge + middle))


# ---------------------------------------------------------------------------
# the retraction family


def retraction_homotopy(gamma: SampledLoop, s_prime: float) -> SampledLoop:
    """Reparametrize gamma onto [0, 1 - s'] through the time-change, then
    freeze at the terminal value."""
    if not 0.0 <= s_prime <= 1.0:
        raise PreconditionError(f"s' = {s_prime} outside [0, 1]")
    if s_prime == 0.0:
        return gamma
    terminal = gamma.samples[0]  # gamma(1) = gamma(0) on the periodic grid
    if s_prime == 1.0:
        return SampledLoop(np.tile(terminal, (gamma.sample_count, 1)), gamma.ambient)
    m = gamma.sample_count
    l = np.arange(m) / m
    live = l <= 1.0 - s_prime
    phi_ctx = make_reparam(1.0 - s_prime)
    out = np.empty_like(gamma.samples)
    out[live] = periodic_interpolator(gamma)(phi_eval(phi_ctx, l[live]))
    out[~live] = terminal
    return SampledLoop(out, gamma.ambient)


# ---------------------------------------------------------------------------
# the truncation family and its ramp approximants


def truncation_homotopy(gamma: SampledLoop, t: float,
                        manifold: ManifoldSpec) -> SampledLoop:
    """Keep samples before time t, send the rest to the manifold basepoint."""
    if not 0.0 <= t <= 1.0:
        raise PreconditionError(f"t = {t} outside [0, 1]")
    out = gamma.samples.copy()
    out[gamma.times >= t] = manifold.basepoint
    return SampledLoop(out, gamma.ambient)


def delta_p(gamma: SampledLoop, t: float, p: int) -> SampledLoop:
    """Continuous approximant of the truncation: gamma before t, the
    remaining arc compressed onto (t, t + 1/p), the basepoint after.
    Requires a based loop (gamma(0) is used as the basepoint)."""
    if p < 1:
        raise PreconditionError("p must be a positive integer")
    if t + 1.0 / p >= 1.0:
        raise PreconditionError(f"t + 1/p = {t + 1.0 / p} must stay below 1")
    m = gamma.sample_count
    if m < 8 * p:
        raise ResolutionError(
            f"{m} samples cannot resolve the 1/{p} ramp (need >= {8 * p})")
    times = gamma.times
    out = gamma.samples.copy()
    ramp = (times > t) & (times < t + 1.0 / p)
    tail = times >= t + 1.0 / p
    warped = t + p * (1.0 - t) * (times[ramp] - t)
    out[ramp] = periodic_interpolator(gamma)(warped)
    out[tail] = gamma.samples[0]
    return SampledLoop(out, gamma.ambient)


# ---------------------------------------------------------------------------
# family containers and continuity measurement


@dataclass(frozen=True)
class HomotopyFamily:
    kind: str  # basepoint-family | retraction | truncation
    base_loop: SampledLoop
    parameter_grid: tuple
    tau: SampledLoop | None = None
    manifold: ManifoldSpec | None = None

    def __post_init__(self):
        if self.kind not in ("basepoint-family", "retraction", "truncation"):
            raise PreconditionError(f"unknown family kind {self.kind!r}")
        if self.kind == "basepoint-family" and self.tau is None:
            raise PreconditionError("basepoint family needs the bridge loop tau")
        if self.kind == "truncation" and self.manifold is None:
            raise PreconditionError("truncation family needs a manifold (basepoint)")

    def member(self, param: float) -> SampledLoop:
        if self.kind == "basepoint-family":
            return gamma_h(self.base_loop, self.tau, param)
        if self.kind == "retraction":
            return retraction_homotopy(self.base_loop, param)
        return truncation_homotopy(self.base_loop, param, self.manifold)


@dataclass(frozen=True)
class ModulusReport:
    order: float
    rows: list  # dicts: gap, distance, bound (may be nan), passed
    fitted_exponent: float
    exponent_halfwidth: float
    diverges: bool

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["gap", "distance", "bound", "pass"])
            for r in self.rows:
                writer.writerow([repr(r["gap"]), repr(r["distance"]),
                                 repr(r["bound"]), int(r["passed"])])


def sobolev_distance(u: SampledLoop, v: SampledLoop, order) -> float:
    diff = u - v
    cutoff = (diff.sample_count - 1) // 2
    return sobolev_norm(dft_analyze(diff, cutoff), order)


def _fit_exponent(gaps, dists):
    x = np.log(np.asarray(gaps))
    y = np.log(np.maximum(np.asarray(dists), 1e-300))
    coeffs, residuals, *_ = np.polyfit(x, y, 1, full=True)
    slope = float(coeffs[0])
    n = len(x)
    if n > 2 and residuals.size:
        sigma2 = float(residuals[0]) / (n - 2)
        sxx = float(np.sum((x - x.mean()) ** 2))
        half = 2.0 * np.sqrt(sigma2 / sxx)
    else:
        half = 0.0
    return slope, max(half, 0.05)


def continuity_modulus(family: HomotopyFamily, order) -> ModulusReport:
    """Distances between adjacent family members versus their parameter
    gap, with the quantitative comparison bound where one is available."""
    grid = sorted(family.parameter_grid)
    if len(grid) < 8:
        raise PreconditionError("parameter grid needs at least 8 points")
    s = order.s if isinstance(order, SobolevOrder) else float(order)
    members = [family.member(p) for p in grid]
    sup_gamma = family.base_loop.sup_norm()
    from .manifolds import _spectral_derivative
    sup_dgamma = _spectral_derivative(family.base_loop).sup_norm()
    rows = []
    for (p1, m1), (p2, m2) in zip(zip(grid, members), zip(grid[1:], members[1:])):
        gap = p2 - p1
        if gap <= 0:
            continue
        dist = sobolev_distance(m1, m2, s)
        bound = float("nan")
        if family.kind == "truncation" and s == 0.0:
            bound = sup_gamma * np.sqrt(gap)
        elif family.kind == "retraction" and s == 0.0 and p1 > 0:
            k_lip = max(phi_lipschitz_l(1.0 - p1), phi_lipschitz_l(1.0 - p2))
            bound = np.sqrt(k_lip * (1.0 - p2) * gap * sup_dgamma ** 2
                            + gap * sup_dgamma ** 2)
        passed = bool(np.isnan(bound) or dist <= bound * (1.0 + 1e-9))
        rows.append({"gap": float(gap), "distance": float(dist),
                     "bound": float(bound), "passed": passed})
    slope, half = _fit_exponent([r["gap"] for r in rows],
                                [r["distance"] for r in rows])
    return ModulusReport(order=s, rows=rows, fitted_exponent=slope,
                         exponent_halfwidth=half, diverges=slope < 0.1)
