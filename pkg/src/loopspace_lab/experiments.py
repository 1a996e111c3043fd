"""Config-driven experiment harness.

Each experiment runs a deterministic verification sweep, writes a
``results.csv`` table, a ``report.json`` with per-assertion outcomes, a
gnuplot-compatible plot script referencing the CSV, and a rendered
``figure.png``.  Reruns with identical config and seed produce
byte-identical CSV output (floats are written via shortest-roundtrip
``repr``).
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
import time
from dataclasses import dataclass, field

import numpy as np

from . import diffeology as dg
from . import homotopy as ho
from . import manifolds as mf
from . import mollifier as mo
from . import symplectic as sy
from .errors import ConfigError, PreconditionError
from .spectral import (SCALAR, AmbientAlgebra, FourierLoop, SampledLoop,
                       dft_analyze, dft_synthesize, pointwise_product,
                       random_band_limited_loop, random_rough_loop,
                       sobolev_norm)

EXPERIMENTS = (
    "norms", "mollifier", "homotopy-pc", "homotopy-retraction",
    "homotopy-truncation", "distance-glued", "volumes", "symplectic",
    "multiplication",
)

_CONFIG_KEYS = ("experiment", "resolution", "mode_cutoff", "s_values",
                "parameter_grid", "manifold", "seed", "output_dir",
                "tolerances")


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    resolution: int
    mode_cutoff: int
    s_values: tuple
    parameter_grid: tuple
    manifold: mf.ManifoldSpec | None
    seed: int
    output_dir: str
    tolerances: dict

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}",
                              field="experiment")
        if self.resolution < 2:
            raise ConfigError("resolution must be >= 2", field="resolution")
        if self.mode_cutoff < 0:
            raise ConfigError("mode_cutoff must be >= 0", field="mode_cutoff")
        if self.resolution < 2 * self.mode_cutoff + 1:
            raise ConfigError(
                f"resolution {self.resolution} cannot carry mode cutoff "
                f"{self.mode_cutoff} (need >= {2 * self.mode_cutoff + 1})",
                field="resolution")
        if len(self.s_values) == 0:
            raise ConfigError("s_values must be nonempty", field="s_values")
        if len(self.parameter_grid) == 0:
            raise ConfigError("parameter_grid must be nonempty",
                              field="parameter_grid")
        for name, value in self.tolerances.items():
            if not (isinstance(value, (int, float)) and value > 0):
                raise ConfigError(f"tolerance {name!r} must be positive",
                                  field="tolerances")

    def tol(self, name: str, default: float) -> float:
        return float(self.tolerances.get(name, default))

    def to_json(self) -> dict:
        return {
            "experiment": self.experiment,
            "resolution": self.resolution,
            "mode_cutoff": self.mode_cutoff,
            "s_values": list(self.s_values),
            "parameter_grid": list(self.parameter_grid),
            "manifold": None if self.manifold is None
            else mf.manifold_to_json(self.manifold),
            "seed": self.seed,
            "output_dir": self.output_dir,
            "tolerances": dict(self.tolerances),
        }


def config_from_json(data: dict) -> ExperimentConfig:
    """Strict parse: the nine documented keys, nothing else."""
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object", field="<root>")
    for key in data:
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"unknown config key {key!r}", field=key)
    if "experiment" not in data:
        raise ConfigError("missing required key 'experiment'",
                          field="experiment")
    manifold = data.get("manifold")
    if manifold is not None:
        manifold = mf.manifold_from_json(manifold)
    return ExperimentConfig(
        experiment=data["experiment"],
        resolution=int(data.get("resolution", 1024)),
        mode_cutoff=int(data.get("mode_cutoff", 64)),
        s_values=tuple(data.get("s_values", [0.0])),
        parameter_grid=tuple(data.get("parameter_grid", [1.0])),
        manifold=manifold,
        seed=int(data.get("seed", 0)),
        output_dir=str(data.get("output_dir", ".")),
        tolerances=dict(data.get("tolerances", {})),
    )


def config_from_file(path) -> ExperimentConfig:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}",
                              field="<file>") from exc
    return config_from_json(data)


def config_hash(config: ExperimentConfig) -> str:
    blob = json.dumps(config.to_json(), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


# ---------------------------------------------------------------------------
# result table


def _format_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (np.floating,)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


@dataclass
class ResultTable:
    columns: list
    rows: list  # lists matching columns
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.columns):
                raise PreconditionError("result rows must be rectangular")

    def column(self, name: str) -> list:
        if name not in self.columns:
            raise PreconditionError(f"no column named {name!r}")
        j = self.columns.index(name)
        return [row[j] for row in self.rows]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(self.columns)
            for row in self.rows:
                writer.writerow([_format_cell(x) for x in row])

    @classmethod
    def from_csv(cls, path) -> "ResultTable":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            columns = next(reader)
            rows = []
            for raw in reader:
                row = []
                for cell in raw:
                    try:
                        row.append(float(cell))
                    except ValueError:
                        row.append(cell)
                rows.append(row)
        return cls(columns=columns, rows=rows)


def _assert_row(name: str, anchor: str, measured: float, bound: float,
                passed: bool) -> dict:
    return {"name": name, "anchor": anchor, "measured": float(measured),
            "bound": float(bound), "pass": bool(passed)}


# ---------------------------------------------------------------------------
# experiment bodies; each returns (columns, rows, assertions, plot_spec)


def _run_norms(cfg: ExperimentConfig):
    columns = ["s", "single_mode_norm", "expected", "abs_error"]
    rows, assertions = [], []
    coeffs = np.zeros((3, 1), dtype=complex)
    coeffs[2, 0] = 1.0  # mode n = +1
    e1 = FourierLoop(1, coeffs, SCALAR)
    tol = cfg.tol("single_mode", 1e-12)
    for s in cfg.s_values:
        measured = sobolev_norm(e1, s)
        expected = 2.0 ** s
        err = abs(measured - expected)
        rows.append([float(s), measured, expected, err])
        assertions.append(_assert_row(
            f"single-mode-norm-s={s}", "norm-definition", err, tol, err <= tol))
    worst = 0.0
    for k in range(20):
        f = random_band_limited_loop(cfg.mode_cutoff, cfg.seed + k, SCALAR)
        samples = dft_synthesize(f, cfg.resolution)
        grid_l2 = samples.l2_norm()
        spectral_l2 = sobolev_norm(f, 0.0)
        worst = max(worst, abs(grid_l2 - spectral_l2))
    ptol = cfg.tol("parseval", 1e-10)
    assertions.append(_assert_row("parseval-s=0", "norm-definition",
                                  worst, ptol, worst <= ptol))
    return columns, rows, assertions, ("s", ["single_mode_norm", "expected"], False)


def _run_mollifier(cfg: ExperimentConfig):
    columns = ["l", "plateau", "sup_slope", "slope_bound", "boundary_pass"]
    rows, assertions = [], []
    tol = cfg.tol("boundary", 1e-4)
    for l in cfg.parameter_grid:
        ctx = mo.make_reparam(float(l))
        report = mo.verify_boundary_conditions(ctx, 3, tol)
        probe = np.linspace(0.0, float(l), 4097)
        sup_slope = float(np.max(mo.phi_partial_s(ctx, probe)))
        bound = 3.0 / float(l) + 1e-6
        rows.append([float(l), ctx.plateau, sup_slope, bound,
                     int(report.all_pass)])
        assertions.append(_assert_row(
            f"boundary-conditions-l={l}", "time-change",
            0.0 if report.all_pass else 1.0, 0.5, report.all_pass))
        assertions.append(_assert_row(
            f"slope-bound-l={l}", "time-change", sup_slope, bound,
            sup_slope <= bound))
        if float(l) == 1.0:
            ident = float(np.max(np.abs(mo.phi_eval(ctx, probe) - probe)))
            itol = cfg.tol("identity", 1e-10)
            assertions.append(_assert_row("identity-at-l=1",
                                          "time-change", ident, itol,
                                          ident <= itol))
    return columns, rows, assertions, ("l", ["sup_slope", "slope_bound"], False)


def off_basepoint_circle_loop(resolution: int, amplitude: float = 0.06,
                              width: float = 0.1) -> SampledLoop:
    """Smooth unit-circle loop staying off the basepoint 1: a phase bump
    concentrated near t = 0 with zero velocity there."""
    t = np.arange(resolution) / resolution
    envelope = np.exp(-(np.sin(np.pi * t) / width) ** 2)
    values = np.exp(1j * amplitude * envelope)
    return SampledLoop(values[:, None], mf.circle().ambient)


def _run_homotopy_pc(cfg: ExperimentConfig):
    manifold = cfg.manifold or mf.circle()
    gamma = off_basepoint_circle_loop(cfg.resolution)
    x0 = gamma.samples[0]
    velocity = np.zeros_like(x0)
    tau = mf.bridge_loop(x0, velocity, manifold, cfg.resolution)
    sup_tau = tau.sup_norm()
    sup_gamma = gamma.sup_norm()
    sup_dgamma = mf._spectral_derivative(gamma).sup_norm()
    columns = ["h", "l2_distance", "bound", "rough_distance"]
    rows = []
    hs = sorted(float(h) for h in cfg.parameter_grid)
    for h in hs:
        member = ho.gamma_h(gamma, tau, h)
        dist = (member - gamma).l2_norm()
        bound = ho.gamma_h_bound(h, sup_tau, sup_gamma, sup_dgamma)
        rough = ho.sobolev_distance(member, gamma, 0.75)
        rows.append([h, dist, bound, rough])
    assertions = []
    dists = [r[1] for r in rows]
    decreasing = all(a > b for a, b in zip(dists[1:], dists[:-1]))
    assertions.append(_assert_row("distance-strictly-decreasing",
                                  "basepoint-family", 0.0 if decreasing else 1.0,
                                  0.5, decreasing))
    final_tol = cfg.tol("final_distance", 0.05)
    assertions.append(_assert_row("final-distance", "basepoint-family",
                                  dists[0], final_tol, dists[0] < final_tol))
    bound_ok = all(r[1] <= r[2] * (1.0 + 1e-9) for r in rows)
    assertions.append(_assert_row("three-term-bound", "basepoint-family",
                                  max(r[1] / r[2] for r in rows), 1.0 + 1e-9,
                                  bound_ok))
    near_limit = ho.gamma_h(gamma, tau, 1.0 - 2.0 ** -10)
    limit_dist = (near_limit - ho.tau_wedge_reverse(tau)).l2_norm()
    ltol = cfg.tol("limit_distance", 1e-3)
    assertions.append(_assert_row("out-and-back-limit", "basepoint-family",
                                  limit_dist, ltol, limit_dist < ltol))
    rough_floor = cfg.tol("rough_floor", 0.1)
    assertions.append(_assert_row("rough-distance-persists",
                                  "basepoint-family", rows[0][3], rough_floor,
                                  rows[0][3] > rough_floor))
    return columns, rows, assertions, ("h", ["l2_distance", "bound"], True)


def _based_loop(seed: int, resolution: int, cutoff: int) -> SampledLoop:
    f = random_band_limited_loop(cutoff, seed, AmbientAlgebra(2))
    s = dft_synthesize(f, resolution)
    return SampledLoop(s.samples - s.samples[0], s.ambient)


def _run_homotopy_retraction(cfg: ExperimentConfig):
    columns = ["s_prime", "max_ratio"]
    rows, assertions = [], []
    pairs = int(cfg.tol("pairs", 100))
    slack = cfg.tol("lipschitz_slack", 1e-8)
    for s_prime in cfg.parameter_grid:
        worst = 0.0
        for k in range(pairs):
            a = _based_loop(cfg.seed + 2 * k, cfg.resolution, cfg.mode_cutoff)
            b = _based_loop(cfg.seed + 2 * k + 1, cfg.resolution,
                            cfg.mode_cutoff)
            num = (ho.retraction_homotopy(a, float(s_prime))
                   - ho.retraction_homotopy(b, float(s_prime))).l2_norm()
            den = (a - b).l2_norm()
            if den > 0:
                worst = max(worst, num / den)
        rows.append([float(s_prime), worst])
        assertions.append(_assert_row(
            f"lipschitz-ratio-s'={s_prime}", "retraction", worst,
            1.0 + slack, worst <= 1.0 + slack))
    probe = _based_loop(cfg.seed, cfg.resolution, cfg.mode_cutoff)
    start_err = float(np.max(np.abs(
        ho.retraction_homotopy(probe, 0.0).samples - probe.samples)))
    end_err = float(np.max(np.abs(
        ho.retraction_homotopy(probe, 1.0).samples - probe.samples[0])))
    assertions.append(_assert_row("identity-at-0", "retraction", start_err,
                                  1e-300, start_err == 0.0))
    assertions.append(_assert_row("constant-at-1", "retraction", end_err,
                                  1e-300, end_err == 0.0))
    return columns, rows, assertions, ("s_prime", ["max_ratio"], False)


def _run_homotopy_truncation(cfg: ExperimentConfig):
    manifold = cfg.manifold or mf.full_space(2)
    loops = int(cfg.tol("loops", 50))
    contraction_ok = True
    t_grid = np.arange(64) / 64
    for k in range(loops):
        loop = _based_loop(cfg.seed + k, cfg.resolution, cfg.mode_cutoff)
        norm = loop.l2_norm()
        for t in t_grid:
            if ho.truncation_homotopy(loop, float(t), manifold).l2_norm() \
                    > norm + 1e-12:
                contraction_ok = False
    assertions = [_assert_row("norm-contraction", "truncation",
                              0.0 if contraction_ok else 1.0, 0.5,
                              contraction_ok)]
    # modulus in t: geometric, sample-aligned grid so the exponent fit is
    # well conditioned and free of truncation-boundary rounding
    probe = off_basepoint_circle_loop(cfg.resolution)
    probe = SampledLoop(probe.samples, AmbientAlgebra(1))
    m = cfg.resolution
    t_geo = tuple(round(m * (0.1 + 0.5 * 2.0 ** -k)) / m for k in range(9))
    family = ho.HomotopyFamily("truncation", probe, t_geo,
                               manifold=mf.full_space(1))
    modulus = ho.continuity_modulus(family, 0.0)
    lo, hi = cfg.tol("exponent_low", 0.45), cfg.tol("exponent_high", 0.55)
    in_band = lo <= modulus.fitted_exponent <= hi
    assertions.append(_assert_row("t-modulus-exponent", "truncation",
                                  modulus.fitted_exponent, hi, in_band))
    # ramp approximants
    columns = ["p", "distance", "bound"]
    rows = []
    t_cut = 0.4
    ramp_loop = _based_loop(cfg.seed + 1000, cfg.resolution, cfg.mode_cutoff)
    target = ho.truncation_homotopy(ramp_loop, t_cut, mf.full_space(2))
    sup = ramp_loop.sup_norm()
    ps = sorted(int(p) for p in cfg.parameter_grid)
    for p in ps:
        dist = (ho.delta_p(ramp_loop, t_cut, p) - target).l2_norm()
        rows.append([p, dist, sup / np.sqrt(p)])
    slope = -float(np.polyfit(np.log(ps), np.log([r[1] for r in rows]), 1)[0])
    half = cfg.tol("rate_halfwidth", 0.05)
    assertions.append(_assert_row("ramp-rate-exponent", "truncation", slope,
                                  0.5 + half, abs(slope - 0.5) <= half))
    bound_ok = all(r[1] <= r[2] for r in rows)
    assertions.append(_assert_row("ramp-rate-bound", "truncation",
                                  max(r[1] / r[2] for r in rows), 1.0,
                                  bound_ok))
    return columns, rows, assertions, ("p", ["distance", "bound"], True)


def _run_distance_glued(cfg: ExperimentConfig):
    columns = ["i", "distance"]
    rows = []
    for i in sorted(int(i) for i in cfg.parameter_grid):
        rows.append([i, dg.glued_lines_distance(i)])
    max_copy = max(int(i) for i in cfg.parameter_grid)
    space = dg.GluedLinesSpace(max_copy=max_copy)
    result = dg.pseudo_distance(space, dg.ZERO_BAR, dg.ONE_BAR)
    tol = cfg.tol("upper_bound", 1e-6)
    assertions = [_assert_row("vanishing-pseudo-distance", "glued-lines",
                              result.upper_bound, tol,
                              result.upper_bound <= tol)]
    dists = [r[1] for r in rows]
    monotone = all(a > b for a, b in zip(dists, dists[1:]))
    assertions.append(_assert_row("copy-distances-decreasing", "glued-lines",
                                  0.0 if monotone else 1.0, 0.5, monotone))
    _, _, check = dg.d_topology_separation_witness()
    witness = check(10_000, cfg.seed)
    separated = witness["disjoint"] and witness["zero_in_u0"] \
        and witness["one_in_u1"] and not witness["zero_in_u1"] \
        and not witness["one_in_u0"]
    assertions.append(_assert_row("separation-witness", "glued-lines",
                                  witness["overlaps"], 0.5, separated))
    return columns, rows, assertions, ("i", ["distance"], True)


def _run_volumes(cfg: ExperimentConfig):
    columns = ["chart", "value", "expected", "abs_error", "degenerate_points"]
    rows, assertions = [], []
    resolution = cfg.resolution

    flat = dg.flat_chart(2)
    v_flat = dg.hausdorff_volume(flat, resolution=min(resolution, 64))
    rows.append(["flat-square", v_flat.value, 1.0, abs(v_flat.value - 1.0),
                 v_flat.degenerate_points])
    ftol = cfg.tol("flat", 1e-12)
    assertions.append(_assert_row("flat-square-area", "hausdorff-volume",
                                  abs(v_flat.value - 1.0), ftol,
                                  abs(v_flat.value - 1.0) <= ftol))

    # one fundamental domain of the band: the y-range halves to length 1
    mob = dg.restrict(dg.mobius_chart(), [0.0, -0.5], [1.0, 0.5])
    v_mob = dg.hausdorff_volume(mob, resolution=min(resolution, 256))
    rows.append(["mobius-fundamental", v_mob.value, 1.0,
                 abs(v_mob.value - 1.0), v_mob.degenerate_points])
    mtol = cfg.tol("mobius", 1e-6)
    assertions.append(_assert_row("mobius-area", "hausdorff-volume",
                                  abs(v_mob.value - 1.0), mtol,
                                  abs(v_mob.value - 1.0) <= mtol))

    sphere = dg.sphere_exponential_chart(max_radius=np.pi)
    v_sph = dg.hausdorff_volume(sphere, resolution=resolution)
    expected = 4.0 * np.pi
    rows.append(["sphere-exponential", v_sph.value, expected,
                 abs(v_sph.value - expected), v_sph.degenerate_points])
    stol = cfg.tol("sphere", 1e-3)
    assertions.append(_assert_row("sphere-area", "hausdorff-volume",
                                  abs(v_sph.value - expected), stol,
                                  abs(v_sph.value - expected) <= stol))

    lo, hi = np.array(mob.lower), np.array(mob.upper)
    mid = (lo + hi) / 2.0
    n_half = min(resolution, 256) // 2
    left = dg.restrict(mob, lo, np.array([mid[0], hi[1]]))
    right = dg.restrict(mob, np.array([mid[0], lo[1]]), hi)
    split = dg.hausdorff_volume(left, resolution=n_half).value \
        + dg.hausdorff_volume(right, resolution=n_half).value
    whole = dg.hausdorff_volume(mob, resolution=2 * n_half).value
    atol = cfg.tol("additivity", 1e-9)
    assertions.append(_assert_row("partition-additivity", "hausdorff-volume",
                                  abs(split - whole), atol,
                                  abs(split - whole) <= atol))
    return columns, rows, assertions, ("chart", ["value", "expected"], False)


def _run_symplectic(cfg: ExperimentConfig):
    columns = ["n", "ratio", "closed_form"]
    rows, assertions = [], []
    ctol = cfg.tol("closed_form", 1e-12)
    worst_cf = 0.0
    for n in sorted(int(n) for n in cfg.parameter_grid):
        size = 2 * abs(n) + 1
        coeffs = np.zeros((size, 1), dtype=complex)
        idx = n + abs(n)
        cx = coeffs.copy()
        cx[idx, 0] = 1.0
        cy = coeffs.copy()
        cy[idx, 0] = 1.0j
        ratio = sy.pairing_ratio(FourierLoop(abs(n), cx, SCALAR),
                                 FourierLoop(abs(n), cy, SCALAR))
        closed = sy.single_mode_ratio(n)
        rows.append([n, ratio, closed])
        worst_cf = max(worst_cf, abs(ratio - closed))
    assertions.append(_assert_row("per-mode-closed-form", "pairing-bound",
                                  worst_cf, ctol, worst_cf <= ctol))
    worst_anti = 0.0
    for k in range(20):
        x = random_rough_loop(0.55, cfg.mode_cutoff, cfg.seed + 2 * k)
        y = random_rough_loop(0.55, cfg.mode_cutoff, cfg.seed + 2 * k + 1)
        worst_anti = max(worst_anti,
                         abs(sy.omega_flat(x, y) + sy.omega_flat(y, x)))
    atol = cfg.tol("antisymmetry", 1e-12)
    assertions.append(_assert_row("antisymmetry", "pairing-bound", worst_anti,
                                  atol, worst_anti <= atol))
    trials = int(cfg.tol("trials", 1000))
    report = sy.pairing_bound_check(trials, cfg.mode_cutoff, seed=cfg.seed)
    assertions.append(_assert_row("pairing-ratio-bound", "pairing-bound",
                                  report.max_ratio, report.bound,
                                  report.max_ratio <= report.bound))
    return columns, rows, assertions, ("n", ["ratio", "closed_form"], False)


def _run_multiplication(cfg: ExperimentConfig):
    columns = ["cutoff", "max_ratio"]
    rows = []
    k_order, s_order = 0.75, 0.25
    pairs = int(cfg.tol("pairs", 20))
    for cutoff in sorted(int(c) for c in cfg.parameter_grid):
        m = 4 * cutoff + 4
        worst = 0.0
        for j in range(pairs):
            f = random_rough_loop(1.0, cutoff, cfg.seed + 2 * j, SCALAR)
            g = random_rough_loop(0.5, cutoff, cfg.seed + 2 * j + 1, SCALAR)
            fs, gs = dft_synthesize(f, m), dft_synthesize(g, m)
            product = dft_analyze(pointwise_product(fs, gs), 2 * cutoff)
            ratio = sobolev_norm(product, s_order) / (
                sobolev_norm(f, k_order) * sobolev_norm(g, s_order))
            worst = max(worst, ratio)
        rows.append([cutoff, worst])
    ratios = [r[1] for r in rows]
    spread = max(ratios) / min(ratios)
    cap = cfg.tol("spread", 2.0)
    assertions = [_assert_row("ratio-spread-across-cutoffs",
                              "multiplication-action", spread, cap,
                              spread < cap)]
    return columns, rows, assertions, ("cutoff", ["max_ratio"], True)


_RUNNERS = {
    "norms": _run_norms,
    "mollifier": _run_mollifier,
    "homotopy-pc": _run_homotopy_pc,
    "homotopy-retraction": _run_homotopy_retraction,
    "homotopy-truncation": _run_homotopy_truncation,
    "distance-glued": _run_distance_glued,
    "volumes": _run_volumes,
    "symplectic": _run_symplectic,
    "multiplication": _run_multiplication,
}


# ---------------------------------------------------------------------------
# harness


def run_experiment(config: ExperimentConfig) -> ResultTable:
    """Run one experiment and persist results.csv / report.json / plot.gp /
    figure.png under config.output_dir."""
    start = time.monotonic()
    columns, rows, assertions, plot_spec = _RUNNERS[config.experiment](config)
    elapsed = time.monotonic() - start
    failing = [i for i, a in enumerate(assertions) if not a["pass"]]
    table = ResultTable(columns=columns, rows=rows, metadata={
        "config": config.to_json(),
        "config_hash": config_hash(config),
        "wall_time_s": elapsed,
        "assertions": assertions,
        "failing_assertions": failing,
        "all_pass": not failing,
    })
    out = config.output_dir
    os.makedirs(out, exist_ok=True)
    csv_path = os.path.join(out, "results.csv")
    table.to_csv(csv_path)
    with open(os.path.join(out, "report.json"), "w") as fh:
        json.dump({
            "experiment": config.experiment,
            "config": config.to_json(),
            "config_hash": table.metadata["config_hash"],
            "wall_time_s": elapsed,
            "assertions": assertions,
            "failing_assertions": failing,
            "all_pass": not failing,
        }, fh, indent=2)
        fh.write("\n")
    if plot_spec is not None:
        x_col, y_cols, log_axes = plot_spec
        emit_plot_data(table, x_col, y_cols,
                       os.path.join(out, "plot.gp"),
                       csv_name="results.csv", log_axes=log_axes)
        _render_figure(table, x_col, y_cols,
                       os.path.join(out, "figure.png"), log_axes)
    return table


def emit_plot_data(table: ResultTable, x_column: str, y_columns,
                   path, csv_name: str = "results.csv",
                   log_axes: bool = False) -> None:
    """Write a gnuplot-compatible script plotting y_columns against
    x_column from the CSV the harness wrote next to it."""
    y_columns = list(y_columns)
    if not y_columns:
        raise PreconditionError("need at least one y column")
    for name in [x_column] + y_columns:
        if name not in table.columns:
            raise PreconditionError(f"no column named {name!r}")
    xi = table.columns.index(x_column) + 1
    lines = [
        "set datafile separator ','",
        f"set xlabel '{x_column}'",
        "set key autotitle columnhead",
    ]
    if log_axes:
        lines.append("set logscale xy")
    plots = []
    for name in y_columns:
        yi = table.columns.index(name) + 1
        plots.append(f"'{csv_name}' using {xi}:{yi} with linespoints "
                     f"title '{name}'")
    lines.append("plot " + ", \\\n     ".join(plots))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _render_figure(table: ResultTable, x_column: str, y_columns, path,
                   log_axes: bool) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    x = table.column(x_column)
    fig, ax = plt.subplots(figsize=(6, 4))
    for name in y_columns:
        ax.plot(x, table.column(name), marker="o", label=name)
    if log_axes:
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.set_xlabel(x_column)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


# ---------------------------------------------------------------------------
# bundled configurations for the check-all sweep


def default_configs(output_root: str, quick: bool = False) -> list:
    """One representative config per experiment; quick mode shrinks the
    resolutions and trial counts for a fast smoke pass."""
    res = 256 if quick else 1024
    cutoff = 16 if quick else 64
    trials = {"trials": 50.0} if quick else {}
    pairs = {"pairs": 10.0} if quick else {}
    loops = {"loops": 10.0} if quick else {}
    specs = [
        ("norms", dict(resolution=res, mode_cutoff=cutoff,
                       s_values=[-0.5, 0.0, 0.5, 1.0])),
        ("mollifier", dict(parameter_grid=[0.1, 0.25, 0.5, 1.0])),
        ("homotopy-pc", dict(
            resolution=1024,
            parameter_grid=[2.0 ** -k for k in range(1, 9)],
            manifold=mf.manifold_to_json(mf.circle()))),
        ("homotopy-retraction", dict(
            resolution=res, mode_cutoff=8,
            parameter_grid=[0.1, 0.3, 0.7], tolerances=dict(pairs))),
        ("homotopy-truncation", dict(
            resolution=2048 if quick else 16384, mode_cutoff=8,
            parameter_grid=[4, 8, 16, 32, 64] if quick
            else [4, 8, 16, 32, 64, 128, 256, 512, 1024],
            tolerances=dict(loops))),
        ("distance-glued", dict(
            parameter_grid=[10 ** k for k in range(7)])),
        ("volumes", dict(resolution=512 if quick else 2048)),
        ("symplectic", dict(mode_cutoff=64 if quick else 4096,
                            resolution=256 if quick else 8193,
                            parameter_grid=[1, 2, 4, 16, 64],
                            tolerances=dict(trials))),
        ("multiplication", dict(
            parameter_grid=[256, 512, 1024] if quick
            else [256, 512, 1024, 2048, 4096],
            tolerances=dict(pairs))),
    ]
    configs = []
    for name, overrides in specs:
        data = {"experiment": name, "seed": 0,
                "output_dir": os.path.join(output_root, name)}
        data.update(overrides)
        configs.append(config_from_json(data))
    return configs
