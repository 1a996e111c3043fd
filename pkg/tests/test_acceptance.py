"""Acceptance gate: one test per headline criterion, each printing a
single PASS/FAIL line with its measured numbers and wall time."""

import time

import numpy as np

from loopspace_lab import diffeology as dg
from loopspace_lab import homotopy as ho
from loopspace_lab import manifolds as mf
from loopspace_lab import mollifier as mo
from loopspace_lab import symplectic as sy
from loopspace_lab.experiments import off_basepoint_circle_loop
from loopspace_lab.spectral import (SCALAR, AmbientAlgebra, FourierLoop,
                                    SampledLoop, dft_analyze, dft_synthesize,
                                    half_period_indicator, pointwise_product,
                                    random_band_limited_loop,
                                    random_rough_loop, sobolev_norm)


def _verdict(number, label, ok, detail, started, budget):
    elapsed = time.monotonic() - started
    status = "PASS" if ok and elapsed < budget else "FAIL"
    print(f"[{status}] criterion {number:02d} {label}: {detail} "
          f"({elapsed:.2f}s / {budget:.0f}s)")
    assert ok, f"criterion {number} failed: {detail}"
    assert elapsed < budget, f"criterion {number} over budget: {elapsed:.2f}s"


def test_criterion_01_norm_formula():
    started = time.monotonic()
    coeffs = np.zeros((3, 1), dtype=complex)
    coeffs[2, 0] = 1.0
    e1 = FourierLoop(1, coeffs, SCALAR)
    norm_err = max(abs(sobolev_norm(e1, s) - 2.0 ** s)
                   for s in (-0.5, 0.0, 0.5, 1.0))
    parseval_err = 0.0
    for seed in range(100):
        f = random_band_limited_loop(32, seed, SCALAR)
        grid = dft_synthesize(f, 256)
        parseval_err = max(parseval_err,
                           abs(grid.l2_norm() - sobolev_norm(f, 0.0)))
    ok = norm_err <= 1e-12 and parseval_err <= 1e-10
    _verdict(1, "norm formula", ok,
             f"single-mode err {norm_err:.2e}, Parseval err {parseval_err:.2e}",
             started, 5.0)


def test_criterion_02_threshold_dichotomy():
    started = time.monotonic()
    cutoffs = [2 ** k for k in range(10, 15)]
    low = [sobolev_norm(half_period_indicator(c), 0.25) ** 2 for c in cutoffs]
    high = [sobolev_norm(half_period_indicator(c), 0.75) ** 2 for c in cutoffs]
    tails = [(b - a) / b for a, b in zip(low, low[1:])]
    growth = [b / a - 1.0 for a, b in zip(high, high[1:])]
    ok = max(tails) < 0.01 and min(growth) >= 0.20
    _verdict(2, "threshold dichotomy", ok,
             f"s=0.25 max tail {max(tails):.4%}, "
             f"s=0.75 min growth {min(growth):.1%}", started, 10.0)


def test_criterion_03_time_change():
    started = time.monotonic()
    boundary_ok, slope_ok = True, True
    worst_slope_margin = np.inf
    for l in (0.1, 0.25, 0.5, 1.0):
        ctx = mo.make_reparam(l)
        report = mo.verify_boundary_conditions(ctx, 3, 1e-4)
        boundary_ok &= report.all_pass
        probe = np.linspace(0.0, l, 8193)
        sup_slope = float(np.max(mo.phi_partial_s(ctx, probe)))
        slope_ok &= sup_slope <= 3.0 / l + 1e-6
        worst_slope_margin = min(worst_slope_margin, 3.0 / l - sup_slope)
    ident = mo.make_reparam(1.0)
    s = np.linspace(0.0, 1.0, 4097)
    identity_err = float(np.max(np.abs(mo.phi_eval(ident, s) - s)))
    ok = boundary_ok and slope_ok and identity_err <= 1e-10
    _verdict(3, "time-change boundary data", ok,
             f"boundaries {boundary_ok}, slope margin {worst_slope_margin:.3f}, "
             f"identity err {identity_err:.2e}", started, 10.0)


def test_criterion_04_basepoint_family():
    started = time.monotonic()
    manifold = mf.circle()
    gamma = off_basepoint_circle_loop(1024)
    x0 = gamma.samples[0]
    tau = mf.bridge_loop(x0, np.zeros_like(x0), manifold, 1024)
    sup_tau, sup_gamma = tau.sup_norm(), gamma.sup_norm()
    sup_d = mf._spectral_derivative(gamma).sup_norm()
    hs = [2.0 ** -k for k in range(1, 9)]
    dists, bounds = [], []
    for h in hs:
        member = ho.gamma_h(gamma, tau, h)
        dists.append((member - gamma).l2_norm())
        bounds.append(ho.gamma_h_bound(h, sup_tau, sup_gamma, sup_d))
    decreasing = all(a > b for a, b in zip(dists, dists[1:]))
    bounded = all(d <= b for d, b in zip(dists, bounds))
    near_limit = ho.gamma_h(gamma, tau, 1.0 - 2.0 ** -10)
    limit_dist = (near_limit - ho.tau_wedge_reverse(tau)).l2_norm()
    rough = ho.sobolev_distance(ho.gamma_h(gamma, tau, 2.0 ** -8), gamma, 0.75)
    ok = decreasing and dists[-1] < 0.05 and bounded \
        and limit_dist < 1e-3 and rough > 0.1
    _verdict(4, "basepoint family", ok,
             f"decreasing {decreasing}, final {dists[-1]:.4f}, "
             f"bounded {bounded}, limit {limit_dist:.2e}, "
             f"rough dist {rough:.3f}", started, 30.0)


def test_criterion_05_retraction_lipschitz():
    started = time.monotonic()

    def based(seed):
        f = random_band_limited_loop(8, seed, AmbientAlgebra(2))
        s = dft_synthesize(f, 512)
        return SampledLoop(s.samples - s.samples[0], s.ambient)

    loops = [based(k) for k in range(200)]
    worst = 0.0
    for s_prime in (0.1, 0.3, 0.7):
        for k in range(100):
            a, b = loops[2 * k], loops[2 * k + 1]
            num = (ho.retraction_homotopy(a, s_prime)
                   - ho.retraction_homotopy(b, s_prime)).l2_norm()
            worst = max(worst, num / (a - b).l2_norm())
    probe = loops[0]
    exact_ends = np.array_equal(
        ho.retraction_homotopy(probe, 0.0).samples, probe.samples) \
        and np.max(np.abs(ho.retraction_homotopy(probe, 1.0).samples
                          - probe.samples[0])) == 0.0
    ok = worst <= 1.0 + 1e-8 and exact_ends
    _verdict(5, "retraction Lipschitz", ok,
             f"max ratio {worst:.6f}, exact endpoints {exact_ends}",
             started, 20.0)


def test_criterion_06_truncation_contraction():
    started = time.monotonic()
    full2 = mf.full_space(2)

    def based(seed, m):
        f = random_band_limited_loop(8, seed, AmbientAlgebra(2))
        s = dft_synthesize(f, m)
        return SampledLoop(s.samples - s.samples[0], s.ambient)

    contraction = True
    t_grid = np.arange(64) / 64
    for k in range(50):
        loop = based(k, 512)
        norm = loop.l2_norm()
        for t in t_grid:
            if ho.truncation_homotopy(loop, float(t), full2).l2_norm() \
                    > norm + 1e-12:
                contraction = False
    m = 1 << 14
    t = np.arange(m) / m
    probe = SampledLoop(np.exp(2j * np.pi * t)[:, None], AmbientAlgebra(1))
    grid = tuple(round(m * (0.1 + 0.5 * 2.0 ** -k)) / m for k in range(9))
    family = ho.HomotopyFamily("truncation", probe, grid,
                               manifold=mf.full_space(1))
    exponent = ho.continuity_modulus(family, 0.0).fitted_exponent
    ramp_loop = based(1000, m)
    target = ho.truncation_homotopy(ramp_loop, 0.4, full2)
    ps = [4, 16, 64, 256, 1024]
    dists = [(ho.delta_p(ramp_loop, 0.4, p) - target).l2_norm() for p in ps]
    rate = -float(np.polyfit(np.log(ps), np.log(dists), 1)[0])
    ok = contraction and 0.45 <= exponent <= 0.55 \
        and abs(rate - 0.5) <= 0.05
    _verdict(6, "truncation contraction", ok,
             f"contraction {contraction}, t-exponent {exponent:.3f}, "
             f"ramp rate {rate:.3f}", started, 60.0)


def test_criterion_07_glued_lines():
    started = time.monotonic()
    space = dg.GluedLinesSpace(max_copy=10 ** 6)
    upper = dg.pseudo_distance(space, dg.ZERO_BAR, dg.ONE_BAR).upper_bound
    in_u0, in_u1, check = dg.d_topology_separation_witness()
    witness = check(10_000, seed=0)
    separated = witness["disjoint"] and in_u0(dg.ZERO_BAR) \
        and in_u1(dg.ONE_BAR) and not in_u1(dg.ZERO_BAR) \
        and not in_u0(dg.ONE_BAR)
    ok = upper <= 1e-6 and separated
    _verdict(7, "glued-lines counterexample", ok,
             f"upper bound {upper:.2e}, separated {separated}", started, 5.0)


def test_criterion_08_volumes():
    started = time.monotonic()
    sphere = dg.sphere_exponential_chart(max_radius=np.pi)
    sphere_err = abs(dg.hausdorff_volume(sphere, 2048).value - 4.0 * np.pi)
    band = dg.restrict(dg.mobius_chart(), [0.0, -0.5], [1.0, 0.5])
    mobius_err = abs(dg.hausdorff_volume(band, 256).value - 1.0)
    flat = dg.flat_chart(2)
    flat_err = abs(dg.hausdorff_volume(flat, 64).value - 1.0)
    left = dg.restrict(flat, [0.0, 0.0], [0.5, 1.0])
    right = dg.restrict(flat, [0.5, 0.0], [1.0, 1.0])
    additivity = abs(dg.hausdorff_volume(left, 32).value
                     + dg.hausdorff_volume(right, 32).value
                     - dg.hausdorff_volume(flat, 64).value)
    ok = sphere_err <= 1e-3 and mobius_err <= 1e-6 and flat_err <= 1e-12 \
        and additivity <= 1e-9
    _verdict(8, "plot volumes", ok,
             f"sphere err {sphere_err:.2e}, band err {mobius_err:.2e}, "
             f"square err {flat_err:.2e}, additivity {additivity:.2e}",
             started, 30.0)


def test_criterion_09_symplectic_extension():
    started = time.monotonic()
    anti = 0.0
    for seed in range(20):
        x = random_rough_loop(0.55, 128, seed)
        y = random_rough_loop(0.55, 128, seed + 100)
        anti = max(anti, abs(sy.omega_flat(x, y) + sy.omega_flat(y, x)))
    report = sy.pairing_bound_check(1000, 4096, seed=0)
    mode_err = max(abs(sy.single_mode_ratio(n)
                       - 2.0 * np.pi * abs(n) / (1.0 + abs(n)))
                   for n in (1, 2, 7, 100, -3))
    ok = anti <= 1e-12 and report.max_ratio <= 2.0 * np.pi \
        and mode_err <= 1e-12
    _verdict(9, "symplectic extension", ok,
             f"antisymmetry {anti:.2e}, max ratio {report.max_ratio:.3f} "
             f"<= {2 * np.pi:.3f}, per-mode err {mode_err:.2e}", started, 30.0)


def test_criterion_10_multiplication_action():
    started = time.monotonic()
    ratios = []
    for cutoff in (256, 512, 1024, 2048, 4096):
        m = 4 * cutoff + 4
        worst = 0.0
        for j in range(20):
            f = random_rough_loop(1.0, cutoff, 2 * j, SCALAR)
            g = random_rough_loop(0.5, cutoff, 2 * j + 1, SCALAR)
            product = dft_analyze(
                pointwise_product(dft_synthesize(f, m), dft_synthesize(g, m)),
                2 * cutoff)
            worst = max(worst, sobolev_norm(product, 0.25)
                        / (sobolev_norm(f, 0.75) * sobolev_norm(g, 0.25)))
        ratios.append(worst)
    spread = max(ratios) / min(ratios)
    ok = spread < 2.0
    _verdict(10, "multiplication action", ok,
             f"ratio spread {spread:.3f} over cutoffs 256..4096",
             started, 30.0)


def test_criterion_11_endpoint_lower_bound():
    started = time.monotonic()
    ok = True
    worst_margin = np.inf
    for s in (0.0, 0.5):
        for seed in range(100):
            nodes = [random_rough_loop(0.8, 16, 1000 * seed + k)
                     for k in range(5)]
            report = dg.endpoint_lower_bound_check(nodes, s)
            ok &= report.satisfied
            worst_margin = min(worst_margin,
                               report.length - report.endpoint_gap)
    _verdict(11, "endpoint lower bound", ok,
             f"min L - gap margin {worst_margin:.3f} over 200 paths",
             started, 10.0)
