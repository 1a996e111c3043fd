import numpy as np
import pytest

from loopspace_lab import homotopy as ho
from loopspace_lab import manifolds as mf
from loopspace_lab.errors import PreconditionError, ResolutionError
from loopspace_lab.spectral import (AmbientAlgebra, SampledLoop,
                                    dft_synthesize, random_band_limited_loop)


def based_loop(seed, m=512, cutoff=8, dim=2):
    f = random_band_limited_loop(cutoff, seed, AmbientAlgebra(dim))
    s = dft_synthesize(f, m)
    return SampledLoop(s.samples - s.samples[0], s.ambient)


def bump_circle_loop(m=512, amplitude=0.3):
    t = np.arange(m) / m
    phase = amplitude * np.exp(-(np.sin(np.pi * t) / 0.15) ** 2)
    return SampledLoop(np.exp(1j * phase)[:, None], mf.circle().ambient)


def test_periodic_interpolator_reproduces_samples():
    loop = based_loop(0)
    f = ho.periodic_interpolator(loop)
    times = np.arange(loop.sample_count) / loop.sample_count
    assert np.max(np.abs(f(times) - loop.samples)) < 1e-12
    assert np.max(np.abs(f(times + 3.0) - loop.samples)) < 1e-10


def test_interpolator_is_linear_in_the_data():
    a, b = based_loop(1), based_loop(2)
    probe = np.array([0.123, 0.456, 0.999])
    combined = ho.warp_loop(a + b, probe)
    assert np.max(np.abs(combined - ho.warp_loop(a, probe)
                         - ho.warp_loop(b, probe))) < 1e-12


class TestBasepointFamily:
    def setup_method(self):
        self.gamma = bump_circle_loop()
        x0 = self.gamma.samples[0]
        self.tau = mf.bridge_loop(x0, np.zeros_like(x0), mf.circle(),
                                  self.gamma.sample_count)

    def test_h_zero_is_identity(self):
        member = ho.gamma_h(self.gamma, self.tau, 0.0)
        assert np.array_equal(member.samples, self.gamma.samples)

    def test_h_one_is_out_and_back(self):
        member = ho.gamma_h(self.gamma, self.tau, 1.0)
        limit = ho.tau_wedge_reverse(self.tau)
        assert np.array_equal(member.samples, limit.samples)

    def test_distances_decrease_toward_h_zero(self):
        dists = [(ho.gamma_h(self.gamma, self.tau, h) - self.gamma).l2_norm()
                 for h in (0.5, 0.25, 0.125, 0.0625)]
        assert all(a > b for a, b in zip(dists, dists[1:]))

    def test_three_term_bound_holds(self):
        sup_tau = self.tau.sup_norm()
        sup_gamma = self.gamma.sup_norm()
        sup_d = mf._spectral_derivative(self.gamma).sup_norm()
        for h in (0.5, 0.25, 0.125):
            dist = (ho.gamma_h(self.gamma, self.tau, h)
                    - self.gamma).l2_norm()
            assert dist <= ho.gamma_h_bound(h, sup_tau, sup_gamma, sup_d)

    def test_members_stay_near_the_circle(self):
        member = ho.gamma_h(self.gamma, self.tau, 0.3)
        assert mf.membership_defect(member, mf.circle()) < 1e-2

    def test_rejects_non_bridge_tau(self):
        stranger = based_loop(3, m=self.gamma.sample_count, dim=1)
        with pytest.raises(PreconditionError):
            ho.gamma_h(self.gamma, stranger, 0.5)

    def test_rejects_h_outside_unit_interval(self):
        with pytest.raises(PreconditionError):
            ho.gamma_h(self.gamma, self.tau, 1.5)


class TestRetraction:
    def test_identity_and_collapse(self):
        loop = based_loop(4)
        assert np.array_equal(ho.retraction_homotopy(loop, 0.0).samples,
                              loop.samples)
        collapsed = ho.retraction_homotopy(loop, 1.0)
        assert np.max(np.abs(collapsed.samples - loop.samples[0])) == 0.0

    def test_one_lipschitz_on_based_pairs(self):
        for s_prime in (0.2, 0.5, 0.8):
            for k in range(20):
                a, b = based_loop(10 + 2 * k), based_loop(11 + 2 * k)
                num = (ho.retraction_homotopy(a, s_prime)
                       - ho.retraction_homotopy(b, s_prime)).l2_norm()
                assert num <= (a - b).l2_norm() * (1.0 + 1e-8)

    def test_frozen_tail_is_constant(self):
        loop = based_loop(5)
        s_prime = 0.4
        member = ho.retraction_homotopy(loop, s_prime)
        tail = member.samples[member.times > 1.0 - s_prime + 1e-9]
        assert np.max(np.abs(tail - loop.samples[0])) == 0.0


class TestTruncation:
    def test_contraction_in_l2(self):
        manifold = mf.full_space(2)
        for k in range(10):
            loop = based_loop(20 + k)
            norm = loop.l2_norm()
            for t in np.arange(16) / 16:
                assert ho.truncation_homotopy(loop, float(t),
                                              manifold).l2_norm() <= norm + 1e-12

    def test_endpoints(self):
        manifold = mf.full_space(2)
        loop = based_loop(6)
        gone = ho.truncation_homotopy(loop, 0.0, manifold)
        assert np.max(np.abs(gone.samples)) == 0.0
        kept = ho.truncation_homotopy(loop, 1.0, manifold)
        # only t = 1 stays below the cut; sample 0 alone survives... the
        # grid has no point at exactly 1, so everything before it survives
        assert np.array_equal(kept.samples, loop.samples)

    def test_delta_p_converges_at_sqrt_rate(self):
        loop = based_loop(7, m=1 << 13)
        t_cut = 0.4
        target = ho.truncation_homotopy(loop, t_cut, mf.full_space(2))
        dists = {p: (ho.delta_p(loop, t_cut, p) - target).l2_norm()
                 for p in (8, 32, 128, 512)}
        slope = -np.polyfit(np.log(list(dists)),
                            np.log(list(dists.values())), 1)[0]
        assert 0.4 < slope < 0.6

    def test_delta_p_needs_resolution(self):
        loop = based_loop(8, m=64)
        with pytest.raises(ResolutionError):
            ho.delta_p(loop, 0.2, 32)
        with pytest.raises(PreconditionError):
            ho.delta_p(based_loop(8, m=1024), 0.95, 16)  # ramp spills past 1


def test_family_dispatch_and_validation():
    loop = based_loop(9)
    family = ho.HomotopyFamily("retraction", loop,
                               tuple(np.linspace(0.1, 0.9, 9)))
    member = family.member(0.5)
    assert member.sample_count == loop.sample_count
    with pytest.raises(PreconditionError):
        ho.HomotopyFamily("spiral", loop, (0.1,))
    with pytest.raises(PreconditionError):
        ho.HomotopyFamily("truncation", loop, (0.1,) * 8)  # no manifold


def test_continuity_modulus_truncation_exponent():
    m = 4096
    t = np.arange(m) / m
    loop = SampledLoop(np.exp(2j * np.pi * t)[:, None], AmbientAlgebra(1))
    grid = tuple(round(m * (0.1 + 0.5 * 2.0 ** -k)) / m for k in range(9))
    family = ho.HomotopyFamily("truncation", loop, grid,
                               manifold=mf.full_space(1))
    report = ho.continuity_modulus(family, 0.0)
    assert report.fitted_exponent == pytest.approx(0.5, abs=0.02)
    assert not report.diverges
    assert all(row["passed"] for row in report.rows)


def test_continuity_modulus_detects_rough_order_divergence():
    m = 4096
    t = np.arange(m) / m
    loop = SampledLoop(np.exp(2j * np.pi * t)[:, None], AmbientAlgebra(1))
    grid = tuple(round(m * (0.1 + 0.5 * 2.0 ** -k)) / m for k in range(9))
    family = ho.HomotopyFamily("truncation", loop, grid,
                               manifold=mf.full_space(1))
    report = ho.continuity_modulus(family, 0.75)
    assert report.diverges


def test_modulus_report_csv(tmp_path):
    loop = based_loop(12, m=2048)
    grid = tuple(0.3 + 0.4 * 2.0 ** -k for k in range(9))
    family = ho.HomotopyFamily("retraction", loop, grid)
    report = ho.continuity_modulus(family, 0.0)
    path = tmp_path / "modulus.csv"
    report.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "gap,distance,bound,pass"
    assert len(lines) == len(report.rows) + 1
