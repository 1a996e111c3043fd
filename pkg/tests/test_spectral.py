import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loopspace_lab.errors import PreconditionError
from loopspace_lab.spectral import (SCALAR, AmbientAlgebra, FourierLoop,
                                    SampledLoop, SobolevOrder, constant_loop,
                                    dft_analyze, dft_synthesize, dual_pairing,
                                    fourier_from_json, fourier_to_json,
                                    half_period_indicator, loop_derivative,
                                    mode_weights, pointwise_product,
                                    random_band_limited_loop,
                                    random_rough_loop, sampled_from_csv,
                                    sampled_to_csv, sobolev_inner,
                                    sobolev_norm)


def single_mode(n, cutoff, value=1.0):
    coeffs = np.zeros((2 * cutoff + 1, 1), dtype=complex)
    coeffs[n + cutoff, 0] = value
    return FourierLoop(cutoff, coeffs, SCALAR)


def test_single_mode_norm_closed_form():
    e1 = single_mode(1, 1)
    for s in (-0.5, 0.0, 0.5, 1.0, 2.0):
        assert sobolev_norm(e1, s) == pytest.approx(2.0 ** s, abs=1e-12)


def test_mode_weights_symmetric_in_n():
    w = mode_weights(0.3, 5)
    assert np.allclose(w, w[::-1])
    assert w[5] == 1.0  # n = 0 carries weight 1 at every order


def test_roundtrip_analysis_synthesis():
    f = random_band_limited_loop(12, 3, SCALAR)
    samples = dft_synthesize(f, 64)
    back = dft_analyze(samples, 12)
    assert np.max(np.abs(back.coeffs - f.coeffs)) < 1e-13


def test_analyze_rejects_unresolvable_cutoff():
    loop = constant_loop([1.0], 16, SCALAR)
    with pytest.raises(PreconditionError):
        dft_analyze(loop, 8)
    with pytest.raises(PreconditionError):
        dft_synthesize(single_mode(4, 4), 7)


def test_parseval_at_order_zero():
    for seed in range(5):
        f = random_band_limited_loop(20, seed, SCALAR)
        grid = dft_synthesize(f, 256)
        assert grid.l2_norm() == pytest.approx(sobolev_norm(f, 0.0), abs=1e-12)


@given(st.floats(min_value=-1.0, max_value=1.5),
       st.integers(min_value=0, max_value=40))
@settings(max_examples=40, deadline=None)
def test_cauchy_schwarz_for_the_inner_product(s, seed):
    f = random_band_limited_loop(10, seed, SCALAR)
    g = random_band_limited_loop(10, seed + 1000, SCALAR)
    lhs = abs(sobolev_inner(f, g, s))
    rhs = sobolev_norm(f, s) * sobolev_norm(g, s)
    assert lhs <= rhs * (1.0 + 1e-10)


def test_dual_pairing_bound():
    # |<u, v>| <= ||u||_{-s} ||v||_{s}: the mechanism behind the rough pairing
    for seed in range(10):
        u = random_rough_loop(0.6, 64, seed)
        v = random_rough_loop(0.6, 64, seed + 100)
        lhs = abs(dual_pairing(u, v))
        rhs = sobolev_norm(u, -0.5) * sobolev_norm(v, 0.5)
        assert lhs <= rhs * (1.0 + 1e-10)


def test_derivative_multiplies_modes():
    f = single_mode(3, 4, value=2.0)
    df = loop_derivative(f)
    assert df.coeffs[3 + 4, 0] == pytest.approx(2.0 * 2j * np.pi * 3)
    assert np.count_nonzero(df.coeffs) == 1


def test_half_period_indicator_l2_norm():
    # ||1_{[0,1/2)}||_{L^2} = 1/sqrt(2), approached from below by partial sums
    norms = [sobolev_norm(half_period_indicator(c), 0.0)
             for c in (2 ** 8, 2 ** 12)]
    assert norms[0] < norms[1] < 1.0 / np.sqrt(2.0)
    assert norms[1] == pytest.approx(1.0 / np.sqrt(2.0), abs=1e-3)


def test_rough_loop_is_prefix_stable():
    small = random_rough_loop(0.7, 16, seed=9)
    large = random_rough_loop(0.7, 64, seed=9)
    # shared modes agree exactly
    sub = large.coeffs[64 - 16:64 + 17]
    assert np.array_equal(small.coeffs, sub)


def test_rough_loop_norm_dichotomy():
    # norms stay bounded below the target order and grow above it
    lo = [sobolev_norm(random_rough_loop(0.5, c, 0), 0.25) for c in (64, 4096)]
    hi = [sobolev_norm(random_rough_loop(0.5, c, 0), 0.75) for c in (64, 4096)]
    assert lo[1] / lo[0] < 1.1
    assert hi[1] / hi[0] > 2.0


def test_matrix_ambient_pointwise_product():
    amb = AmbientAlgebra(4, matrix_shape=(2, 2))
    a = np.array([[1.0, 1.0, 0.0, 1.0]], dtype=complex)
    b = np.array([[0.0, 1.0, 1.0, 0.0]], dtype=complex)
    f = SampledLoop(np.vstack([a, a]), amb)
    g = SampledLoop(np.vstack([b, b]), amb)
    prod = pointwise_product(f, g)
    expected = (a.reshape(2, 2) @ b.reshape(2, 2)).reshape(-1)
    assert np.allclose(prod.samples[0], expected)


def test_scalar_ambient_rejects_product():
    plain = AmbientAlgebra(1)
    f = constant_loop([1.0], 4, plain)
    with pytest.raises(PreconditionError):
        pointwise_product(f, f)


def test_fourier_json_roundtrip():
    f = random_band_limited_loop(5, 7, AmbientAlgebra(2))
    data = fourier_to_json(f)
    assert set(data) == {"cutoff", "ambient_dim", "coeffs"}
    assert data["cutoff"] == 5 and data["ambient_dim"] == 2
    back = fourier_from_json(json.loads(json.dumps(data)))
    assert np.allclose(back.coeffs, f.coeffs)


def test_sampled_csv_roundtrip(tmp_path):
    loop = dft_synthesize(random_band_limited_loop(4, 2, AmbientAlgebra(3)), 32)
    path = tmp_path / "loop.csv"
    sampled_to_csv(loop, path)
    header = path.read_text().splitlines()[0]
    assert header.startswith("t,comp_0")
    back = sampled_from_csv(path)
    assert np.max(np.abs(back.samples - loop.samples)) == 0.0


def test_sobolev_order_wrapper():
    f = single_mode(1, 1)
    assert sobolev_norm(f, SobolevOrder(0.5)) == sobolev_norm(f, 0.5)
