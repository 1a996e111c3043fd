"""Fourier representation of loops and the spectral toolbox.

Loops on the circle S^1 = R/Z are carried in two interchangeable forms:

* ``SampledLoop`` -- values on the uniform grid t_j = j/M (no duplicated
  endpoint), the home of pointwise constructions;
* ``FourierLoop`` -- truncated Fourier coefficients on the symmetric band
  [-N, N], the home of the fractional norms

      ||f||_s^2 = sum_n (1 + |n|)^{2s} ||f_n||^2.

Ambient values are flat complex vectors; matrix-algebra ambients are the
same vectors with a remembered matrix shape and the Frobenius/Hermitian
pairing (A, B) -> tr(A B*).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import AmbientMismatchError, PreconditionError


@dataclass(frozen=True)
class AmbientAlgebra:
    """Ambient coordinate algebra with a Hermitian inner product.

    ``dim`` is the flat coordinate dimension; if ``matrix_shape`` is set the
    coordinates are a row-major flattening of a complex matrix and pointwise
    multiplication means matrix multiplication.
    """

    dim: int
    matrix_shape: tuple[int, int] | None = None

    def __post_init__(self):
        if self.dim < 1:
            raise PreconditionError("ambient dimension must be positive")
        if self.matrix_shape is not None:
            r, c = self.matrix_shape
            if r * c != self.dim:
                raise PreconditionError(
                    f"matrix shape {self.matrix_shape} does not flatten to dim {self.dim}"
                )

    def inner(self, a: np.ndarray, b: np.ndarray) -> complex:
        """Hermitian pairing, linear in the first slot: sum_k a_k conj(b_k)."""
        return complex(np.sum(np.asarray(a) * np.conj(b)))

    def norm(self, a: np.ndarray) -> float:
        return float(np.sqrt(np.sum(np.abs(np.asarray(a)) ** 2)))

    def multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.matrix_shape is None:
            raise PreconditionError("ambient does not support multiplication (set matrix_shape)")
        r, c = self.matrix_shape
        return (np.asarray(a).reshape(r, c) @ np.asarray(b).reshape(r, c)).reshape(-1)


#: Scalar complex ambient, the default carrier for rough-loop experiments.
SCALAR = AmbientAlgebra(dim=1, matrix_shape=(1, 1))


@dataclass(frozen=True)
class SobolevOrder:
    """Fractional order s weighting mode n by (1 + |n|)^{2s}."""

    s: float

    def __post_init__(self):
        if not np.isfinite(self.s):
            raise PreconditionError("Sobolev order must be finite")


def _as_order(order) -> float:
    return order.s if isinstance(order, SobolevOrder) else float(order)


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class SampledLoop:
    """Uniform-grid samples of a loop: values at t_j = j/M, j = 0..M-1."""

    samples: np.ndarray  # (M, dim) complex
    ambient: AmbientAlgebra

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.samples, dtype=complex))
        if a.shape[0] < 2:
            raise PreconditionError("need at least 2 samples")
        if a.shape[1] != self.ambient.dim:
            raise PreconditionError(
                f"sample dimension {a.shape[1]} != ambient dim {self.ambient.dim}"
            )
        object.__setattr__(self, "samples", _freeze(a))

    @property
    def sample_count(self) -> int:
        return self.samples.shape[0]

    @property
    def times(self) -> np.ndarray:
        m = self.sample_count
        return np.arange(m) / m

    def l2_norm(self) -> float:
        """Sample-quadrature L^2 norm: sqrt(mean_j ||x_j||^2)."""
        return float(np.sqrt(np.mean(np.sum(np.abs(self.samples) ** 2, axis=1))))

    def sup_norm(self) -> float:
        return float(np.max(np.sqrt(np.sum(np.abs(self.samples) ** 2, axis=1))))

    def __add__(self, other: "SampledLoop") -> "SampledLoop":
        _check_same_grid(self, other)
        return SampledLoop(self.samples + other.samples, self.ambient)

    def __sub__(self, other: "SampledLoop") -> "SampledLoop":
        _check_same_grid(self, other)
        return SampledLoop(self.samples - other.samples, self.ambient)

    def __mul__(self, scalar) -> "SampledLoop":
        return SampledLoop(self.samples * scalar, self.ambient)

    __rmul__ = __mul__


def _check_same_grid(u: SampledLoop, v: SampledLoop):
    if u.ambient != v.ambient:
        raise AmbientMismatchError("loops live in different ambient algebras")
    if u.sample_count != v.sample_count:
        raise PreconditionError(
            f"sample counts differ: {u.sample_count} vs {v.sample_count}"
        )


@dataclass(frozen=True)
class FourierLoop:
    """Band-limited loop: coefficients f_n for n in [-N, N], rows ordered
    by ascending mode."""

    mode_cutoff: int
    coeffs: np.ndarray  # (2N+1, dim) complex
    ambient: AmbientAlgebra

    def __post_init__(self):
        if self.mode_cutoff < 0:
            raise PreconditionError("mode cutoff must be nonnegative")
        a = np.atleast_2d(np.asarray(self.coeffs, dtype=complex))
        if a.shape != (2 * self.mode_cutoff + 1, self.ambient.dim):
            raise PreconditionError(
                f"coefficient array has shape {a.shape}, expected "
                f"{(2 * self.mode_cutoff + 1, self.ambient.dim)}"
            )
        object.__setattr__(self, "coeffs", _freeze(a))

    @property
    def modes(self) -> np.ndarray:
        return np.arange(-self.mode_cutoff, self.mode_cutoff + 1)

    def coeff(self, n: int) -> np.ndarray:
        if abs(n) > self.mode_cutoff:
            return np.zeros(self.ambient.dim, dtype=complex)
        return self.coeffs[n + self.mode_cutoff]

    def pad_to(self, cutoff: int) -> "FourierLoop":
        if cutoff < self.mode_cutoff:
            raise PreconditionError("pad_to cannot shrink the band")
        if cutoff == self.mode_cutoff:
            return self
        extra = cutoff - self.mode_cutoff
        pad = np.zeros((extra, self.ambient.dim), dtype=complex)
        return FourierLoop(cutoff, np.vstack([pad, self.coeffs, pad]), self.ambient)

    def __add__(self, other: "FourierLoop") -> "FourierLoop":
        a, b = _align(self, other)
        return FourierLoop(a.mode_cutoff, a.coeffs + b.coeffs, a.ambient)

    def __sub__(self, other: "FourierLoop") -> "FourierLoop":
        a, b = _align(self, other)
        return FourierLoop(a.mode_cutoff, a.coeffs - b.coeffs, a.ambient)

    def __mul__(self, scalar) -> "FourierLoop":
        return FourierLoop(self.mode_cutoff, self.coeffs * scalar, self.ambient)

    __rmul__ = __mul__


def _align(u: FourierLoop, v: FourierLoop) -> tuple[FourierLoop, FourierLoop]:
    if u.ambient != v.ambient:
        raise AmbientMismatchError("loops live in different ambient algebras")
    cutoff = max(u.mode_cutoff, v.mode_cutoff)
    return u.pad_to(cutoff), v.pad_to(cutoff)


# ---------------------------------------------------------------------------
# analysis / synthesis


def dft_analyze(loop: SampledLoop, mode_cutoff: int) -> FourierLoop:
    """Discrete Fourier coefficients f_n = (1/M) sum_j x_j e^{-2 pi i n j / M}."""
    m = loop.sample_count
    if mode_cutoff > (m - 1) // 2:
        raise PreconditionError(
            f"mode cutoff {mode_cutoff} too large for {m} samples "
            f"(need cutoff <= {(m - 1) // 2})"
        )
    spectrum = np.fft.fft(loop.samples, axis=0) / m
    idx = np.arange(-mode_cutoff, mode_cutoff + 1) % m
    return FourierLoop(mode_cutoff, spectrum[idx], loop.ambient)


def dft_synthesize(loop: FourierLoop, sample_count: int) -> SampledLoop:
    """Evaluate x_j = sum_n f_n e^{2 pi i n j / M} on the uniform grid."""
    if sample_count < 2 * loop.mode_cutoff + 1:
        raise PreconditionError(
            f"{sample_count} samples undersample cutoff {loop.mode_cutoff} "
            f"(need >= {2 * loop.mode_cutoff + 1})"
        )
    spectrum = np.zeros((sample_count, loop.ambient.dim), dtype=complex)
    idx = np.arange(-loop.mode_cutoff, loop.mode_cutoff + 1) % sample_count
    spectrum[idx] = loop.coeffs
    return SampledLoop(np.fft.ifft(spectrum, axis=0) * sample_count, loop.ambient)


# ---------------------------------------------------------------------------
# norms and pairings


def mode_weights(order, mode_cutoff: int) -> np.ndarray:
    s = _as_order(order)
    n = np.arange(-mode_cutoff, mode_cutoff + 1)
    return (1.0 + np.abs(n)) ** (2.0 * s)


def sobolev_norm(loop: FourierLoop, order) -> float:
    w = mode_weights(order, loop.mode_cutoff)
    return float(np.sqrt(np.sum(w * np.sum(np.abs(loop.coeffs) ** 2, axis=1))))


def sobolev_inner(u: FourierLoop, v: FourierLoop, order) -> complex:
    u, v = _align(u, v)
    w = mode_weights(order, u.mode_cutoff)
    return complex(np.sum(w * np.sum(u.coeffs * np.conj(v.coeffs), axis=1)))


def fractional_multiplier(loop: FourierLoop, order) -> FourierLoop:
    w = mode_weights(order, loop.mode_cutoff)
    return FourierLoop(loop.mode_cutoff, loop.coeffs * w[:, None], loop.ambient)


def loop_derivative(loop: FourierLoop) -> FourierLoop:
    factor = 2j * np.pi * loop.modes
    return FourierLoop(loop.mode_cutoff, loop.coeffs * factor[:, None], loop.ambient)


def dual_pairing(u: FourierLoop, v: FourierLoop) -> complex:
    """Unweighted mode pairing sum_n (u_n, v_n); the H^{-1/2} x H^{1/2}
    duality bracket at finite cutoff.  Bounded by
    ||u||_{-1/2} ||v||_{1/2} (Cauchy-Schwarz in the weighted ladder)."""
    u, v = _align(u, v)
    return complex(np.sum(u.coeffs * np.conj(v.coeffs)))


def pointwise_product(f: SampledLoop, g: SampledLoop) -> SampledLoop:
    """Sample-wise algebra product; requires a matrix ambient."""
    _check_same_grid(f, g)
    amb = f.ambient
    if amb.matrix_shape is None:
        raise PreconditionError("pointwise product needs a matrix ambient")
    r, c = amb.matrix_shape
    a = f.samples.reshape(-1, r, c)
    b = g.samples.reshape(-1, r, c)
    return SampledLoop((a @ b).reshape(-1, amb.dim), amb)


# ---------------------------------------------------------------------------
# generators


def random_rough_loop(order_target, mode_cutoff: int, seed: int,
                      ambient: AmbientAlgebra = SCALAR) -> FourierLoop:
    """Random loop whose H^s norm stays cutoff-bounded for s < order_target
    and diverges with the cutoff for s > order_target.

    Coefficient magnitudes decay as (1+|n|)^{-(order_target + 1/2)} with a
    seeded random direction/phase.  Modes are drawn in the interleaved order
    0, 1, -1, 2, -2, ... so the same seed yields consistent low modes at any
    cutoff (useful for cutoff-stability sweeps).
    """
    if mode_cutoff < 1:
        raise PreconditionError("mode cutoff must be >= 1")
    s0 = _as_order(order_target)
    rng = np.random.default_rng(seed)
    count = 2 * mode_cutoff + 1
    raw = rng.standard_normal((count, 2 * ambient.dim))
    z = raw[:, :ambient.dim] + 1j * raw[:, ambient.dim:]
    z /= np.sqrt(np.sum(np.abs(z) ** 2, axis=1))[:, None]
    # interleaved mode order 0, 1, -1, 2, -2, ...
    order_n = np.empty(count, dtype=int)
    order_n[0] = 0
    order_n[1::2] = np.arange(1, mode_cutoff + 1)
    order_n[2::2] = -np.arange(1, mode_cutoff + 1)
    mags = (1.0 + np.abs(order_n)) ** (-(s0 + 0.5))
    coeffs = np.zeros((count, ambient.dim), dtype=complex)
    coeffs[order_n + mode_cutoff] = mags[:, None] * z
    return FourierLoop(mode_cutoff, coeffs, ambient)


def random_band_limited_loop(mode_cutoff: int, seed: int,
                             ambient: AmbientAlgebra = SCALAR,
                             scale: float = 1.0) -> FourierLoop:
    """Smooth random loop with gaussian coefficients damped by (1+|n|)^{-2}."""
    rng = np.random.default_rng(seed)
    count = 2 * mode_cutoff + 1
    raw = rng.standard_normal((count, 2 * ambient.dim))
    z = raw[:, :ambient.dim] + 1j * raw[:, ambient.dim:]
    n = np.arange(-mode_cutoff, mode_cutoff + 1)
    damp = (1.0 + np.abs(n)) ** -2.0
    return FourierLoop(mode_cutoff, scale * damp[:, None] * z, ambient)


def half_period_indicator(mode_cutoff: int,
                          ambient: AmbientAlgebra = SCALAR) -> FourierLoop:
    """Exact Fourier coefficients of the indicator of [0, 1/2): f_0 = 1/2,
    f_n = (1 - (-1)^n) / (2 pi i n).  The workhorse of the s = 1/2
    threshold dichotomy."""
    n = np.arange(-mode_cutoff, mode_cutoff + 1)
    coeffs = np.zeros((2 * mode_cutoff + 1, ambient.dim), dtype=complex)
    nz = n != 0
    vals = np.zeros_like(n, dtype=complex)
    vals[nz] = (1.0 - (-1.0) ** np.abs(n[nz])) / (2j * np.pi * n[nz])
    vals[~nz] = 0.5
    coeffs[:, 0] = vals
    return FourierLoop(mode_cutoff, coeffs, ambient)


def constant_loop(value, sample_count: int, ambient: AmbientAlgebra) -> SampledLoop:
    v = np.asarray(value, dtype=complex).reshape(-1)
    return SampledLoop(np.tile(v, (sample_count, 1)), ambient)


# ---------------------------------------------------------------------------
# serialization


def fourier_to_json(loop: FourierLoop) -> dict:
    rows = []
    for n, row in zip(loop.modes, loop.coeffs):
        rows.append([int(n)] + [float(x) for x in row.real] + [float(x) for x in row.imag])
    return {"cutoff": loop.mode_cutoff, "ambient_dim": loop.ambient.dim, "coeffs": rows}


def fourier_from_json(data: dict, ambient: AmbientAlgebra | None = None) -> FourierLoop:
    dim = int(data["ambient_dim"])
    amb = ambient if ambient is not None else AmbientAlgebra(dim)
    if amb.dim != dim:
        raise AmbientMismatchError(f"serialized dim {dim} != ambient dim {amb.dim}")
    cutoff = int(data["cutoff"])
    coeffs = np.zeros((2 * cutoff + 1, dim), dtype=complex)
    for row in data["coeffs"]:
        n = int(row[0])
        re = np.array(row[1:1 + dim], dtype=float)
        im = np.array(row[1 + dim:1 + 2 * dim], dtype=float)
        coeffs[n + cutoff] = re + 1j * im
    return FourierLoop(cutoff, coeffs, amb)


def fourier_dumps(loop: FourierLoop) -> str:
    return json.dumps(fourier_to_json(loop))


def fourier_loads(text: str, ambient: AmbientAlgebra | None = None) -> FourierLoop:
    return fourier_from_json(json.loads(text), ambient)


def sampled_to_csv(loop: SampledLoop, path) -> None:
    is_complex = bool(np.any(np.abs(loop.samples.imag) > 0))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if is_complex:
            header = ["t"]
            for k in range(loop.ambient.dim):
                header += [f"comp_{k}_re", f"comp_{k}_im"]
            writer.writerow(header)
            for t, row in zip(loop.times, loop.samples):
                out = [repr(float(t))]
                for x in row:
                    out += [repr(float(x.real)), repr(float(x.imag))]
                writer.writerow(out)
        else:
            writer.writerow(["t"] + [f"comp_{k}" for k in range(loop.ambient.dim)])
            for t, row in zip(loop.times, loop.samples):
                writer.writerow([repr(float(t))] + [repr(float(x.real)) for x in row])


def sampled_from_csv(path, ambient: AmbientAlgebra | None = None) -> SampledLoop:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [r for r in reader if r]
    is_complex = any(name.endswith("_im") for name in header)
    dim = (len(header) - 1) // (2 if is_complex else 1)
    amb = ambient if ambient is not None else AmbientAlgebra(dim)
    samples = np.zeros((len(rows), dim), dtype=complex)
    for j, r in enumerate(rows):
        vals = [float(x) for x in r[1:]]
        if is_complex:
            for k in range(dim):
                samples[j, k] = vals[2 * k] + 1j * vals[2 * k + 1]
        else:
            samples[j] = vals
    return SampledLoop(samples, amb)
