"""Embedded target manifolds N inside a flat ambient algebra.

Supported kinds: the full linear space, the unit circle in C, the unit
sphere in R^3, U(1) and SU(2) as matrix groups, and a translated variant
that shifts any base manifold so its basepoint sits at the ambient zero
(the convention the truncation homotopy needs).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import polar

from .errors import (ConstructionError, PreconditionError, SingularInputError,
                     TangencyError)
from .spectral import (AmbientAlgebra, FourierLoop, SampledLoop, dft_analyze,
                       dft_synthesize, loop_derivative)

KINDS = (
    "full-linear-space",
    "circle-in-complex-plane",
    "sphere2-in-R3",
    "unitary-U1",
    "special-unitary-SU2",
    "translated-variant",
)


@dataclass(frozen=True)
class ManifoldSpec:
    kind: str
    ambient: AmbientAlgebra
    basepoint: np.ndarray
    projection_tolerance: float = 1e-9
    base: "ManifoldSpec | None" = None    # translated-variant only
    offset: np.ndarray | None = None      # translated-variant only

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PreconditionError(f"unknown manifold kind {self.kind!r}")
        bp = np.asarray(self.basepoint, dtype=complex).reshape(-1)
        if bp.shape[0] != self.ambient.dim:
            raise PreconditionError("basepoint dimension mismatch")
        object.__setattr__(self, "basepoint", bp)
        if self.kind == "translated-variant":
            if self.base is None or self.offset is None:
                raise PreconditionError("translated-variant needs base and offset")
            object.__setattr__(
                self, "offset", np.asarray(self.offset, dtype=complex).reshape(-1))


def full_space(dim: int, matrix_shape=None) -> ManifoldSpec:
    amb = AmbientAlgebra(dim, matrix_shape)
    return ManifoldSpec("full-linear-space", amb, np.zeros(dim))


def circle() -> ManifoldSpec:
    """Unit circle in C, basepoint 1."""
    return ManifoldSpec("circle-in-complex-plane", AmbientAlgebra(1), np.array([1.0]))


def sphere2() -> ManifoldSpec:
    """Unit sphere in R^3, basepoint (1, 0, 0)."""
    return ManifoldSpec("sphere2-in-R3", AmbientAlgebra(3), np.array([1.0, 0.0, 0.0]))


def unitary_u1() -> ManifoldSpec:
    return ManifoldSpec("unitary-U1", AmbientAlgebra(1, (1, 1)), np.array([1.0]))


def su2() -> ManifoldSpec:
    return ManifoldSpec("special-unitary-SU2", AmbientAlgebra(4, (2, 2)),
                        np.eye(2, dtype=complex).reshape(-1))


def translated(base: ManifoldSpec) -> ManifoldSpec:
    """Shift ``base`` by its own basepoint so the new basepoint is 0."""
    return ManifoldSpec("translated-variant", base.ambient,
                        np.zeros(base.ambient.dim),
                        projection_tolerance=base.projection_tolerance,
                        base=base, offset=base.basepoint)


# ---------------------------------------------------------------------------
# projection and membership


def project(x, manifold: ManifoldSpec) -> np.ndarray:
    x = np.asarray(x, dtype=complex).reshape(-1)
    kind = manifold.kind
    if kind == "full-linear-space":
        return x
    if kind in ("circle-in-complex-plane", "unitary-U1"):
        r = abs(x[0])
        if r < 1e-12:
            raise SingularInputError("cannot radially project the origin to the circle")
        return x / r
    if kind == "sphere2-in-R3":
        r = np.sqrt(np.sum(np.abs(x) ** 2))
        if r < 1e-12:
            raise SingularInputError("cannot radially project the origin to the sphere")
        return x / r
    if kind == "special-unitary-SU2":
        a = x.reshape(2, 2)
        u, _ = polar(a)
        det = np.linalg.det(u)
        if abs(det) < 1e-12:
            raise SingularInputError("polar factor is singular")
        u = u / np.sqrt(det)
        return u.reshape(-1)
    # translated-variant
    return project(x + manifold.offset, manifold.base) - manifold.offset


def point_defect(x, manifold: ManifoldSpec) -> float:
    """Ambient distance from x to the manifold."""
    x = np.asarray(x, dtype=complex).reshape(-1)
    if manifold.kind == "full-linear-space":
        return 0.0
    try:
        p = project(x, manifold)
    except SingularInputError:
        return manifold.ambient.norm(x - manifold.basepoint)
    return manifold.ambient.norm(x - p)


def membership_defect(loop: SampledLoop, manifold: ManifoldSpec) -> float:
    """Max over samples of the ambient distance to the manifold."""
    return max(point_defect(row, manifold) for row in loop.samples)


def project_loop(loop: SampledLoop, manifold: ManifoldSpec) -> SampledLoop:
    if manifold.kind == "full-linear-space":
        return loop
    out = np.stack([project(row, manifold) for row in loop.samples])
    return SampledLoop(out, loop.ambient)


# ---------------------------------------------------------------------------
# tangent structure


def tangent_project(x, v, manifold: ManifoldSpec) -> np.ndarray:
    """Project an ambient vector v onto the (real) tangent space at x in N."""
    x = np.asarray(x, dtype=complex).reshape(-1)
    v = np.asarray(v, dtype=complex).reshape(-1)
    kind = manifold.kind
    if kind == "full-linear-space":
        return v
    if kind in ("circle-in-complex-plane", "unitary-U1"):
        z = x[0] / abs(x[0])
        tangent = 1j * z
        return np.array([np.real(v[0] * np.conj(tangent)) * tangent])
    if kind == "sphere2-in-R3":
        n = x / np.sqrt(np.sum(np.abs(x) ** 2))
        return v - np.real(np.sum(v * np.conj(n))) * n
    if kind == "special-unitary-SU2":
        u = x.reshape(2, 2)
        w = u.conj().T @ v.reshape(2, 2)
        skew = 0.5 * (w - w.conj().T)
        skew = skew - (np.trace(skew) / 2.0) * np.eye(2)
        return (u @ skew).reshape(-1)
    # translated-variant
    return tangent_project(x + manifold.offset, v, manifold.base)


def tangency_defect(gamma: SampledLoop, X: SampledLoop, manifold: ManifoldSpec) -> float:
    worst = 0.0
    for p, v in zip(gamma.samples, X.samples):
        worst = max(worst, manifold.ambient.norm(v - tangent_project(p, v, manifold)))
    return worst


def _spectral_derivative(loop: SampledLoop) -> SampledLoop:
    m = loop.sample_count
    cutoff = (m - 1) // 2
    return dft_synthesize(loop_derivative(dft_analyze(loop, cutoff)), m)


def covariant_derivative(gamma: SampledLoop, X: SampledLoop,
                         manifold: ManifoldSpec,
                         tangency_tolerance: float = 1e-6) -> SampledLoop:
    """Tangential projection along gamma of the ordinary derivative of X."""
    if gamma.sample_count != X.sample_count:
        raise PreconditionError("gamma and X need matching sample grids")
    if manifold.kind != "full-linear-space":
        scale = 1.0 + X.sup_norm()
        defect = tangency_defect(gamma, X, manifold)
        if defect > tangency_tolerance * scale:
            raise TangencyError("field is not tangent along gamma", defect)
    dX = _spectral_derivative(X)
    if manifold.kind == "full-linear-space":
        return dX
    out = np.stack([
        tangent_project(p, v, manifold)
        for p, v in zip(gamma.samples, dX.samples)
    ])
    return SampledLoop(out, X.ambient)


# ---------------------------------------------------------------------------
# bridge loops (out-and-back through a prescribed point and velocity)


def bridge_loop(x, v, manifold: ManifoldSpec, sample_count: int) -> SampledLoop:
    """Smooth null-homotopic loop tau with tau(0) = tau(1) = basepoint,
    tau(1/2) = x and velocity v at the midpoint.

    An ambient curve b + sin^2(pi t)(x - b) - sin(2 pi t)/(2 pi) v is
    projected to the manifold; the radial retractions preserve the midpoint
    velocity because v is tangent at x.
    """
    x = np.asarray(x, dtype=complex).reshape(-1)
    v = np.asarray(v, dtype=complex).reshape(-1)
    b = manifold.basepoint
    if point_defect(x, manifold) > 1e-8 * (1.0 + manifold.ambient.norm(x)):
        raise ConstructionError("target point does not lie on the manifold")
    t = np.arange(sample_count) / sample_count
    bump = np.sin(np.pi * t) ** 2
    swing = -np.sin(2 * np.pi * t) / (2 * np.pi)
    curve = b[None, :] + bump[:, None] * (x - b)[None, :] + swing[:, None] * v[None, :]
    if manifold.kind in ("circle-in-complex-plane", "unitary-U1", "sphere2-in-R3"):
        radii = np.sqrt(np.sum(np.abs(curve) ** 2, axis=1))
        if np.min(radii) < 0.2:
            raise ConstructionError(
                "ambient bridge curve passes too close to the projection singularity")
    loop = SampledLoop(curve, manifold.ambient)
    return project_loop(loop, manifold)


@dataclass(frozen=True)
class BridgeCheck:
    start_defect: float
    end_defect: float
    midpoint_defect: float
    velocity_defect: float

    @property
    def max_defect(self) -> float:
        return max(self.start_defect, self.end_defect,
                   self.midpoint_defect, self.velocity_defect)


def verify_bridge(tau: SampledLoop, x, v, manifold: ManifoldSpec) -> BridgeCheck:
    """Measure the endpoint/midpoint/velocity conditions of a bridge loop."""
    m = tau.sample_count
    if m % 2 != 0:
        raise PreconditionError("bridge verification needs an even sample count")
    x = np.asarray(x, dtype=complex).reshape(-1)
    v = np.asarray(v, dtype=complex).reshape(-1)
    b = manifold.basepoint
    norm = manifold.ambient.norm
    dtau = _spectral_derivative(tau)
    return BridgeCheck(
        start_defect=norm(tau.samples[0] - b),
        end_defect=norm(tau.samples[0] - b),  # periodic grid: t=1 is t=0
        midpoint_defect=norm(tau.samples[m // 2] - x),
        velocity_defect=norm(dtau.samples[m // 2] - v),
    )


# ---------------------------------------------------------------------------
# serialization


def manifold_to_json(manifold: ManifoldSpec) -> dict:
    data = {
        "kind": manifold.kind,
        "ambient_dim": manifold.ambient.dim,
        "basepoint": [[float(z.real), float(z.imag)] for z in manifold.basepoint],
        "tolerance": manifold.projection_tolerance,
    }
    if manifold.kind == "translated-variant":
        data["base"] = manifold_to_json(manifold.base)
    return data


_BUILDERS = {
    "circle-in-complex-plane": lambda: circle(),
    "sphere2-in-R3": lambda: sphere2(),
    "unitary-U1": lambda: unitary_u1(),
    "special-unitary-SU2": lambda: su2(),
}


def manifold_from_json(data: dict) -> ManifoldSpec:
    kind = data["kind"]
    if kind == "full-linear-space":
        m = full_space(int(data["ambient_dim"]))
    elif kind == "translated-variant":
        return translated(manifold_from_json(data["base"]))
    elif kind in _BUILDERS:
        m = _BUILDERS[kind]()
    else:
        raise PreconditionError(f"unknown manifold kind {kind!r}")
    return replace(m, projection_tolerance=float(data.get("tolerance", 1e-9)))


def manifold_dumps(manifold: ManifoldSpec) -> str:
    return json.dumps(manifold_to_json(manifold))
