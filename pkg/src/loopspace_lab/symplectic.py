"""Canonical 1-form and symplectic 2-form on based loops via the
mode-wise duality pairing, with boundedness probes on rough fields.

The flat 2-form pairs the derivative of one field against the other; the
mode-wise identity |2 pi n| <= 2 pi (1+|n|) makes the ratio against the
product of order-1/2 norms bounded by 2 pi, which is the computable
content of the extension to rough (order-1/2) based loops.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ._parallel import parallel_map
from .errors import PreconditionError
from .manifolds import ManifoldSpec, covariant_derivative, tangency_defect
from .spectral import (FourierLoop, SampledLoop, dual_pairing, loop_derivative,
                       random_rough_loop, sobolev_norm)

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class TangentField:
    """Ambient-valued field along a loop, with its tangency defect."""

    base: SampledLoop
    field: SampledLoop
    tangency: float

    @classmethod
    def along(cls, base: SampledLoop, field: SampledLoop,
              manifold: ManifoldSpec) -> "TangentField":
        if base.sample_count != field.sample_count:
            raise PreconditionError("base and field need matching grids")
        defect = 0.0 if manifold.kind == "full-linear-space" \
            else tangency_defect(base, field, manifold)
        return cls(base, field, defect)


def theta(gamma: FourierLoop, X: FourierLoop) -> float:
    """Canonical 1-form: the duality pairing of the loop's derivative with
    the field, real part."""
    return float(np.real(dual_pairing(loop_derivative(gamma), X)))


def omega_flat(X: FourierLoop, Y: FourierLoop) -> float:
    """Flat symplectic pairing (dX/ds against Y); exactly antisymmetric."""
    return float(np.real(dual_pairing(loop_derivative(X), Y)))


def omega_manifold(gamma: SampledLoop, X: TangentField, Y: TangentField,
                   manifold: ManifoldSpec,
                   tangency_tolerance: float = 1e-6) -> float:
    """Quadrature of the covariant derivative of X paired against Y."""
    dX = covariant_derivative(gamma, X.field, manifold,
                              tangency_tolerance=tangency_tolerance)
    vals = np.real(np.sum(dX.samples * np.conj(Y.field.samples), axis=1))
    return float(np.mean(vals))


def omega_group(X: SampledLoop, Y: SampledLoop) -> float:
    """Reference computation of the left-invariant loop-group pairing on
    smooth sampled algebra-valued fields.  No rough extension is claimed;
    probe roughness with group_form_cutoff_sweep instead."""
    from .manifolds import _spectral_derivative
    dX = _spectral_derivative(X)
    vals = np.real(np.sum(dX.samples * np.conj(Y.samples), axis=1))
    return float(np.mean(vals))


def group_form_cutoff_sweep(order_target: float, cutoffs, seed: int = 0) -> list:
    """Values of the flat pairing on seeded rough fields across cutoffs;
    the sequence blows up when the fields are rougher than order 1/2."""
    out = []
    for cutoff in cutoffs:
        X = random_rough_loop(order_target, cutoff, seed)
        Y = random_rough_loop(order_target, cutoff, seed + 1)
        out.append({"cutoff": int(cutoff), "value": omega_flat(X, Y)})
    return out


@dataclass(frozen=True)
class PairingBoundReport:
    trials: int
    cutoff: int
    max_ratio: float
    bound: float
    argmax_seeds: tuple

    def to_json(self) -> dict:
        return {"trials": self.trials, "cutoff": self.cutoff,
                "max_ratio": self.max_ratio, "bound": self.bound,
                "argmax_seeds": list(self.argmax_seeds)}

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def pairing_ratio(X: FourierLoop, Y: FourierLoop) -> float:
    denom = sobolev_norm(X, 0.5) * sobolev_norm(Y, 0.5)
    if denom == 0.0:
        return 0.0
    return abs(omega_flat(X, Y)) / denom


def single_mode_ratio(n: int) -> float:
    """Closed-form ratio attained by the pair (e_n, i e_n): the per-mode
    factor 2 pi |n| / (1 + |n|), approaching 2 pi from below."""
    return TWO_PI * abs(n) / (1.0 + abs(n))


def pairing_bound_check(trials: int, mode_cutoff: int, seed: int = 0,
                        roughness_margin: float = 0.05) -> PairingBoundReport:
    """Max pairing ratio over seeded random rough pairs; stays below 2 pi."""
    if trials < 1:
        raise PreconditionError("need at least one trial")
    order = 0.5 + roughness_margin

    def one(k: int):
        sx, sy = seed + 2 * k, seed + 2 * k + 1
        X = random_rough_loop(order, mode_cutoff, sx)
        Y = random_rough_loop(order, mode_cutoff, sy)
        return pairing_ratio(X, Y), (sx, sy)

    results = parallel_map(one, range(trials))
    max_ratio, argmax = max(results, key=lambda r: r[0])
    return PairingBoundReport(trials=trials, cutoff=mode_cutoff,
                              max_ratio=float(max_ratio), bound=TWO_PI,
                              argmax_seeds=argmax)
