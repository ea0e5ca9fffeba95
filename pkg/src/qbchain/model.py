"""Core model: parameters, momentum grids, dispersion, and phase boundaries.

The chain couples neighbouring spins with alternating bond strengths
(1 +/- delta), anisotropy gamma between the XX and YY parts, and a uniform
transverse field h, all in units of the overall coupling J = 1.  After the
mapping to free fermions every momentum carries two quasiparticle branches
omega1(k) >= omega2(k) >= 0; the gap closes on two parameter surfaces,
h^2 = 1 - gamma^2 delta^2 (at k = 0) and h^2 = delta^2 - gamma^2 (at k = pi).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import NegativeRadicand, NonFiniteParameter, OddDimerCount

# Outer radicand of omega2: values in (RADICAND_FLOOR, 0) are rounding noise at
# gap closure and clamp to zero; anything below RADICAND_FLOOR is a bug.
RADICAND_CLAMP = -1e-12
RADICAND_FLOOR = -1e-9


@dataclass(frozen=True)
class ModelParams:
    """Hamiltonian parameters (gamma, delta, h) at fixed coupling J = 1."""

    gamma: float
    delta: float
    field: float
    coupling: float = 1.0

    def __post_init__(self):
        for name in ("gamma", "delta", "field", "coupling"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise NonFiniteParameter(f"parameter {name} = {value!r} is not finite")
        if self.coupling != 1.0:
            raise ValueError("coupling J is the reference energy scale and must be 1")


def validate_params(gamma, delta, field) -> ModelParams:
    """Build ModelParams from three reals, rejecting non-finite input."""
    try:
        triple = (float(gamma), float(delta), float(field))
    except (TypeError, ValueError) as exc:
        raise NonFiniteParameter(f"parameters must be real numbers: {exc}") from exc
    return ModelParams(*triple)


@dataclass(frozen=True, eq=False)
class MomentumGrid:
    """Half-integer mode labels q and momenta k = 2 pi q / n_dimers."""

    n_dimers: int
    q_values: np.ndarray
    k_values: np.ndarray


def momentum_grid(n_dimers: int) -> MomentumGrid:
    """Ascending grid q in {1/2, 3/2, ..., n_dimers - 1/2}; n_dimers even, >= 2.

    Odd counts would place a self-paired mode at k = pi, which the 4x4
    momentum blocks do not represent; they are rejected.
    """
    if n_dimers % 2 != 0:
        raise OddDimerCount(f"n_dimers = {n_dimers} is odd (k = pi mode unsupported)")
    if n_dimers < 2:
        raise ValueError(f"n_dimers = {n_dimers} must be >= 2")
    q = np.arange(n_dimers) + 0.5
    k = 2.0 * np.pi * q / n_dimers
    return MomentumGrid(n_dimers=n_dimers, q_values=q, k_values=k)


def structure_functions(params: ModelParams, k):
    """Intra/inter-cell hopping and pairing amplitudes Z(k), W(k).

    Z(k) = -[(1 + delta) + (1 - delta) exp(-ik)]
    W(k) = -gamma [(1 + delta) - (1 - delta) exp(-ik)]

    `k` may be a scalar or an array.
    """
    phase = np.exp(-1j * np.asarray(k, dtype=float))
    z = -((1.0 + params.delta) + (1.0 - params.delta) * phase)
    w = -params.gamma * ((1.0 + params.delta) - (1.0 - params.delta) * phase)
    if np.ndim(k) == 0:
        return complex(z), complex(w)
    return z, w


def dispersion(params: ModelParams, k):
    """Quasiparticle branches (omega1, omega2) at momentum k, omega1 >= omega2 >= 0.

    omega_{1/2}^2 = 4h^2 + |Z|^2 + |W|^2 +/- 2 sqrt(4h^2 |Z|^2 + 16 gamma^2 delta^2)

    Scalar or array `k`.  The minus-branch radicand is clamped to zero within
    rounding noise of a gap closure and raises NegativeRadicand below the
    noise floor.
    """
    z, w = structure_functions(params, k)
    z2 = np.abs(z) ** 2
    w2 = np.abs(w) ** 2
    h2 = 4.0 * params.field**2
    inner = np.sqrt(h2 * z2 + 16.0 * (params.gamma * params.delta) ** 2)
    base = h2 + z2 + w2
    r2 = base - 2.0 * inner
    bad = np.min(r2) if np.ndim(r2) else r2
    if bad < RADICAND_FLOOR:
        raise NegativeRadicand(
            f"omega2 radicand {bad:.3e} below floor {RADICAND_FLOOR:.0e} "
            f"at params {params}"
        )
    omega1 = np.sqrt(base + 2.0 * inner)
    omega2 = np.sqrt(np.maximum(r2, 0.0))
    if np.ndim(k) == 0:
        return float(omega1), float(omega2)
    return omega1, omega2


def _omega2_scalar(gamma: float, delta: float, field: float, k: float) -> float:
    """Lower branch at scalar k via plain math calls (hot path for refinement)."""
    phase = cmath.exp(-1j * k)
    z = -((1.0 + delta) + (1.0 - delta) * phase)
    w = -gamma * ((1.0 + delta) - (1.0 - delta) * phase)
    z2 = z.real * z.real + z.imag * z.imag
    w2 = w.real * w.real + w.imag * w.imag
    h2 = 4.0 * field * field
    inner = math.sqrt(h2 * z2 + 16.0 * (gamma * delta) ** 2)
    r2 = h2 + z2 + w2 - 2.0 * inner
    if r2 < RADICAND_FLOOR:
        raise NegativeRadicand(f"omega2 radicand {r2:.3e} below floor")
    return math.sqrt(r2) if r2 > 0.0 else 0.0


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_min(f, a: float, b: float, tol: float) -> float:
    """Golden-section minimum of f on [a, b] to absolute abscissa tolerance."""
    x1 = b - _INVPHI * (b - a)
    x2 = a + _INVPHI * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INVPHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INVPHI * (b - a)
            f2 = f(x2)
    return f1 if f1 <= f2 else f2


def spectral_gap(params: ModelParams, n_samples: int = 512) -> float:
    """Minimum of omega2 over the Brillouin zone.

    Scans a uniform k grid, then refines around the grid minimum with a
    golden-section search to absolute tolerance 1e-10 (the minimum can fall
    between grid points near a conic closure).
    """
    if n_samples < 64:
        raise ValueError(f"n_samples = {n_samples} must be >= 64")
    ks = np.linspace(0.0, 2.0 * np.pi, n_samples + 1)
    _, omega2 = dispersion(params, ks)
    i = int(np.argmin(omega2))
    step = 2.0 * np.pi / n_samples
    a, b = ks[i] - step, ks[i] + step  # may leave [0, 2pi]; omega2 is periodic
    g, d, h = params.gamma, params.delta, params.field
    refined = _golden_min(
        lambda k: _omega2_scalar(g, d, h, k % (2.0 * np.pi)), a, b, 1e-10
    )
    return min(refined, float(omega2[i]))


@dataclass(frozen=True)
class BoundaryResidual:
    """Signed distances to the two gap-closure surfaces; zero marks criticality."""

    r_hyperbolic: float  # h^2 - (1 - gamma^2 delta^2), closes the gap at k = 0
    r_conic: float  # h^2 - (delta^2 - gamma^2), closes the gap at k = pi


def boundary_residuals(params: ModelParams) -> BoundaryResidual:
    """Residuals of the two phase-boundary surfaces at the given parameters."""
    h2 = params.field**2
    return BoundaryResidual(
        r_hyperbolic=h2 - 1.0 + (params.gamma * params.delta) ** 2,
        r_conic=h2 - params.delta**2 + params.gamma**2,
    )
