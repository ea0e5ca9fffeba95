"""Quench scenarios: one-parameter sweep lines and their critical points.

A scenario maps a sweep coordinate nu onto model parameters.  The battery
Hamiltonian sits at nu and the charging Hamiltonian at nu + nu_f.  Three
named families cover the standard sweeps (quench the anisotropy at fixed
field and dimerization, quench the field, or move diagonally in the
gamma-h plane); `explicit` wraps a literal (pre, post) pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from scipy.optimize import bisect

from .errors import UsageError
from .model import ModelParams, boundary_residuals

KINDS = ("anisotropy", "field", "diagonal", "explicit")


@dataclass(frozen=True)
class QuenchScenario:
    """Sweep line nu -> ModelParams plus the quench amplitude nu_f."""

    kind: str
    nu_f: float = 0.0
    gamma: Optional[float] = None
    delta: Optional[float] = None
    field: Optional[float] = None
    h_offset: float = 0.5  # diagonal family: h = nu + h_offset
    pre: Optional[ModelParams] = None
    post: Optional[ModelParams] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UsageError(f"unknown scenario kind {self.kind!r}; expected {KINDS}")
        required = {
            "anisotropy": ("delta", "field"),
            "field": ("gamma", "delta"),
            "diagonal": ("delta",),
            "explicit": (),
        }[self.kind]
        for name in required:
            if getattr(self, name) is None:
                raise UsageError(f"scenario {self.kind!r} needs a fixed {name!r}")
        if self.kind == "explicit" and (self.pre is None or self.post is None):
            raise UsageError("explicit scenario needs literal pre and post params")

    @classmethod
    def anisotropy(cls, field: float, delta: float, nu_f: float) -> "QuenchScenario":
        return cls(kind="anisotropy", nu_f=nu_f, delta=delta, field=field)

    @classmethod
    def field_quench(cls, gamma: float, delta: float, nu_f: float) -> "QuenchScenario":
        return cls(kind="field", nu_f=nu_f, gamma=gamma, delta=delta)

    @classmethod
    def diagonal(cls, delta: float = 1.5, h_offset: float = 0.5,
                 nu_f: float = 0.0) -> "QuenchScenario":
        return cls(kind="diagonal", nu_f=nu_f, delta=delta, h_offset=h_offset)

    @classmethod
    def explicit(cls, pre: ModelParams, post: ModelParams) -> "QuenchScenario":
        return cls(kind="explicit", pre=pre, post=post)

    def params_at(self, nu: float) -> ModelParams:
        return scenario_params(self, nu)

    def pre_params(self, nu: float) -> ModelParams:
        return scenario_params(self, nu)

    def post_params(self, nu: float) -> ModelParams:
        return scenario_params(self, nu + self.nu_f)


def scenario_params(scenario: QuenchScenario, nu: float) -> ModelParams:
    """Model parameters on the sweep line at coordinate nu."""
    if scenario.kind == "anisotropy":
        return ModelParams(gamma=nu, delta=scenario.delta, field=scenario.field)
    if scenario.kind == "field":
        return ModelParams(gamma=scenario.gamma, delta=scenario.delta, field=nu)
    if scenario.kind == "diagonal":
        return ModelParams(gamma=nu, delta=scenario.delta, field=nu + scenario.h_offset)
    raise UsageError("explicit scenarios carry no parameter map")


@dataclass(frozen=True)
class CriticalPoint:
    """Sweep coordinate where a boundary surface is crossed."""

    nu: float
    boundary: str  # "hyperbolic" | "conic"


def critical_points_on_segment(
    scenario: QuenchScenario,
    interval,
    target: str = "post",
    grid_step: float = 1e-3,
    xtol: float = 1e-10,
):
    """All boundary crossings of the swept Hamiltonian on [nu_lo, nu_hi].

    target="post" evaluates the map at nu + nu_f (the charging Hamiltonian);
    target="pre" at nu.  Roots are located by sign-change bracketing on a
    uniform grid of the given step, then bisection to `xtol`, and returned
    ascending in nu.
    """
    nu_lo, nu_hi = float(interval[0]), float(interval[1])
    if not (math.isfinite(nu_lo) and math.isfinite(nu_hi) and nu_lo < nu_hi):
        raise UsageError(f"bad interval [{nu_lo}, {nu_hi}]")
    if target not in ("pre", "post"):
        raise UsageError(f"target must be 'pre' or 'post', got {target!r}")
    offset = scenario.nu_f if target == "post" else 0.0

    def residual(name):
        def f(nu):
            return getattr(boundary_residuals(scenario.params_at(nu + offset)), name)

        return f

    points = []
    n_cells = max(1, int(math.ceil((nu_hi - nu_lo) / grid_step)))
    grid = [nu_lo + (nu_hi - nu_lo) * i / n_cells for i in range(n_cells + 1)]
    for name, label in (("r_hyperbolic", "hyperbolic"), ("r_conic", "conic")):
        f = residual(name)
        values = [f(x) for x in grid]
        for i in range(n_cells):
            a, b, fa, fb = grid[i], grid[i + 1], values[i], values[i + 1]
            if fa == 0.0:
                points.append(CriticalPoint(nu=a, boundary=label))
            elif fa * fb < 0.0:
                root = bisect(f, a, b, xtol=xtol)
                points.append(CriticalPoint(nu=float(root), boundary=label))
        if values[-1] == 0.0:
            points.append(CriticalPoint(nu=grid[-1], boundary=label))
    points.sort(key=lambda p: p.nu)
    return points
