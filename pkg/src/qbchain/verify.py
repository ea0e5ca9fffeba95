"""Oracle suite: every identity the free-fermion engine must satisfy.

Each check draws seeded random points, measures the worst deviation against
its independent reference (closed-form dispersion, many-body ground truth,
or a second evaluation route), and compares against a pinned tolerance.
The CLI `verify` command prints one row per check and exits nonzero if any
tolerance is violated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ed
from .bdg import bdg_block_stack
from .model import ModelParams, boundary_residuals, dispersion, momentum_grid, spectral_gap
from .quench import (
    stored_energy_asymptotic,
    stored_energy_curve,
    stored_energy_time_average,
    sweep_scenario,
)
from .scenarios import QuenchScenario


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    tolerance: float
    detail: str = ""

    def row(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{self.name:<28} {status:<5} worst={self.worst:<12.3e} "
            f"tol={self.tolerance:.0e} {self.detail}"
        )


def _result(name, worst, tol, detail="") -> CheckResult:
    return CheckResult(name=name, passed=worst <= tol, worst=float(worst),
                       tolerance=tol, detail=detail)


def _free_fermion_ground_energy(params: ModelParams, n_dimers: int) -> float:
    w1, w2 = dispersion(params, momentum_grid(n_dimers).k_values)
    return -0.5 * float(np.sum(w1 + w2))


def check_spectral_identity(rng, draws: int = 1000, tol: float = 1e-10) -> CheckResult:
    """Block eigenvalues against the closed-form +/- dispersion branches."""
    gdh = rng.uniform(-2.0, 2.0, size=(draws, 3))
    ks = rng.uniform(0.0, 2.0 * np.pi, size=draws)
    worst = 0.0
    for (g, d, h), k in zip(gdh, ks):
        params = ModelParams(g, d, h)
        w1, w2 = dispersion(params, float(k))
        eigs = np.linalg.eigvalsh(bdg_block_stack(params, [k])[0])
        target = np.sort([w1, w2, -w1, -w2])
        worst = max(worst, float(np.max(np.abs(eigs - target))))
    return _result("spectral-identity", worst, tol, f"{draws} draws")


def check_ground_energy(rng, sizes=(4, 8), trials: int = 20,
                        tol: float = 1e-9) -> CheckResult:
    """Even-parity many-body ground energy against -1/2 sum(w1 + w2)."""
    worst = 0.0
    for n_sites in sizes:
        for _ in range(trials):
            g, d, h = rng.uniform(0.0, 2.0, size=3)
            params = ModelParams(g, d, h)
            hmat = ed.build_spin_hamiltonian(params, n_sites)
            e_ed, _ = ed.ground_state(hmat, ed.parity_sector(n_sites, "even"))
            e_ff = _free_fermion_ground_energy(params, n_sites // 2)
            worst = max(worst, abs(e_ed - e_ff))
    return _result("ground-energy", worst, tol, f"sizes {tuple(sizes)}, {trials} trials")


def _random_pairs(rng, count: int):
    for _ in range(count):
        g0, d0, h0, g1, d1, h1 = rng.uniform(0.0, 2.0, size=6)
        yield ModelParams(g0, d0, h0), ModelParams(g1, d1, h1)


def check_asymptotic_oracle(rng, pairs: int = 10, tol_ed: float = 1e-8,
                            tol_route: float = 1e-10):
    """Asymptotic stored energy vs the many-body dephased average (8 spins)
    and vs the projector-route evaluation."""
    worst_ed = 0.0
    worst_route = 0.0
    for pre, post in _random_pairs(rng, pairs):
        value = stored_energy_asymptotic(pre, post, 4)
        worst_ed = max(worst_ed, abs(value - ed.dephased_energy(pre, post, 8)))
        worst_route = max(
            worst_route, abs(value - stored_energy_time_average(pre, post, 4))
        )
    return (
        _result("asymptotic-vs-many-body", worst_ed, tol_ed, f"{pairs} pairs"),
        _result("asymptotic-two-routes", worst_route, tol_route, f"{pairs} pairs"),
    )


def check_finite_time(rng, pairs: int = 5, taus=(0.5, 1.0, 2.0, 5.0),
                      tol: float = 1e-8, tol_zero: float = 1e-12):
    """Finite-time charging curve against many-body evolution (8 spins)."""
    worst = 0.0
    worst_zero = 0.0
    times = np.concatenate([[0.0], np.asarray(taus, dtype=float)])
    for pre, post in _random_pairs(rng, pairs):
        curve = stored_energy_curve(pre, post, times, 4)
        worst_zero = max(worst_zero, abs(curve.energies[0]))
        for tau, per_dimer in zip(times[1:], curve.energies[1:]):
            reference = ed.evolved_energy(pre, post, float(tau), 8)
            worst = max(worst, abs(4.0 * per_dimer - reference))
    return (
        _result("finite-time-dynamics", worst, tol, f"{pairs} pairs x {len(taus)} times"),
        _result("charging-starts-at-zero", worst_zero, tol_zero),
    )


def _points_on_boundaries(rng, count: int):
    """Random points on each gap-closure surface with parameters in [0, 2]."""
    hyperbolic = []
    while len(hyperbolic) < count:
        g, d = rng.uniform(0.0, 2.0, size=2)
        if (g * d) ** 2 <= 1.0:
            hyperbolic.append(ModelParams(g, d, float(np.sqrt(1.0 - (g * d) ** 2))))
    conic = []
    while len(conic) < count:
        g, d = rng.uniform(0.0, 2.0, size=2)
        if d >= g:
            conic.append(ModelParams(g, d, float(np.sqrt(d * d - g * g))))
    return hyperbolic, conic


def check_gap_closure(rng, count: int = 200, tol_on: float = 1e-6,
                      gap_floor: float = 1e-3, residual_floor: float = 0.05):
    """Gap vanishes on the boundary surfaces and stays open away from them."""
    hyperbolic, conic = _points_on_boundaries(rng, count)
    worst_on = max(spectral_gap(p) for p in hyperbolic + conic)
    off = []
    while len(off) < count:
        g, d, h = rng.uniform(0.0, 2.0, size=3)
        params = ModelParams(g, d, h)
        res = boundary_residuals(params)
        if min(abs(res.r_hyperbolic), abs(res.r_conic)) >= residual_floor:
            off.append(params)
    smallest_off = min(spectral_gap(p) for p in off)
    return (
        _result("gap-on-boundaries", worst_on, tol_on, f"{2 * count} points"),
        CheckResult(
            name="gap-off-boundaries",
            passed=smallest_off >= gap_floor,
            worst=smallest_off,
            tolerance=gap_floor,
            detail=f"min gap over {count} points (must exceed tol)",
        ),
    )


def check_null_quench(rng, trials: int = 10, tol: float = 1e-12) -> CheckResult:
    """Quenching onto the same Hamiltonian stores nothing."""
    worst = 0.0
    for _ in range(trials):
        g, d, h = rng.uniform(0.0, 2.0, size=3)
        params = ModelParams(g, d, h)
        worst = max(worst, abs(stored_energy_asymptotic(params, params, 16)))
    return _result("null-quench", worst, tol, f"{trials} draws")


def check_non_negativity(rng, trials: int = 50, floor: float = -1e-12) -> CheckResult:
    """Stored energy never dips below zero (up to rounding)."""
    lowest = 0.0
    for pre, post in _random_pairs(rng, trials):
        lowest = min(lowest, stored_energy_asymptotic(pre, post, 16))
    return CheckResult(
        name="non-negativity", passed=lowest >= floor, worst=lowest,
        tolerance=abs(floor), detail=f"min over {trials} pairs",
    )


def check_convergence(rng, points: int = 20, tol: float = 1e-4) -> CheckResult:
    """Per-dimer energy converged in system size away from criticality."""
    scenario = QuenchScenario.anisotropy(field=0.5, delta=1.1, nu_f=0.3)
    markers = (0.48729582162221694, 0.6797958971132712)
    worst = 0.0
    picked = 0
    while picked < points:
        nu = float(rng.uniform(0.02, 0.95))
        if min(abs(nu - m) for m in markers) < 0.05:
            continue
        picked += 1
        pre, post = scenario.pre_params(nu), scenario.post_params(nu)
        small = stored_energy_asymptotic(pre, post, 512) / 512
        large = stored_energy_asymptotic(pre, post, 1024) / 1024
        worst = max(worst, abs(small - large))
    return _result("size-convergence", worst, tol, f"{points} scenario points")


def check_thread_determinism(tol: float = 0.0) -> CheckResult:
    """Sweeps give bitwise-identical energies for 1 and 8 worker threads."""
    scenario = QuenchScenario.anisotropy(field=0.5, delta=1.1, nu_f=0.3)
    grid = np.linspace(0.0, 1.0, 21)
    serial = sweep_scenario(scenario, grid, 64, threads=1).energies
    threaded = sweep_scenario(scenario, grid, 64, threads=8).energies
    identical = serial.tobytes() == threaded.tobytes()
    worst = 0.0 if identical else float(np.max(np.abs(serial - threaded)))
    return CheckResult(
        name="thread-determinism", passed=identical, worst=worst,
        tolerance=tol, detail="bitwise over 21-point sweep",
    )


def run_verification(sizes=(4, 8), trials: int = 20, seed: int = 7):
    """Run every check with independent substreams of the given seed."""
    streams = [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(8)]
    results = [check_spectral_identity(streams[0])]
    results.append(check_ground_energy(streams[1], sizes=sizes, trials=trials))
    results.extend(check_asymptotic_oracle(streams[2], pairs=min(trials, 10)))
    results.extend(check_finite_time(streams[3], pairs=5))
    results.extend(check_gap_closure(streams[4]))
    results.append(check_null_quench(streams[5]))
    results.append(check_non_negativity(streams[6]))
    results.append(check_convergence(streams[7]))
    results.append(check_thread_determinism())
    return results


def render_report(results, sizes, trials, seed) -> str:
    lines = [f"verification suite  (sizes={','.join(map(str, sizes))} "
             f"trials={trials} seed={seed})"]
    lines += [r.row() for r in results]
    failed = sum(not r.passed for r in results)
    lines.append(
        f"{len(results) - failed}/{len(results)} checks passed"
        + (f"  ({failed} FAILED)" if failed else "")
    )
    return "\n".join(lines)
