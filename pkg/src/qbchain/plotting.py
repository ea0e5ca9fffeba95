"""Figure rendering for the CLI report path.

Each plot function mirrors one delimited output and writes a PNG next to
it.  Rendering is headless (Agg) and optional; the delimited files remain
the primary artifact.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_MARKER_COLORS = {"hyperbolic": "tab:blue", "conic": "tab:red"}


def _new_axes(xlabel, ylabel, title):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    return fig, ax


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_sweep(result, path: str):
    """Stored energy per dimer vs nu_i, with critical markers as dashed lines."""
    fig, ax = _new_axes(
        r"$\nu_i$", r"$\Delta E / \mathcal{N}$  [J]",
        f"asymptotic stored energy ({result.metadata.get('scenario', '?')} sweep)",
    )
    ax.plot(result.nu_values, result.energies, color="tab:green", lw=1.8)
    for marker in result.critical_markers:
        ax.axvline(marker.nu, ls="--", lw=1.0,
                   color=_MARKER_COLORS.get(marker.boundary, "gray"),
                   label=f"{marker.boundary} at {marker.nu:.4f}")
    if result.critical_markers:
        ax.legend(fontsize=8)
    _finish(fig, path)


def plot_charge_curve(curve, path: str):
    """Stored energy per dimer vs charging time."""
    fig, ax = _new_axes(
        r"$\tau$  [1/J]", r"$E(\tau) / \mathcal{N}$  [J]", "charging curve"
    )
    ax.plot(curve.times, curve.energies, color="tab:blue", lw=1.2)
    _finish(fig, path)


def plot_dispersion(k_values, omega1, omega2, params, path: str):
    """Both quasiparticle branches over the Brillouin zone."""
    fig, ax = _new_axes(
        "k", r"$\omega(k)$  [J]",
        rf"dispersion at $\gamma$={params.gamma}, $\delta$={params.delta}, "
        rf"h={params.field}",
    )
    ax.plot(k_values, omega1, label=r"$\omega_1$", color="tab:orange")
    ax.plot(k_values, omega2, label=r"$\omega_2$", color="tab:purple")
    ax.legend()
    _finish(fig, path)


def plot_phase_diagram(gammas, deltas, gap, h_plane: float, path: str):
    """Spectral gap over the (gamma, delta) plane at fixed field."""
    fig, ax = _new_axes(
        r"$\gamma$", r"$\delta$", f"spectral gap in the h = {h_plane} plane"
    )
    grid_g, grid_d = np.meshgrid(gammas, deltas, indexing="ij")
    mesh = ax.pcolormesh(grid_g, grid_d, gap, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="gap  [J]")
    # boundary curves: gamma^2 delta^2 = 1 - h^2 and delta^2 - gamma^2 = h^2
    if h_plane**2 <= 1.0:
        g = np.linspace(max(1e-6, gammas[0]), gammas[-1], 400)
        d_hyp = np.sqrt(1.0 - h_plane**2) / g
        keep = (d_hyp >= deltas[0]) & (d_hyp <= deltas[-1])
        ax.plot(g[keep], d_hyp[keep], "--", color="tab:blue", lw=1.2)
    g = np.linspace(gammas[0], gammas[-1], 400)
    d_con = np.sqrt(g**2 + h_plane**2)
    keep = (d_con >= deltas[0]) & (d_con <= deltas[-1])
    ax.plot(g[keep], d_con[keep], "--", color="tab:red", lw=1.2)
    _finish(fig, path)
