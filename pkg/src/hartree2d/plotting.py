"""Static matplotlib figures written next to the delimited outputs."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .grid import LatticeSpec  # noqa: E402


def plot_densities(z1: np.ndarray, z2: np.ndarray, lattice: LatticeSpec, kappa: float, path):
    """Surface and contour panels of both densities, component 1 on top."""
    t = lattice.axis()
    x, y = np.meshgrid(t, t, indexing="xy")
    fig = plt.figure(figsize=(10, 8))
    for row, z in enumerate((z1, z2)):
        rho = lattice.as_grid(z * z)
        ax = fig.add_subplot(2, 2, 2 * row + 1, projection="3d")
        ax.plot_surface(x, y, rho, cmap="viridis", linewidth=0, antialiased=False)
        ax.set_xlabel("x")
        ax.set_ylabel("y")
        ax.set_title(f"$|z_{row + 1}|^2$")
        ax = fig.add_subplot(2, 2, 2 * row + 2)
        ax.contour(x, y, rho, levels=10, cmap="viridis")
        ax.set_aspect("equal")
        ax.set_xlabel("x")
        ax.set_ylabel("y")
    fig.suptitle(f"kappa = {kappa:g}")
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)


def plot_d0_decay(records, path):
    kappa = np.array([r.kappa for r in records])
    d0 = np.array([r.d0 for r in records])
    fig, ax = plt.subplots(figsize=(6, 5))
    ax.plot(kappa, d0, "o-", label="$D_0$")
    ax.plot(kappa, kappa * d0, "s--", label=r"$\kappa D_0$")
    ax.set_xlabel(r"$\kappa$")
    ax.set_ylabel("Coulomb energy")
    if len(kappa) > 1 and kappa[-1] > 10 * max(kappa[1], 1e-12):
        ax.set_xscale("symlog", linthresh=max(kappa[1], 1e-3))
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
