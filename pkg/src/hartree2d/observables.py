"""Coulomb energy, energy breakdown and segregation diagnostics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .assembly import lumped_convolution, stiffness_apply
from .grid import LatticeSpec
from .potentials import KernelTable


def coulomb_d0(z1: np.ndarray, z2: np.ndarray, kernel: KernelTable, lattice: LatticeSpec,
               method: str = "direct") -> float:
    """Lumped Coulomb energy ``<z1, diag(G0[z2]) z1>``."""
    g = lumped_convolution(z2, kernel, lattice, method)
    z1 = np.asarray(z1, dtype=float)
    if z1.shape != g.shape:
        raise ValueError("z1 does not match the lattice")
    return float(np.dot(z1 * z1, g))


@dataclass(frozen=True)
class EnergyBreakdown:
    """Parts of the discrete energy as lumped quadratures of the continuum integrals.

    ``kinetic``, ``external`` and ``self_energy`` are per component.
    """

    kinetic: tuple[float, float]
    external: tuple[float, float]
    self_energy: tuple[float, float]
    interaction: float

    @property
    def decoupled(self) -> float:
        return sum(self.kinetic) + sum(self.external) + sum(self.self_energy)

    @property
    def total(self) -> float:
        return self.decoupled + self.interaction


def energy_breakdown(z1, z2, couplings, system, d0: float | None = None) -> EnergyBreakdown:
    """Split ``E_kappa(z1, z2)`` into its parts.

    ``system`` supplies the lattice, the trap values and the kernel; ``d0`` may
    pass an already computed cross Coulomb energy.
    """
    lattice = system.lattice
    h2 = lattice.spacing ** 2
    method = system.convolution
    kin, ext, own = [], [], []
    for z, V, theta in ((z1, system.external1, couplings.theta1),
                        (z2, system.external2, couplings.theta2)):
        kin.append(float(z @ stiffness_apply(z, lattice)))
        ext.append(float(h2 * np.dot(V, z * z)))
        own.append(0.5 * theta * coulomb_d0(z, z, system.kernel, lattice, method) if theta else 0.0)
    if d0 is None:
        d0 = coulomb_d0(z1, z2, system.kernel, lattice, method)
    return EnergyBreakdown(tuple(kin), tuple(ext), tuple(own), couplings.kappa * d0)


def eigenvalue_identity(breakdown: EnergyBreakdown, couplings, alpha: int) -> float:
    """Right side of ``N mu = kinetic + external + theta D0[z, z] + kappa D0[z1, z2]``."""
    i = alpha - 1
    return (breakdown.kinetic[i] + breakdown.external[i]
            + 2.0 * breakdown.self_energy[i] + breakdown.interaction)


def overlap(z1: np.ndarray, z2: np.ndarray, lattice: LatticeSpec) -> float:
    """Lumped ``integral of min(|phi1|^2, |phi2|^2)``."""
    return float(lattice.spacing ** 2 * np.minimum(z1 * z1, z2 * z2).sum())


def second_moment(z: np.ndarray, lattice: LatticeSpec, center: tuple[float, float]) -> float:
    """Mean squared distance from ``center`` under the normalized density ``|z|^2``."""
    x, y = lattice.coordinates()
    rho = z * z
    return float(np.dot(rho, (x - center[0]) ** 2 + (y - center[1]) ** 2) / rho.sum())


_SQUARE_SYMMETRIES = (
    lambda a: a,
    lambda a: a.T,
    lambda a: a[::-1, :],
    lambda a: a[:, ::-1],
    lambda a: a[::-1, ::-1],
    lambda a: a.T[::-1, :],
    lambda a: a.T[:, ::-1],
    lambda a: a.T[::-1, ::-1],
)


def symmetry_defect(z: np.ndarray, lattice: LatticeSpec) -> float:
    """Largest density change under the 8 symmetries of the square, relative to the peak."""
    rho = lattice.as_grid(z * z)
    return float(max(np.abs(g(rho) - rho).max() for g in _SQUARE_SYMMETRIES) / rho.max())


@dataclass(frozen=True)
class SweepRecord:
    kappa: float
    mu: tuple[float, float]
    d0: float
    energy: EnergyBreakdown
    outer_iterations: int
    pm_iterations: int
    residuals: tuple[float, float]
    seconds: float
    converged: bool = True

    @property
    def kappa_d0(self) -> float:
        return self.kappa * self.d0
