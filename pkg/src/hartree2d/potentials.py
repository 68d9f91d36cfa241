"""External traps, the interaction kernel, and the tabulated kernel offsets."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import LatticeSpec


class InvalidParameterError(ValueError):
    pass


@dataclass(frozen=True)
class HarmonicPotential:
    """Isotropic trap ``c * ((x - a)^2 + (y - b)^2)``."""

    center: tuple[float, float]
    strength: float

    def __post_init__(self):
        if self.strength < 0:
            raise InvalidParameterError(f"trap strength must be nonnegative, got {self.strength}")

    def __call__(self, x, y):
        a, b = self.center
        return self.strength * ((np.asarray(x) - a) ** 2 + (np.asarray(y) - b) ** 2)


@dataclass(frozen=True)
class YukawaPotential:
    """Screened interaction ``exp(-screening r) / (r + regularization)``.

    ``screening = 0`` gives the regularized Coulomb kernel ``1 / (r + regularization)``.
    """

    screening: float
    regularization: float

    def __post_init__(self):
        if not self.regularization > 0:
            raise InvalidParameterError("regularization must be positive")
        if self.screening < 0:
            raise InvalidParameterError("screening must be nonnegative")

    def radial(self, r):
        r = np.asarray(r, dtype=float)
        with np.errstate(under="ignore"):
            return np.exp(-self.screening * r) / (r + self.regularization)

    def __call__(self, x, y):
        return self.radial(np.hypot(x, y))


def eval_harmonic(p: HarmonicPotential, point: tuple[float, float]) -> float:
    return float(p(*point))


def eval_yukawa(p: YukawaPotential, point: tuple[float, float]) -> float:
    return float(p(*point))


@dataclass(frozen=True, eq=False)
class KernelTable:
    """Interaction kernel sampled at every lattice offset between interior nodes.

    ``values[d2 + n - 1, d1 + n - 1]`` holds ``V(h d1, h d2)`` for
    ``d1, d2`` in ``[-(n - 1), n - 1]`` with ``n = m - 2``; the row axis is the
    y offset, matching :meth:`LatticeSpec.as_grid`.
    """

    values: np.ndarray
    lattice: LatticeSpec

    @property
    def max_offset(self) -> int:
        return self.lattice.interior_per_side - 1

    def at(self, d1: int, d2: int) -> float:
        k = self.max_offset
        if abs(d1) > k or abs(d2) > k:
            raise IndexError(f"offset ({d1}, {d2}) outside +-{k}")
        return float(self.values[d2 + k, d1 + k])


def build_kernel_table(p, lattice: LatticeSpec) -> KernelTable:
    """Tabulate a radial kernel ``p(x, y)`` on all interior offsets.

    Any callable accepting coordinate arrays works; exponentials that
    underflow are stored as exact zeros.
    """
    k = lattice.interior_per_side - 1
    d = lattice.spacing * np.arange(-k, k + 1)
    dx, dy = np.meshgrid(d, d, indexing="xy")
    values = np.asarray(p(dx, dy), dtype=float)
    values.setflags(write=False)
    return KernelTable(values=values, lattice=lattice)
