"""Uniform square lattice on (0, D)^2 and the interior-node numbering.

Only the (m-2)^2 interior nodes carry unknowns; boundary values are zero.
Interior node (m1, m2) has linear index ``j = m1 + m2 * (m - 2)`` and sits at
``((m1 + 1) h, (m2 + 1) h)``.  A coefficient vector of length M therefore
reshapes to a ``(m - 2, m - 2)`` array indexed ``[m2, m1]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class IndexRangeError(IndexError):
    """Raised for node indices outside the interior grid."""


@dataclass(frozen=True)
class LatticeSpec:
    """Square domain of edge ``side_length`` split into ``node_count - 1`` cells per side."""

    side_length: float = 1.0
    node_count: int = 129

    def __post_init__(self):
        if not self.side_length > 0:
            raise ValueError(f"side_length must be positive, got {self.side_length}")
        if int(self.node_count) != self.node_count or self.node_count < 4:
            raise ValueError(f"node_count must be an integer >= 4, got {self.node_count}")
        object.__setattr__(self, "node_count", int(self.node_count))

    @property
    def spacing(self) -> float:
        return self.side_length / (self.node_count - 1)

    @property
    def interior_per_side(self) -> int:
        return self.node_count - 2

    @property
    def interior_count(self) -> int:
        return self.interior_per_side ** 2

    @property
    def shape(self) -> tuple[int, int]:
        n = self.interior_per_side
        return (n, n)

    def axis(self) -> np.ndarray:
        """Interior node coordinates along one side, ``h, 2h, ..., D - h``."""
        return self.spacing * np.arange(1, self.interior_per_side + 1)

    def coordinates(self) -> tuple[np.ndarray, np.ndarray]:
        """Flat ``(x, y)`` arrays of all interior node positions in index order."""
        t = self.axis()
        x, y = np.meshgrid(t, t, indexing="xy")
        return x.ravel(), y.ravel()

    def as_grid(self, z: np.ndarray) -> np.ndarray:
        """View a length-M vector as a ``[m2, m1]`` array."""
        z = np.asarray(z)
        if z.shape != (self.interior_count,):
            raise ValueError(
                f"expected vector of length {self.interior_count}, got shape {z.shape}")
        return z.reshape(self.shape)


def tau(pair: tuple[int, int], lattice: LatticeSpec) -> int:
    """Linear index of interior node ``pair = (m1, m2)``."""
    n = lattice.interior_per_side
    m1, m2 = pair
    if not (0 <= m1 < n and 0 <= m2 < n):
        raise IndexRangeError(f"node pair {pair} outside [0, {n})^2")
    return int(m1 + m2 * n)


def tau_inv(j: int, lattice: LatticeSpec) -> tuple[int, int]:
    n = lattice.interior_per_side
    if not 0 <= j < lattice.interior_count:
        raise IndexRangeError(f"node index {j} outside [0, {lattice.interior_count})")
    return int(j % n), int(j // n)


def node_position(j: int, lattice: LatticeSpec) -> tuple[float, float]:
    m1, m2 = tau_inv(j, lattice)
    h = lattice.spacing
    return (m1 + 1) * h, (m2 + 1) * h
