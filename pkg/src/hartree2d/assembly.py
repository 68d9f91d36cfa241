"""Matrix-free operators of the mass-lumped bilinear finite element system.

The Hamiltonian of one component is

    H = (B + Y + own * diag(G0[z_own]) + cross * diag(G0[z_other])) / h^2

with B the bilinear stiffness matrix (a 9-point stencil), Y = h^2 diag(V) the
lumped trap matrix and G0 the lumped convolution of a density with the
interaction kernel.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import signal

from .grid import LatticeSpec
from .potentials import KernelTable

STENCIL_CENTER = 8.0 / 3.0
STENCIL_EDGE = -1.0 / 3.0
STENCIL_CORNER = -1.0 / 3.0

CONVOLUTION_METHODS = ("direct", "fast")


class DimensionError(ValueError):
    pass


def _check_length(z: np.ndarray, lattice: LatticeSpec) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if z.ndim != 1 or z.size != lattice.interior_count:
        raise DimensionError(
            f"vector of shape {z.shape} does not match lattice with M={lattice.interior_count}")
    return z


def stiffness_apply(z: np.ndarray, lattice: LatticeSpec) -> np.ndarray:
    """Return ``B z`` with zero Dirichlet values outside the interior grid."""
    u = lattice.as_grid(_check_length(z, lattice))
    # 3x3 box sum with zero closure, done separably
    rows = u.copy()
    rows[:, 1:] += u[:, :-1]
    rows[:, :-1] += u[:, 1:]
    box = rows.copy()
    box[1:] += rows[:-1]
    box[:-1] += rows[1:]
    # edge and corner weights coincide, so B u = center*u + edge*(box - u)
    out = (STENCIL_CENTER - STENCIL_EDGE) * u + STENCIL_EDGE * box
    return out.ravel()


def neighbor_counts(lattice: LatticeSpec) -> np.ndarray:
    """Number of interior stencil neighbours (edge plus corner) of every node."""
    n = lattice.interior_per_side
    per_axis = np.full(n, 3)
    per_axis[0] -= 1
    per_axis[-1] -= 1
    return (np.multiply.outer(per_axis, per_axis) - 1).ravel()


def _offset_slices(d: int, n: int) -> tuple[slice, slice]:
    if d >= 0:
        return slice(d, n), slice(0, n - d)
    return slice(0, n + d), slice(-d, n)


def _convolve_direct(rho: np.ndarray, kernel: KernelTable) -> np.ndarray:
    n = rho.shape[0]
    k = n - 1
    out = np.zeros_like(rho)
    for d2 in range(-k, k + 1):
        t2, s2 = _offset_slices(d2, n)
        for d1 in range(-k, k + 1):
            v = kernel.values[d2 + k, d1 + k]
            if v == 0.0:
                continue
            t1, s1 = _offset_slices(d1, n)
            out[t2, t1] += v * rho[s2, s1]
    return out


def lumped_convolution(w: np.ndarray, kernel: KernelTable, lattice: LatticeSpec,
                       method: str = "direct") -> np.ndarray:
    """``G0[w]_i = h^4 sum_j |w_j|^2 V(h (pair_i - pair_j))``.

    ``method="direct"`` sums over all lattice offsets; ``"fast"`` uses a
    zero-padded FFT convolution.
    """
    if kernel.lattice != lattice:
        raise DimensionError("kernel table was built for a different lattice")
    rho = lattice.as_grid(np.abs(_check_length(w, lattice)) ** 2)
    if method == "direct":
        out = _convolve_direct(rho, kernel)
    elif method == "fast":
        out = signal.fftconvolve(kernel.values, rho, mode="valid")
    else:
        raise ValueError(f"unknown convolution method {method!r}")
    return lattice.spacing ** 4 * out.ravel()


@dataclass(frozen=True, eq=False)
class HamiltonianOperator:
    """One component's linearized Hamiltonian with frozen density terms.

    ``external`` holds the trap values at the nodes; ``own_density`` and
    ``cross_density`` are the lumped convolutions of the component's own and
    the other component's density.
    """

    lattice: LatticeSpec
    external: np.ndarray
    self_coupling: float = 0.0
    cross_coupling: float = 0.0
    own_density: np.ndarray | None = None
    cross_density: np.ndarray | None = None
    diagonal: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        M = self.lattice.interior_count
        h2 = self.lattice.spacing ** 2
        diag = _check_length(self.external, self.lattice).copy()
        for coupling, dens in ((self.self_coupling, self.own_density),
                               (self.cross_coupling, self.cross_density)):
            if coupling < 0:
                raise ValueError("couplings must be nonnegative")
            if dens is not None:
                if np.shape(dens) != (M,):
                    raise DimensionError("density term does not match the lattice")
                if coupling != 0.0:
                    diag += coupling * np.asarray(dens) / h2
        diag.setflags(write=False)
        object.__setattr__(self, "diagonal", diag)

    @property
    def size(self) -> int:
        return self.lattice.interior_count

    def apply(self, z: np.ndarray) -> np.ndarray:
        z = _check_length(z, self.lattice)
        return stiffness_apply(z, self.lattice) / self.lattice.spacing ** 2 + self.diagonal * z

    __matmul__ = apply

    def _main_diagonal(self) -> np.ndarray:
        return np.abs(STENCIL_CENTER / self.lattice.spacing ** 2 + self.diagonal)

    def _offdiagonal_row_sums(self) -> np.ndarray:
        return neighbor_counts(self.lattice) * abs(STENCIL_EDGE) / self.lattice.spacing ** 2

    def l1_norm(self) -> float:
        """Sum of the absolute values of all matrix entries."""
        return float(self._main_diagonal().sum() + self._offdiagonal_row_sums().sum())

    def row_norm(self) -> float:
        """Maximum absolute row sum (the induced infinity norm)."""
        return float((self._main_diagonal() + self._offdiagonal_row_sums()).max())


SHIFT_NORMS = ("l1", "row")


def shift_of(H: HamiltonianOperator, norm: str = "l1") -> float:
    """Spectral shift ``|H| + 1``.

    ``norm="l1"`` is the entrywise sum of absolute values; ``"row"`` is the
    maximum absolute row sum.  Both bound the spectral radius, so every
    eigenvalue of ``H - s`` lies in ``(-2s, 0)``.
    """
    if norm == "l1":
        return H.l1_norm() + 1.0
    if norm == "row":
        return H.row_norm() + 1.0
    raise ValueError(f"unknown shift norm {norm!r}")
