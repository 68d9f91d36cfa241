"""Shifted power method for the ground state of a linearized Hamiltonian."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .assembly import HamiltonianOperator, shift_of


class ConvergenceError(RuntimeError):
    """An iteration hit its cap before meeting the tolerance."""

    def __init__(self, message: str, residual: float, iterations: int, history=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations
        self.history = history


@dataclass(frozen=True)
class PmResult:
    ground_vector: np.ndarray
    energy: float
    shift: float
    iterations: int
    final_residual: float

    @property
    def shifted_energy(self) -> float:
        return self.energy - self.shift


def canonical_sign(z: np.ndarray) -> np.ndarray:
    """Flip ``z`` so that its entry of largest magnitude is positive."""
    return -z if z[np.argmax(np.abs(z))] < 0 else z


def residual(H: HamiltonianOperator, z: np.ndarray, shifted_energy: float, shift: float) -> float:
    """``|(H - s - e) z| / |e + s|`` for a unit vector ``z``.

    Evaluated as ``|H z - (e + s) z| / |e + s|``, which is the same quantity
    without the cancellation of subtracting a large shift.
    """
    energy = shifted_energy + shift
    if energy == 0:
        raise ZeroDivisionError("shifted energy plus shift vanishes")
    return float(np.linalg.norm(H.apply(z) - energy * z) / abs(energy))


def power_iterate(H: HamiltonianOperator, start: np.ndarray, tol: float = 1e-10,
                  max_iter: int = 200_000, shift: float | None = None,
                  shift_norm: str = "l1", trace=None) -> PmResult:
    """Iterate ``z <- (H - s) z / |(H - s) z|`` until the relative residual is below ``tol``.

    ``shift`` defaults to :func:`shift_of` with ``shift_norm``.  If ``trace`` is a
    list, the Rayleigh quotient of ``H - s`` is appended after every step.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    z = np.array(start, dtype=float)
    norm = np.linalg.norm(z)
    if norm == 0 or not np.isfinite(norm):
        raise ValueError("power method needs a nonzero finite start vector")
    z /= norm
    s = shift_of(H, shift_norm) if shift is None else float(shift)

    Hz = H.apply(z)
    r = np.inf
    for p in range(1, max_iter + 1):
        y = Hz - s * z
        z = y / np.linalg.norm(y)
        Hz = H.apply(z)
        energy = float(z @ Hz)
        if trace is not None:
            trace.append(energy - s)
        r = float(np.linalg.norm(Hz - energy * z) / abs(energy))
        if r <= tol:
            return PmResult(canonical_sign(z), energy, s, p, r)
    raise ConvergenceError(
        f"power method did not reach {tol:g} in {max_iter} steps (residual {r:.3e})",
        residual=r, iterations=max_iter)
