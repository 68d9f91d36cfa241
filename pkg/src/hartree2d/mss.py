"""Successive substitution for the coupled lumped Hartree system.

Each outer step freezes the density terms at the current pair, computes the
ground state of both linearized Hamiltonians with the shifted power method,
and rescales the results to the prescribed masses.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .assembly import CONVOLUTION_METHODS, SHIFT_NORMS, HamiltonianOperator, lumped_convolution
from .eigensolver import ConvergenceError, PmResult, power_iterate
from .grid import LatticeSpec
from .potentials import HarmonicPotential, YukawaPotential, build_kernel_table

log = logging.getLogger(__name__)

START_PERTURBATION = 1e-12
NEGATIVE_ENTRY_LIMIT = 1e-8


class ConsistencyError(RuntimeError):
    pass


class MssConvergenceError(ConvergenceError):
    def __init__(self, message, residual, iterations, history, state):
        super().__init__(message, residual, iterations, history)
        self.state = state


@dataclass(frozen=True)
class CouplingSpec:
    theta1: float = 0.0
    theta2: float = 0.0
    kappa: float = 0.0
    mass1: float = 1.0
    mass2: float = 1.0

    def __post_init__(self):
        for name in ("theta1", "theta2", "kappa"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        for name in ("mass1", "mass2"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @property
    def masses(self) -> tuple[float, float]:
        return self.mass1, self.mass2

    def swapped(self) -> "CouplingSpec":
        return replace(self, theta1=self.theta2, theta2=self.theta1,
                       mass1=self.mass2, mass2=self.mass1)


@dataclass(frozen=True)
class Tolerances:
    """Stopping rules and iteration controls.

    ``mixing`` below 1 blends each new pair with the previous one before
    renormalizing; 1 is plain substitution.
    """

    pm: float = 1e-10
    mss: float = 1e-8
    pm_max_iter: int = 200_000
    max_outer: int = 10_000
    mixing: float = 1.0
    shift_norm: str = "row"

    def __post_init__(self):
        if not (self.pm > 0 and self.mss > 0):
            raise ValueError("tolerances must be positive")
        if not 0 < self.mixing <= 1:
            raise ValueError("mixing must lie in (0, 1]")
        if self.shift_norm not in SHIFT_NORMS:
            raise ValueError(f"shift_norm must be one of {SHIFT_NORMS}")


@dataclass(frozen=True, eq=False)
class HartreeSystem:
    """Lattice, traps and interaction kernel shared by every solve of a sweep."""

    lattice: LatticeSpec
    trap1: HarmonicPotential
    trap2: HarmonicPotential
    interaction: YukawaPotential
    convolution: str = "fast"
    kernel: object = field(init=False, repr=False)
    external1: np.ndarray = field(init=False, repr=False)
    external2: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.convolution not in CONVOLUTION_METHODS:
            raise ValueError(f"convolution must be one of {CONVOLUTION_METHODS}")
        x, y = self.lattice.coordinates()
        object.__setattr__(self, "kernel", build_kernel_table(self.interaction, self.lattice))
        object.__setattr__(self, "external1", np.asarray(self.trap1(x, y), dtype=float))
        object.__setattr__(self, "external2", np.asarray(self.trap2(x, y), dtype=float))

    def density_term(self, z: np.ndarray) -> np.ndarray:
        return lumped_convolution(z, self.kernel, self.lattice, self.convolution)

    def hamiltonians(self, z1, z2, couplings: CouplingSpec):
        g1 = self.density_term(z1)
        g2 = self.density_term(z2)
        H1 = HamiltonianOperator(self.lattice, self.external1, couplings.theta1,
                                 couplings.kappa, g1, g2)
        H2 = HamiltonianOperator(self.lattice, self.external2, couplings.theta2,
                                 couplings.kappa, g2, g1)
        return H1, H2

    def swapped(self) -> "HartreeSystem":
        return HartreeSystem(self.lattice, self.trap2, self.trap1, self.interaction,
                             self.convolution)


@dataclass(frozen=True, eq=False)
class MssState:
    """A mass-normalized pair together with its nonlinear eigenvalues and residuals.

    ``epsilon`` are the linear ground energies returned by the power method
    for the step that produced the pair (NaN for a start state).
    """

    z1: np.ndarray
    z2: np.ndarray
    mu: tuple[float, float]
    residuals: tuple[float, float]
    iteration: int = 0
    epsilon: tuple[float, float] = (np.nan, np.nan)
    pm_iterations: tuple[int, int] = (0, 0)
    operators: tuple = field(default=(), repr=False)

    @property
    def pair(self):
        return self.z1, self.z2

    def converged(self, tol: float) -> bool:
        return max(self.residuals) <= tol


def mass(z: np.ndarray, lattice: LatticeSpec) -> float:
    """Lumped squared L2 norm ``h^2 sum z_j^2``."""
    return float(lattice.spacing ** 2 * np.dot(z, z))


def normalize_mass(z: np.ndarray, target: float, lattice: LatticeSpec) -> np.ndarray:
    return z * np.sqrt(target / mass(z, lattice))


def evaluate_state(z1, z2, system: HartreeSystem, couplings: CouplingSpec, **extra) -> MssState:
    """Attach eigenvalues and stopping residuals computed with operators built at ``(z1, z2)``."""
    h = system.lattice.spacing
    ops = system.hamiltonians(z1, z2, couplings)
    mu, res = [], []
    for z, H, N in zip((z1, z2), ops, couplings.masses):
        Hz = H.apply(z)
        m = h * h * float(z @ Hz) / N
        mu.append(m)
        res.append(h * float(np.linalg.norm(Hz - m * z)) / abs(m))
    return MssState(z1, z2, tuple(mu), tuple(res), operators=ops, **extra)


def _perturbation(size: int) -> np.ndarray:
    # deterministic, node-index based; breaks exact symmetry of the start vector
    return (np.arange(size) * 0.6180339887498949) % 1.0


def _component_update(H: HamiltonianOperator, z_old: np.ndarray, N: float,
                      tol: Tolerances, lattice: LatticeSpec) -> tuple[np.ndarray, PmResult]:
    start = z_old / np.abs(z_old).max()
    start = start + START_PERTURBATION * _perturbation(start.size)
    result = power_iterate(H, start, tol=tol.pm, max_iter=tol.pm_max_iter,
                           shift_norm=tol.shift_norm)
    z = result.ground_vector
    worst = z.min()
    if worst < -NEGATIVE_ENTRY_LIMIT * z.max():
        raise ConsistencyError(
            f"power method returned a sign-changing vector (min/max = {worst / z.max():.2e})")
    z = np.maximum(z, 0.0)
    if tol.mixing < 1.0:
        z = tol.mixing * normalize_mass(z, N, lattice) + (1.0 - tol.mixing) * z_old
    return normalize_mass(z, N, lattice), result


def mss_step(state: MssState, system: HartreeSystem, couplings: CouplingSpec,
             tolerances: Tolerances = Tolerances(), executor=None) -> MssState:
    """One substitution step ``(z1, z2) -> F(z1, z2)``.

    The two power-method solves only read level-``n`` data; with an
    ``executor`` the second one runs concurrently with the first.
    """
    lattice = system.lattice
    H1, H2 = state.operators or system.hamiltonians(state.z1, state.z2, couplings)
    N1, N2 = couplings.masses
    if executor is not None:
        future = executor.submit(_component_update, H2, state.z2, N2, tolerances, lattice)
        z1, pm1 = _component_update(H1, state.z1, N1, tolerances, lattice)
        z2, pm2 = future.result()
    else:
        z1, pm1 = _component_update(H1, state.z1, N1, tolerances, lattice)
        z2, pm2 = _component_update(H2, state.z2, N2, tolerances, lattice)

    new = evaluate_state(z1, z2, system, couplings, iteration=state.iteration + 1,
                         epsilon=(pm1.energy, pm2.energy),
                         pm_iterations=(pm1.iterations, pm2.iterations))
    for z, N in zip(new.pair, couplings.masses):
        if abs(mass(z, lattice) - N) > 1e-12 * N:
            raise ConsistencyError("mass constraint violated after renormalization")
    return new


@dataclass
class MssResult:
    state: MssState
    residual_history: list = field(default_factory=list)
    eigenvalue_history: list = field(default_factory=list)
    pm_iterations: int = 0

    @property
    def outer_iterations(self) -> int:
        return self.state.iteration


def mss_solve(initial: MssState, system: HartreeSystem, couplings: CouplingSpec,
              tolerances: Tolerances = Tolerances(), callback=None, executor=None) -> MssResult:
    """Substitute until both nonlinear residuals are at most ``tolerances.mss``.

    ``initial`` may come from another coupling (warm start); its eigenvalues
    are recomputed for ``couplings`` first.  ``callback(state)`` is called
    after every outer step.
    """
    state = evaluate_state(initial.z1, initial.z2, system, couplings)
    out = MssResult(state)
    for n in range(tolerances.max_outer):
        state = mss_step(state, system, couplings, tolerances, executor=executor)
        out.state = state
        out.residual_history.append(state.residuals)
        out.eigenvalue_history.append(state.mu)
        out.pm_iterations += sum(state.pm_iterations)
        log.debug("outer %d: mu=%s residuals=%s", state.iteration, state.mu, state.residuals)
        if callback is not None:
            callback(state)
        if state.converged(tolerances.mss):
            return out
    raise MssConvergenceError(
        f"substitution did not reach {tolerances.mss:g} in {tolerances.max_outer} steps",
        residual=max(state.residuals), iterations=state.iteration,
        history=out.residual_history, state=state)


INIT_MODES = ("uniform", "gaussian", "from-file")


def _gaussian(trap: HarmonicPotential, lattice: LatticeSpec) -> np.ndarray:
    x, y = lattice.coordinates()
    if trap.strength == 0:
        return np.ones(lattice.interior_count)
    a, b = trap.center
    return np.exp(-0.5 * np.sqrt(trap.strength) * ((x - a) ** 2 + (y - b) ** 2))


def initial_state(system: HartreeSystem, couplings: CouplingSpec, mode: str = "uniform") -> MssState:
    """Positive, mass-normalized start pair.

    ``mode`` is ``"uniform"``, ``"gaussian"`` (harmonic-oscillator ground
    state of each trap) or ``"from-file:<path>"``.
    """
    lattice = system.lattice
    N1, N2 = couplings.masses
    if mode == "uniform":
        one = np.ones(lattice.interior_count)
        z1, z2 = one, one
    elif mode == "gaussian":
        z1, z2 = _gaussian(system.trap1, lattice), _gaussian(system.trap2, lattice)
    elif mode.startswith("from-file:"):
        z1, z2 = load_state(mode.split(":", 1)[1], lattice)
    else:
        raise ValueError(f"unknown init mode {mode!r}")
    pair = []
    for z, N in ((z1, N1), (z2, N2)):
        # saved states already carry the mass; rescaling would perturb the last bit
        if abs(mass(z, lattice) - N) > 1e-13 * N:
            z = normalize_mass(z, N, lattice)
        pair.append(z)
    return evaluate_state(*pair, system, couplings)


def save_state(path, state: MssState, lattice: LatticeSpec) -> None:
    with open(path, "wb") as fh:
        np.savez(fh, z1=state.z1, z2=state.z2,
                 lattice=np.array([lattice.side_length, lattice.node_count], dtype=float))


def load_state(path, lattice: LatticeSpec) -> tuple[np.ndarray, np.ndarray]:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"state file {path} does not exist")
    with np.load(path) as data:
        D, m = data["lattice"]
        if (D, int(m)) != (lattice.side_length, lattice.node_count):
            raise ValueError(
                f"state file {path} was written for D={D}, m={int(m)}, not "
                f"D={lattice.side_length}, m={lattice.node_count}")
        return data["z1"].copy(), data["z2"].copy()
