"""Finite element solver for the two-component Hartree ground state in a square box."""

from .assembly import HamiltonianOperator, lumped_convolution, shift_of, stiffness_apply
from .eigensolver import ConvergenceError, PmResult, power_iterate, residual
from .grid import LatticeSpec, node_position, tau, tau_inv
from .mss import (CouplingSpec, HartreeSystem, MssState, Tolerances, initial_state,
                  mss_solve, mss_step)
from .observables import EnergyBreakdown, SweepRecord, coulomb_d0, energy_breakdown
from .potentials import (HarmonicPotential, KernelTable, YukawaPotential, build_kernel_table,
                         eval_harmonic, eval_yukawa)

__version__ = "0.1.0"
