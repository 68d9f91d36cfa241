"""Warm-started sweep over the interaction strength."""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import ExitStack
from dataclasses import dataclass, field
from pathlib import Path

import scipy.fft

from . import output
from .config import RunConfig
from .eigensolver import ConvergenceError
from .mss import MssState, initial_state, mss_solve, save_state
from .observables import SweepRecord, coulomb_d0, energy_breakdown

log = logging.getLogger(__name__)

# interaction strengths shown in the original density figures; others extend the sweep
REFERENCE_KAPPAS = (0.0, 0.5, 10.0)


@dataclass
class SweepOutcome:
    records: list = field(default_factory=list)
    states: list = field(default_factory=list)
    failure: str | None = None
    output_dir: Path | None = None

    @property
    def converged(self) -> bool:
        return self.failure is None


def _record(kappa, state: MssState, result, system, couplings, seconds, converged=True):
    d0 = coulomb_d0(state.z1, state.z2, system.kernel, system.lattice, system.convolution)
    energy = energy_breakdown(state.z1, state.z2, couplings, system, d0=d0)
    outer = result.outer_iterations if result is not None else state.iteration
    pm = result.pm_iterations if result is not None else sum(state.pm_iterations)
    return SweepRecord(kappa, state.mu, d0, energy, outer, pm, state.residuals, seconds,
                       converged)


def solve_sweep(config: RunConfig, callback=None) -> SweepOutcome:
    """Run the sweep in memory; ``callback(kappa, state)`` sees every outer step."""
    system = config.system()
    tolerances = config.tolerances()
    outcome = SweepOutcome()
    state = initial_state(system, config.couplings(config.kappa[0]), config.init)
    with ExitStack() as stack:
        stack.enter_context(scipy.fft.set_workers(config.threads))
        executor = None
        if config.threads > 1:
            executor = stack.enter_context(ThreadPoolExecutor(max_workers=1))
        for kappa in config.kappa:
            couplings = config.couplings(kappa)
            step_cb = None if callback is None else (lambda s, k=kappa: callback(k, s))
            t0 = time.perf_counter()
            try:
                result = mss_solve(state, system, couplings, tolerances, callback=step_cb,
                                   executor=executor)
            except ConvergenceError as exc:
                last = getattr(exc, "state", None)
                outcome.failure = f"kappa={kappa:g}: {exc}"
                log.error("sweep stopped: %s", outcome.failure)
                if last is not None:
                    outcome.records.append(_record(kappa, last, None, system, couplings,
                                                   time.perf_counter() - t0, converged=False))
                    outcome.states.append(last)
                break
            state = result.state
            outcome.records.append(_record(kappa, state, result, system, couplings,
                                           time.perf_counter() - t0))
            outcome.states.append(state)
            log.info("kappa=%g converged in %d outer steps (mu=%.10g, %.10g)", kappa,
                     result.outer_iterations, *state.mu)
    return outcome


def run_sweep(config: RunConfig) -> SweepOutcome:
    """Solve every kappa of ``config`` in order and write all result files."""
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    lattice = config.lattice()
    with output.ResidualLog(out / "residuals.csv") as rlog:
        outcome = solve_sweep(config, callback=rlog.record)
    outcome.output_dir = out

    for record, state in zip(outcome.records, outcome.states):
        for alpha, z in ((1, state.z1), (2, state.z2)):
            output.write_density(z, lattice, out / output.density_filename(record.kappa, alpha))
        save_state(out / f"state_k{record.kappa:g}.npz", state, lattice)
    output.write_sweep_table(outcome.records, out / "sweep.csv", outcome.failure, config.timing)
    output.write_gnuplot_script(out / "plot.gp", [r.kappa for r in outcome.records],
                                lattice.side_length)
    if config.figures and outcome.records:
        from . import plotting

        for record, state in zip(outcome.records, outcome.states):
            plotting.plot_densities(state.z1, state.z2, lattice, record.kappa,
                                    out / f"density_k{record.kappa:g}.png")
        plotting.plot_d0_decay(outcome.records, out / "d0_decay.png")

    output.write_metadata(out / "run.json", {
        "config": config.as_dict(),
        "init": config.init,
        "kappa": [{"value": k, "role": "reference" if k in REFERENCE_KAPPAS else "extension"}
                  for k in config.kappa],
        "converged": outcome.converged,
        "failure": outcome.failure,
    })
    return outcome
