"""Result files: density grids, the sweep table, the residual log and a gnuplot script."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .grid import LatticeSpec

SWEEP_COLUMNS = ("kappa", "mu1", "mu2", "D0", "kappaD0", "E_total", "E_decoupled",
                 "outer_iters", "pm_iters", "resid1", "resid2", "seconds")
RESIDUAL_COLUMNS = ("kappa", "n", "alpha", "epsilon", "mu", "residual")


def _num(x) -> str:
    return format(float(x), ".17g")


def density_filename(kappa: float, alpha: int) -> str:
    return f"density_k{kappa:g}_c{alpha}.dat"


def write_density(z: np.ndarray, lattice: LatticeSpec, path) -> None:
    """Write ``x y |z|^2 z`` rows, one block per x value, blocks separated by a blank line."""
    grid = lattice.as_grid(np.asarray(z, dtype=float))
    t = lattice.axis()
    lines = []
    for i1, x in enumerate(t):
        if i1:
            lines.append("\n")
        for i2, y in enumerate(t):
            v = grid[i2, i1]
            lines.append(f"{_num(x)} {_num(y)} {_num(v * v)} {_num(v)}\n")
    with open(path, "w", encoding="ascii") as fh:
        fh.writelines(lines)


def read_density(path, lattice: LatticeSpec) -> np.ndarray:
    """Read back the coefficient vector written by :func:`write_density`."""
    data = np.loadtxt(path, ndmin=2)
    n = lattice.interior_per_side
    if data.shape != (lattice.interior_count, 4):
        raise ValueError(f"{path}: expected {lattice.interior_count} rows of 4 columns")
    # file order is x-major; vectors are y-major
    return data[:, 3].reshape(n, n).T.ravel().copy()


def write_sweep_table(records, path, failure: str | None = None, timing: bool = True) -> None:
    lines = ["# " + ",".join(SWEEP_COLUMNS) + "\n"]
    for r in records:
        row = [r.kappa, r.mu[0], r.mu[1], r.d0, r.kappa_d0, r.energy.total,
               r.energy.decoupled]
        cells = [_num(v) for v in row]
        cells += [str(r.outer_iterations), str(r.pm_iterations),
                  _num(r.residuals[0]), _num(r.residuals[1]),
                  format(r.seconds if timing else 0.0, ".3f")]
        lines.append(",".join(cells) + "\n")
    if failure:
        lines.append(f"# FAILED: {failure}\n")
    with open(path, "w", encoding="ascii") as fh:
        fh.writelines(lines)


def read_sweep_table(path) -> list[dict]:
    rows = []
    with open(path, encoding="ascii") as fh:
        header = fh.readline().lstrip("#").strip().split(",")
        for line in fh:
            if line.startswith("#") or not line.strip():
                continue
            rows.append({k: float(v) for k, v in zip(header, line.strip().split(","))})
    return rows


class ResidualLog:
    """CSV log with one line per outer iteration and component."""

    def __init__(self, path):
        self.path = Path(path)
        self._fh = open(self.path, "w", encoding="ascii")
        self._fh.write("# " + ",".join(RESIDUAL_COLUMNS) + "\n")

    def record(self, kappa: float, state) -> None:
        for alpha in (1, 2):
            i = alpha - 1
            self._fh.write(",".join([_num(kappa), str(state.iteration), str(alpha),
                                     _num(state.epsilon[i]), _num(state.mu[i]),
                                     _num(state.residuals[i])]) + "\n")

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def write_metadata(path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


_GNUPLOT_HEADER = """\
# gnuplot script: surface and contour plots of the densities, and the
# Coulomb energy against kappa.  Run with `gnuplot plot.gp` in this directory.
set terminal pngcairo size 1200,900
set datafile commentschars "#"
set xlabel "x"
set ylabel "y"
"""


def write_gnuplot_script(path, kappas, side_length: float) -> None:
    out = [_GNUPLOT_HEADER, f"set xrange [0:{side_length:g}]\nset yrange [0:{side_length:g}]\n"]
    for k in kappas:
        out.append(f"\nset output 'density_k{k:g}.png'\n")
        out.append("set multiplot layout 2,2 title 'kappa = %g'\n" % k)
        for alpha in (1, 2):
            name = density_filename(k, alpha)
            out.append("unset view; set view 60,30; set hidden3d; set pm3d\n"
                       f"splot '{name}' using 1:2:3 with pm3d notitle\n"
                       "set view map; unset surface; set contour base; set cntrparam levels 10\n"
                       f"splot '{name}' using 1:2:3 with lines notitle\n"
                       "set surface; unset contour; unset pm3d\n")
        out.append("unset multiplot\n")
    out.append("\nset output 'd0_decay.png'\nunset xrange; unset yrange\n"
               "set datafile separator ','\nset xlabel 'kappa'\nset ylabel 'D0'\n"
               "plot 'sweep.csv' using 1:4 with linespoints title 'D0', \\\n"
               "     'sweep.csv' using 1:5 with linespoints title 'kappa D0'\n")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("".join(out))
