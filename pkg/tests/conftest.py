import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hartree2d import HarmonicPotential, HartreeSystem, LatticeSpec, YukawaPotential  # noqa: E402

PAPER_TRAPS = (1e5, 1e3)
SCREENING, REGULARIZATION = 1e2, 1e-1


def paper_system(m, convolution="fast", D=1.0):
    return HartreeSystem(
        LatticeSpec(D, m),
        HarmonicPotential((D / 2, D / 2), PAPER_TRAPS[0]),
        HarmonicPotential((D / 2, D / 2), PAPER_TRAPS[1]),
        YukawaPotential(SCREENING, REGULARIZATION),
        convolution=convolution,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record a named pass/fail line, then assert."""

    def check(tag, ok, detail):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {tag}: {detail}")
        assert ok, f"{tag}: {detail}"

    return check


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
