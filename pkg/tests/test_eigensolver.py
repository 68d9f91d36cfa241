import numpy as np
import pytest

from hartree2d.assembly import HamiltonianOperator, shift_of
from hartree2d.eigensolver import ConvergenceError, power_iterate, residual
from hartree2d.grid import LatticeSpec
from hartree2d.potentials import HarmonicPotential

from oracles import dense_ground_state, dense_hamiltonian


class DenseOperator:
    """Minimal stand-in exposing the operator interface used by the power method."""

    def __init__(self, a):
        self.a = np.asarray(a, dtype=float)

    def apply(self, z):
        return self.a @ z

    def l1_norm(self):
        return float(np.abs(self.a).sum())

    def row_norm(self):
        return float(np.abs(self.a).sum(axis=1).max())


def test_two_by_two_shift():
    assert shift_of(DenseOperator([[2, -1], [-1, 2]])) == 7.0


def test_two_by_two_ground_state():
    H = DenseOperator(np.diag([2.0, 4.0]))
    res = power_iterate(H, np.array([1.0, 1.0]) / np.sqrt(2), tol=1e-13)
    assert res.shift == 7.0
    np.testing.assert_allclose(res.ground_vector, [1.0, 0.0], atol=1e-12)
    assert res.energy == pytest.approx(2.0, rel=1e-13)
    assert -2 * res.shift < res.shifted_energy < 0


def test_eigenvector_start_stops_after_one_step(rng):
    a = rng.standard_normal((6, 6))
    a = a + a.T + 12 * np.eye(6)
    w, v = np.linalg.eigh(a)
    res = power_iterate(DenseOperator(a), v[:, 0], tol=1e-12)
    assert res.iterations == 1
    assert res.final_residual < 1e-14


def _trap_operator(m, c=1e3):
    lat = LatticeSpec(1.0, m)
    trap = HarmonicPotential((0.5, 0.5), c)
    x, y = lat.coordinates()
    return HamiltonianOperator(lat, trap(x, y)), dense_hamiltonian(
        m, trap, 0.0, 0.0, np.zeros(lat.interior_count), np.zeros(lat.interior_count),
        lambda x, y: 0.0 * x)


@pytest.mark.parametrize("norm", ["l1", "row"])
def test_linear_trap_matches_dense_eigensolver(norm):
    H, dense = _trap_operator(8)
    e0, g0 = dense_ground_state(dense)
    res = power_iterate(H, np.ones(H.size), tol=1e-12, shift_norm=norm)
    assert np.linalg.norm(res.ground_vector - g0) < 1e-6
    assert res.energy == pytest.approx(e0, rel=1e-10)
    assert np.all(res.ground_vector >= -1e-10)


def test_energy_is_rayleigh_quotient():
    H, _ = _trap_operator(10)
    res = power_iterate(H, np.ones(H.size), shift_norm="row")
    z = res.ground_vector
    assert res.energy == pytest.approx(z @ H.apply(z), rel=1e-12)
    assert np.linalg.norm(z) == pytest.approx(1.0, abs=1e-14)
    assert res.final_residual <= 1e-10


def test_rayleigh_quotient_magnitude_nondecreasing(rng):
    H, _ = _trap_operator(8)
    trace = []
    power_iterate(H, rng.random(H.size), tol=1e-11, shift_norm="row", trace=trace)
    sq = np.square(trace)
    assert np.all(np.diff(sq) >= -1e-12 * sq[1:])


def test_residual_exact_eigenpair():
    a = np.diag([1.0, 3.0, 5.0])
    z = np.array([0.0, 1.0, 0.0])
    assert residual(DenseOperator(a), z, 3.0 - 10.0, 10.0) == 0.0


def test_residual_independent_of_shift(rng):
    a = rng.standard_normal((5, 5))
    a = a + a.T
    z = rng.standard_normal(5)
    z /= np.linalg.norm(z)
    H = DenseOperator(a)
    e = z @ a @ z
    s = shift_of(H)
    r1 = residual(H, z, e - s, s)
    r2 = residual(H, z, e - s - 10.0, s + 10.0)
    assert r1 == pytest.approx(r2, rel=1e-12)
    shifted = a - s * np.eye(5)
    direct = np.linalg.norm(shifted @ z - (e - s) * z) / abs(e)
    assert r1 == pytest.approx(direct, rel=1e-10)


def test_residual_two_level_mixture():
    # z = (1, 1)/sqrt2 on diag(1, 2): Rayleigh quotient 3/2, |(H - 3/2) z| = 1/2
    z = np.array([1.0, 1.0]) / np.sqrt(2)
    assert residual(DenseOperator(np.diag([1.0, 2.0])), z, 1.5 - 4.0, 4.0) == pytest.approx(1 / 3)


def test_residual_degenerate_denominator():
    with pytest.raises(ZeroDivisionError):
        residual(DenseOperator(np.eye(2)), np.array([1.0, 0.0]), -4.0, 4.0)


def test_nonconvergence_reports_residual():
    H, _ = _trap_operator(8)
    with pytest.raises(ConvergenceError) as info:
        power_iterate(H, np.ones(H.size), tol=1e-12, max_iter=3)
    assert info.value.iterations == 3
    assert info.value.residual > 1e-12


def test_zero_start_rejected():
    with pytest.raises(ValueError):
        power_iterate(DenseOperator(np.eye(3)), np.zeros(3))
