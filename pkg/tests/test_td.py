import numpy as np
import pytest

from kep import td
from kep.errors import DimensionMismatch, SingularOverlap
from kep.td import TdState, TdSystem

import oracles


@pytest.fixture(scope="module")
def sys():
    return td.delta_well_system(1.0, 1.0)


def random_system(seed=0, n=4):
    rng = np.random.default_rng(seed)
    M = rng.standard_normal((n, n))
    S = np.eye(n) + 0.3 * (M + M.T) / n
    A = rng.standard_normal((n, n))
    return TdSystem(A + A.T, S, rng.standard_normal(n))


def test_t0_matrices(sys):
    S, M = td.ode_matrices(sys, 0.0)
    assert np.allclose(S, sys.S) and np.allclose(M, sys.H - sys.S @ np.diag(sys.energies))


def test_single_basis_function():
    one = TdSystem([[0.7]], [[1.0]], [0.7])
    _, M = td.ode_matrices(one, 3.0)
    assert np.allclose(M, 0)
    tr = td.propagate(one, TdState(0.0, [1.0]), 10.0, dt=0.1)
    assert np.all(np.abs(np.abs(tr.coeffs) - 1) == 0)


def test_generator_factorization():
    s = random_system(1)
    for t in (0.3, 2.7):
        S, M = td.ode_matrices(s, t)
        assert np.max(np.abs(np.linalg.solve(S, M) - s.generator(t))) < 1e-10


def test_m_antihermitian_part_is_overlap_rate():
    s = random_system(2)
    rng = np.random.default_rng(3)
    h = 1e-5
    for t in rng.uniform(0, 10, 4):
        _, M = td.ode_matrices(s, t)
        dS = (td.ode_matrices(s, t + h)[0] - td.ode_matrices(s, t - h)[0]) / (2 * h)
        assert np.max(np.abs((M - M.conj().T) - (-1j * dS))) < 1e-8


def test_period_and_gauge(sys):
    E = sys.levels.eigenvalues
    assert sys.delta_E_max == pytest.approx(E[-1] - E[0] + np.ptp(sys.energies))
    assert sys.default_dt() == pytest.approx(sys.period / 200)


def test_singular_overlap():
    with pytest.raises(SingularOverlap):
        TdSystem(np.eye(2), [[1.0, 1.0], [1.0, 1.0]], [0.0, 0.0])
    with pytest.raises(DimensionMismatch):
        TdSystem(np.eye(2), np.eye(2), [0.0])


def test_zero_duration(sys):
    s0 = TdState(0.0, [1.0, 0.0])
    tr = td.propagate(sys, s0, 0.0)
    assert len(tr.t) == 1 and np.array_equal(tr.coeffs[0], s0.coeffs)
    with pytest.raises(ValueError):
        td.propagate(sys, s0, -1.0)
    with pytest.raises(DimensionMismatch):
        td.propagate(sys, TdState(0.0, [1.0]), 1.0)


def test_step_keeps_layout(sys):
    s = td.rk4_step(sys, TdState(0.0, [1.0, 0.0]), 0.01)
    assert s.coeffs.shape == (2,) and s.time == pytest.approx(0.01)
    with pytest.raises(ValueError):
        td.rk4_step(sys, s, 0.0)


def test_eigenstate_is_stationary(sys):
    c0 = sys.levels.coefficients[:, 0]
    tr = td.propagate(sys, TdState(0.0, c0), 3 * sys.period)
    assert np.ptp(tr.populations, axis=0).max() < 1e-8
    assert np.allclose(tr.energy, sys.levels.eigenvalues[0], atol=1e-10)


def test_populations_sum_to_norm(sys):
    tr = td.propagate(sys, TdState(0.0, [1.0, 0.0]), sys.period, sample_every=20)
    assert np.allclose(tr.populations.sum(axis=1), tr.norm, atol=1e-14)
    assert np.all(tr.norm == pytest.approx(1.0, abs=1e-9))


def test_against_expm_oracle():
    s = random_system(4, 3)
    c0 = np.array([1.0, 0.2, -0.1], dtype=complex)
    tr = td.propagate(s, TdState(0.0, c0), 6.0, dt=0.002, sample_every=500)
    ref = oracles.expm_propagation(s.H, s.S, s.energies, c0, tr.t)
    assert np.max(np.abs(tr.coeffs - ref)) < 1e-7
    own = td.reference_propagation(s, TdState(0.0, c0), tr.t)
    assert np.max(np.abs(own.coeffs - ref)) < 1e-10


def test_reference_respects_start_time(sys):
    s0 = TdState(1.3, [0.8, 0.6])
    tr = td.reference_propagation(sys, s0, [1.3])
    assert np.allclose(tr.coeffs[0], s0.coeffs)


def test_order_of_accuracy(sys):
    s0 = TdState(0.0, [1.0, 0.0])
    order = td.measured_order(sys, s0, 2 * sys.period, sys.period / 20)
    assert 3.7 <= order <= 4.3
    # norm defect of an RK4 step on a unitary flow is fifth order per step
    d1 = abs(td.propagate(sys, s0, sys.period, sys.period / 20).norm[-1] - 1)
    d2 = abs(td.propagate(sys, s0, sys.period, sys.period / 40).norm[-1] - 1)
    assert d1 / d2 > 12
