import numpy as np
import pytest

from kep.core import CouplingIntegrals, SubsystemBasis, assemble, galerkin_check, kappa_pair, solve, synthesize
from kep.errors import DimensionMismatch, IndexOutOfRange
from kep.models import delta


def test_kappa_pair():
    assert kappa_pair(2.0) == pytest.approx(2.0)
    assert kappa_pair(3.0) == pytest.approx(1.5)


def test_identical_potentials_give_sum_energies():
    E1 = np.array([-1.0, -0.4, 0.3])
    E2 = E1.copy()  # V1 = V2 with kappa = 2: the bases coincide
    s1, s2 = SubsystemBasis(2.0, E1), SubsystemBasis(2.0, E2)
    ints = CouplingIntegrals(np.zeros((3, 3)), np.zeros((3, 3)), np.eye(3))
    asm = assemble(s1, s2, ints)
    for m in range(3):
        w = solve_sub(asm, [m, 3 + m])
        assert len(w) == 1
        assert abs(w[0] - (E1[m] + E2[m])) < 1e-12
    assert np.allclose(solve(asm).eigenvalues, E1 + E2, atol=1e-12)


def solve_sub(asm, idx):
    from kep.linalg import gen_eigen
    return gen_eigen(asm.H[np.ix_(idx, idx)], asm.S[np.ix_(idx, idx)]).eigenvalues


def test_delta_pencil_entries():
    p = delta.DeltaParams(0.2)
    d = delta.derived(p)
    s1, s2 = delta.subsystem_states(p)
    asm = assemble(s1, s2, delta.coupling(p))
    diag = 2 * d.E1 + d.delta_xi
    assert np.allclose(asm.H, [[diag, 2 * d.E1 * d.delta_eta], [2 * d.E1 * d.delta_eta, diag]], atol=1e-15)
    assert np.allclose(asm.S, [[1, d.delta_eta], [d.delta_eta, 1]], atol=1e-15)


def test_toy_unequal_kappa():
    rng = np.random.default_rng(5)
    E1, E2 = rng.standard_normal(2), rng.standard_normal(3)
    A = rng.standard_normal((2, 2))
    B = rng.standard_normal((3, 3))
    X = 0.3 * rng.standard_normal((2, 3))
    asm = assemble(SubsystemBasis(3.0, E1), SubsystemBasis(1.5, E2),
                   CouplingIntegrals(A + A.T, B + B.T, X))
    assert np.array_equal(asm.H, asm.H.T)
    assert np.allclose(asm.H[:2, 2:], (E1[:, None] + E2[None, :]) * X)
    assert np.allclose(np.diag(asm.H)[:2], 3.0 * E1 + np.diag(A + A.T))
    assert np.allclose(np.diag(asm.H)[2:], 1.5 * E2 + np.diag(B + B.T))
    assert np.allclose(asm.S[:2, :2], np.eye(2)) and np.allclose(asm.S[:2, 2:], X)


def test_bad_kappa_split():
    with pytest.raises(ValueError):
        assemble(SubsystemBasis(2.0, [0.0]), SubsystemBasis(3.0, [0.0]),
                 CouplingIntegrals([[0.0]], [[0.0]], [[0.0]]))
    with pytest.raises(ValueError):
        SubsystemBasis(1.0, [0.0])


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        CouplingIntegrals(np.zeros((2, 2)), np.zeros((3, 3)), np.zeros((3, 2)))
    with pytest.raises(DimensionMismatch):
        assemble(SubsystemBasis(2.0, [0.0, 1.0]), SubsystemBasis(2.0, [0.0]),
                 CouplingIntegrals([[0.0]], [[0.0]], [[0.0]]))


def test_asymmetric_block_rejected():
    with pytest.raises(ValueError):
        CouplingIntegrals([[0.0, 1.0], [0.0, 0.0]], [[0.0]], [[0.0], [0.0]])


def test_solution_index_checks():
    sol, s1, s2 = delta.solve_kep(delta.DeltaParams(0.2))
    with pytest.raises(IndexOutOfRange):
        sol.c1(2)
    with pytest.raises(IndexOutOfRange):
        sol.c2(-1)


def test_single_basis_reduces_to_rayleigh_ritz():
    k = 0.4
    ev = lambda x: (np.sqrt(k) * np.exp(-k * np.abs(x)))[None, ...]
    s1 = SubsystemBasis(2.0, [-0.08], ev)
    asm = assemble(s1, None, CouplingIntegrals([[0.0]], np.zeros((0, 0)), np.zeros((1, 0))))
    sol = solve(asm)
    assert sol.eigenvalues[0] == pytest.approx(2 * -0.08)
    x = np.linspace(-3, 3, 13)
    psi = synthesize(sol, 0, s1, None, x)
    assert np.allclose(np.abs(psi), ev(x)[0])


def test_synthesize_parity():
    sol, s1, s2 = delta.solve_kep(delta.DeltaParams(0.3, a=1.2))
    x = np.linspace(-6, 6, 241)
    psi = synthesize(sol, 0, s1, s2, x)
    assert np.all(np.isfinite(psi))
    assert np.max(np.abs(psi - psi[::-1])) < 1e-9


def test_galerkin_check_shapes():
    asm = assemble(*delta.subsystem_states(delta.DeltaParams(0.2)), delta.coupling(delta.DeltaParams(0.2)))
    assert galerkin_check(asm, asm.H, asm.S) == 0.0
    with pytest.raises(DimensionMismatch):
        galerkin_check(asm, np.eye(3), np.eye(3))
