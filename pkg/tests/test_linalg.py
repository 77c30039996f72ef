import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import linalg as sla

from kep import linalg
from kep.errors import DegenerateOverlap, DimensionMismatch, NoConvergence, NotPositiveDefinite
from kep.linalg import as_symmetric, cholesky, gen_eigen, sym_eigen


def random_spd(rng, n, shift=0.5):
    M = rng.standard_normal((n, n))
    return M.T @ M + shift * np.eye(n)


def test_as_symmetric_lower_triangle_wins():
    A = np.array([[1.0, 99.0], [2.0, 3.0]])
    assert np.array_equal(as_symmetric(A), [[1.0, 2.0], [2.0, 3.0]])


@pytest.mark.parametrize("bad", [np.zeros((2, 3)), np.zeros((0, 0)), np.zeros(3)])
def test_as_symmetric_rejects_shapes(bad):
    with pytest.raises(DimensionMismatch):
        as_symmetric(bad)


def test_as_symmetric_rejects_nan():
    with pytest.raises(ValueError):
        as_symmetric([[1.0, np.nan], [np.nan, 1.0]])


def test_cholesky_identity_and_hand_case():
    assert np.allclose(cholesky(np.eye(3)), np.eye(3))
    assert np.allclose(cholesky([[4.0, 2.0], [2.0, 2.0]]), [[2.0, 0.0], [1.0, 1.0]], atol=1e-15)


def test_cholesky_random_rebuild():
    A = random_spd(np.random.default_rng(8), 8)
    L = cholesky(A)
    assert np.allclose(L, np.tril(L))
    assert np.max(np.abs(L @ L.T - A)) < 1e-12 * np.max(np.diag(A))


@pytest.mark.parametrize("S", [[[1.0, 1.0], [1.0, 1.0]], [[1.0, 2.0], [2.0, 1.0]], [[0.0, 0.0], [0.0, 1.0]]])
def test_cholesky_rejects_non_pd(S):
    with pytest.raises(NotPositiveDefinite):
        cholesky(S)


def test_sym_eigen_diagonal():
    w, V = sym_eigen(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(w, [1, 2, 3])
    assert np.allclose(np.abs(V), np.eye(3)[:, [1, 2, 0]])


def test_sym_eigen_swap_matrix():
    w, V = sym_eigen([[0.0, 1.0], [1.0, 0.0]])
    assert np.allclose(w, [-1.0, 1.0])
    s = 1 / np.sqrt(2)
    # largest-magnitude entry positive; a tie resolves to the first
    assert np.allclose(V[:, 0], [s, -s])
    assert np.allclose(V[:, 1], [s, s])


def test_sym_eigen_random_dim10():
    rng = np.random.default_rng(10)
    M = rng.standard_normal((10, 10))
    A = 0.5 * (M + M.T)
    w, V = sym_eigen(A)
    assert np.all(np.diff(w) >= 0)
    assert np.max(np.abs(A @ V - V * w)) < 1e-10 * np.max(np.abs(A))
    assert np.max(np.abs(V.T @ V - np.eye(10))) < 1e-10
    assert np.allclose(w, np.linalg.eigvalsh(A), atol=1e-12)


def test_sym_eigen_sign_convention():
    rng = np.random.default_rng(3)
    M = rng.standard_normal((6, 6))
    _, V = sym_eigen(M + M.T)
    idx = np.argmax(np.abs(V), axis=0)
    assert np.all(V[idx, np.arange(6)] > 0)


def test_sym_eigen_budget_exhausted(monkeypatch):
    monkeypatch.setattr(linalg, "JACOBI_SWEEPS", 1)
    rng = np.random.default_rng(0)
    M = rng.standard_normal((8, 8))
    with pytest.raises(NoConvergence):
        sym_eigen(M + M.T)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(0, 10_000))
def test_sym_eigen_property(n, seed):
    rng = np.random.default_rng(seed)
    M = rng.standard_normal((n, n)) * 10.0 ** rng.uniform(-3, 3)
    A = M + M.T
    w, V = sym_eigen(A)
    scale = max(np.max(np.abs(A)), 1e-300)
    assert np.max(np.abs(V @ np.diag(w) @ V.T - A)) < 1e-10 * scale
    assert np.max(np.abs(V.T @ V - np.eye(n))) < 1e-10


def test_gen_eigen_identity_overlap():
    r = gen_eigen(np.diag([1.0, 2.0]), np.eye(2))
    assert np.allclose(r.eigenvalues, [1, 2])
    assert r.method == "cholesky"


def test_gen_eigen_matches_scipy():
    rng = np.random.default_rng(1)
    M = rng.standard_normal((7, 7))
    H = M + M.T
    S = random_spd(rng, 7)
    r = gen_eigen(H, S)
    assert np.allclose(r.eigenvalues, sla.eigh(H, S, eigvals_only=True), atol=1e-11)
    assert np.max(np.abs(r.coefficients.T @ S @ r.coefficients - np.eye(7))) < 1e-9


def test_gen_eigen_duplicate_basis_function():
    rng = np.random.default_rng(2)
    B = rng.standard_normal((5, 4))
    B = np.column_stack([B, B[:, 0]])  # fifth function duplicates the first
    S = B.T @ B
    A = rng.standard_normal((5, 5))
    H = B.T @ (A + A.T) @ B
    r = gen_eigen(H, S)
    assert r.retained_dim == 4
    assert r.method == "canonical"
    assert np.all(np.isfinite(r.eigenvalues))
    assert np.max(r.residuals(H, S)) < 1e-9 * max(1.0, np.max(np.abs(H)))


def test_gen_eigen_all_dependent():
    with pytest.raises(DegenerateOverlap):
        gen_eigen(np.eye(2), np.zeros((2, 2)))


def test_gen_eigen_shape_mismatch():
    with pytest.raises(DimensionMismatch):
        gen_eigen(np.eye(2), np.eye(3))


def test_gen_eigen_two_state_closed_form():
    # delta-well pencil at lambda = 0.2: lower root 2E1 + xi/(1 + eta)
    E1, xi, eta = -0.04, 0.08 * (1 - np.exp(-1.6)), 1.8 * np.exp(-0.8)
    H = [[2 * E1 + xi, 2 * E1 * eta], [2 * E1 * eta, 2 * E1 + xi]]
    S = [[1.0, eta], [eta, 1.0]]
    assert abs(gen_eigen(H, S).eigenvalues[0] - (2 * E1 + xi / (1 + eta))) < 1e-12


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000))
def test_gen_eigen_2x2_quadratic_formula(seed):
    rng = np.random.default_rng(seed)
    h = rng.standard_normal(3)
    H = np.array([[h[0], h[1]], [h[1], h[2]]])
    s = rng.uniform(-0.95, 0.95)
    S = np.array([[1.0, s], [s, 1.0]])
    # det(H - E S) = a E^2 + b E + c
    a = 1 - s * s
    b = -(H[0, 0] + H[1, 1]) + 2 * H[0, 1] * s
    c = H[0, 0] * H[1, 1] - H[0, 1] ** 2
    disc = np.sqrt(b * b - 4 * a * c)
    lo = (-b - disc) / (2 * a)
    hi = (-b + disc) / (2 * a)
    E = gen_eigen(H, S).eigenvalues
    assert abs(E[0] - lo) < 1e-12 * max(1, abs(lo)) / a
    assert abs(E[1] - hi) < 1e-12 * max(1, abs(hi)) / a


def test_nested_basis_monotone():
    rng = np.random.default_rng(4)
    M = rng.standard_normal((8, 8))
    H = M + M.T
    S = random_spd(rng, 8)
    lows = [gen_eigen(H[:k, :k], S[:k, :k]).eigenvalues[0] for k in range(1, 9)]
    assert np.all(np.diff(lows) <= 1e-10)
