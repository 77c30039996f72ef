"""Dense real symmetric linear algebra.

Small, dependency-free kernels sized for the union bases used here (dim up to
~100): a Cholesky factorization, a cyclic Jacobi eigensolver and the
generalized pencil ``H c = E S c`` with canonical orthogonalization for
nearly dependent bases.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateOverlap, DimensionMismatch, NoConvergence, NotPositiveDefinite

JACOBI_SWEEPS = 64
JACOBI_TOL = 1e-14
PIVOT_TOL = 1e-14
DEFAULT_DEPENDENCE_THRESHOLD = 1e-10
# S is "comfortably conditioned" above this min/max eigenvalue ratio
CHOLESKY_RCOND = 1e-8


def as_symmetric(A) -> np.ndarray:
    """Return a float copy of ``A`` whose lower triangle is authoritative."""
    A = np.array(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise DimensionMismatch(f"expected a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    L = np.tril(A)
    return L + np.tril(A, -1).T


def cholesky(S) -> np.ndarray:
    """Lower-triangular ``L`` with ``L @ L.T == S``.

    Raises :class:`NotPositiveDefinite` when a pivot drops below
    ``1e-14 * max(diag(S))``, which for an overlap matrix means the basis is
    (numerically) linearly dependent.
    """
    A = as_symmetric(S)
    n = A.shape[0]
    scale = max(float(np.max(np.diag(A))), 0.0)
    L = np.zeros_like(A)
    for j in range(n):
        d = A[j, j] - L[j, :j] @ L[j, :j]
        if not d > PIVOT_TOL * scale:
            raise NotPositiveDefinite(f"pivot {j} = {d:.3e} is not positive")
        L[j, j] = np.sqrt(d)
        L[j + 1:, j] = (A[j + 1:, j] - L[j + 1:, :j] @ L[j, :j]) / L[j, j]
    return L


def _forward_solve(L: np.ndarray, B: np.ndarray) -> np.ndarray:
    X = np.array(B, dtype=float)
    for i in range(L.shape[0]):
        X[i] = (X[i] - L[i, :i] @ X[:i]) / L[i, i]
    return X


def _back_solve_transposed(L: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Solve ``L.T @ X = B``."""
    X = np.array(B, dtype=float)
    for i in range(L.shape[0] - 1, -1, -1):
        X[i] = (X[i] - L[i + 1:, i] @ X[i + 1:]) / L[i, i]
    return X


def _fix_signs(V: np.ndarray) -> np.ndarray:
    # largest-magnitude component of each column made positive
    if V.size == 0:
        return V
    idx = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[idx, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return V * signs


def sym_eigen(A) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Returns ascending eigenvalues and the orthonormal eigenvectors as columns,
    each column signed so its largest-magnitude entry is positive.
    """
    A = as_symmetric(A)
    n = A.shape[0]
    V = np.eye(n)
    norm = np.linalg.norm(A)
    if norm == 0.0 or n == 1:
        return np.diag(A).copy(), V

    mask = ~np.eye(n, dtype=bool)

    def off(M):
        return np.sqrt(np.sum(M[mask] ** 2))

    converged = False
    for sweep in range(JACOBI_SWEEPS):
        if off(A) < JACOBI_TOL * norm:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                app, aqq = A[p, p], A[q, q]
                # element already below rounding of both diagonals
                if sweep > 3 and abs(app) + 100 * abs(apq) == abs(app) and abs(aqq) + 100 * abs(apq) == abs(aqq):
                    A[p, q] = A[q, p] = 0.0
                    continue
                theta = (aqq - app) / (2.0 * apq)
                if theta == 0.0:
                    t = 1.0
                elif abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                Ap, Aq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * Ap - s * Aq
                A[:, q] = s * Ap + c * Aq
                Ap, Aq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * Ap - s * Aq
                A[q, :] = s * Ap + c * Aq
                A[p, q] = A[q, p] = 0.0
                Vp, Vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * Vp - s * Vq
                V[:, q] = s * Vp + c * Vq
    if not converged and off(A) >= JACOBI_TOL * norm:
        raise NoConvergence(f"Jacobi did not converge in {JACOBI_SWEEPS} sweeps")
    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    return w[order], _fix_signs(V[:, order])


@dataclass(frozen=True)
class GenEigResult:
    """Solution of ``H c = E S c``.

    ``coefficients[:, i]`` is the S-normalized vector of ``eigenvalues[i]``.
    """

    eigenvalues: np.ndarray
    coefficients: np.ndarray
    retained_dim: int
    method: str  # "cholesky" or "canonical"

    def residuals(self, H, S) -> np.ndarray:
        H = as_symmetric(H)
        S = as_symmetric(S)
        R = H @ self.coefficients - (S @ self.coefficients) * self.eigenvalues
        return np.max(np.abs(R), axis=0)


def gen_eigen(H, S, dependence_threshold: float = DEFAULT_DEPENDENCE_THRESHOLD) -> GenEigResult:
    """Solve the symmetric-definite pencil ``H c = E S c``.

    Overlap eigenvalues below ``dependence_threshold * max(eig(S))`` are
    dropped by canonical orthogonalization; ``retained_dim`` reports how many
    directions survive. Well-conditioned overlaps go through Cholesky.
    """
    H = as_symmetric(H)
    S = as_symmetric(S)
    if H.shape != S.shape:
        raise DimensionMismatch(f"H is {H.shape} but S is {S.shape}")
    s, U = sym_eigen(S)
    smax = s[-1]
    if not smax > 0:
        raise DegenerateOverlap("overlap matrix has no positive eigenvalues")
    keep = s > dependence_threshold * smax
    if not np.any(keep):
        raise DegenerateOverlap("all overlap eigenvalues fall below the dependence threshold")

    method = "canonical"
    C = None
    if np.all(keep) and s[0] > CHOLESKY_RCOND * smax:
        try:
            L = cholesky(S)
        except NotPositiveDefinite:
            pass
        else:
            Linv_H = _forward_solve(L, H)
            A = _forward_solve(L, Linv_H.T)  # L^-1 H L^-T
            E, Y = sym_eigen(A)
            C = _back_solve_transposed(L, Y)
            method = "cholesky"
    if C is None:
        X = U[:, keep] / np.sqrt(s[keep])
        E, Y = sym_eigen(X.T @ H @ X)
        C = X @ Y

    # renormalize against rounding, then fix signs
    norms = np.sqrt(np.einsum("ij,ik,kj->j", C, S, C))
    C = _fix_signs(C / norms)
    return GenEigResult(eigenvalues=E, coefficients=C, retained_dim=int(C.shape[1]), method=method)
