"""Model-independent KEP machinery.

Two subsystems share the kinetic energy through mass ratios ``kappa_i``
(``1/kappa_1 + 1/kappa_2 = 1``). Their eigenfunctions form a non-orthogonal
union basis on which the full Hamiltonian becomes the pencil

    H[1m,1n] = kappa_1 E_1n delta_mn + <1m| V_2 - (kappa_1 - 1) V_1 |1n>
    H[2l,2k] = kappa_2 E_2k delta_lk + <2l| V_1 - (kappa_2 - 1) V_2 |2k>
    H[1m,2k] = (E_1m + E_2k) <1m|2k>

with unit overlap inside each block.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DimensionMismatch, IndexOutOfRange
from .linalg import DEFAULT_DEPENDENCE_THRESHOLD, GenEigResult, as_symmetric, gen_eigen

# evaluator(points) -> array with shape (size, *points.shape)
Evaluator = Callable[[np.ndarray], np.ndarray]

KAPPA_TOL = 1e-12


@dataclass(frozen=True)
class SubsystemBasis:
    kappa: float
    energies: np.ndarray
    evaluator: Optional[Evaluator] = field(default=None, compare=False)
    label: str = ""

    def __post_init__(self):
        energies = np.atleast_1d(np.asarray(self.energies, dtype=float))
        if energies.ndim != 1 or energies.size < 1:
            raise ValueError("a subsystem basis needs at least one function")
        if not np.all(np.isfinite(energies)):
            raise ValueError("subsystem energies must be finite")
        if not self.kappa > 1.0:
            raise ValueError(f"mass ratio must exceed 1, got {self.kappa}")
        object.__setattr__(self, "energies", energies)

    @property
    def size(self) -> int:
        return int(self.energies.size)

    def evaluate(self, points) -> np.ndarray:
        if self.evaluator is None:
            raise ValueError(f"subsystem {self.label!r} has no evaluator")
        return np.asarray(self.evaluator(np.asarray(points, dtype=float)))


def kappa_pair(kappa_1: float) -> float:
    """The partner ratio that completes the kinetic split."""
    return kappa_1 / (kappa_1 - 1.0)


def _as_block(m) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim < 2:
        n = int(round(np.sqrt(m.size)))
        m = m.reshape(n, n)
    return m


@dataclass(frozen=True)
class CouplingIntegrals:
    diag_block_1: np.ndarray
    diag_block_2: np.ndarray
    cross_overlap: np.ndarray

    def __post_init__(self):
        d1 = _as_block(self.diag_block_1)
        d2 = _as_block(self.diag_block_2)
        x = np.asarray(self.cross_overlap, dtype=float)
        if x.ndim < 2:
            x = x.reshape(d1.shape[0], d2.shape[0])
        for name, m in (("diag_block_1", d1), ("diag_block_2", d2)):
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise DimensionMismatch(f"{name} must be square, got {m.shape}")
            if m.size and np.max(np.abs(m - m.T)) > 1e-10 * max(1.0, np.max(np.abs(m))):
                raise ValueError(f"{name} is not symmetric")
        if x.shape != (d1.shape[0], d2.shape[0]):
            raise DimensionMismatch(f"cross_overlap is {x.shape}, expected {(d1.shape[0], d2.shape[0])}")
        object.__setattr__(self, "diag_block_1", d1)
        object.__setattr__(self, "diag_block_2", d2)
        object.__setattr__(self, "cross_overlap", x)


@dataclass(frozen=True)
class KepAssembly:
    H: np.ndarray
    S: np.ndarray
    block_map: tuple[slice, slice]

    @property
    def dim(self) -> int:
        return self.H.shape[0]


@dataclass(frozen=True)
class KepSolution:
    eigenvalues: np.ndarray
    coefficients: np.ndarray  # columns, union-basis layout
    retained_dim: int
    block_map: tuple[slice, slice]
    generalized: GenEigResult = field(repr=False, compare=False, default=None)

    def c1(self, state: int) -> np.ndarray:
        return self.coefficients[self.block_map[0], self._check(state)]

    def c2(self, state: int) -> np.ndarray:
        return self.coefficients[self.block_map[1], self._check(state)]

    def _check(self, state: int) -> int:
        if not 0 <= state < self.retained_dim:
            raise IndexOutOfRange(f"state {state} not in [0, {self.retained_dim})")
        return state


def assemble(sub1: SubsystemBasis, sub2: Optional[SubsystemBasis], ints: CouplingIntegrals) -> KepAssembly:
    """Build the union-basis pencil ``(H, S)``.

    ``sub2=None`` (with empty second blocks) degenerates to plain
    Rayleigh-Ritz in the first basis.
    """
    N = sub1.size
    K = 0 if sub2 is None else sub2.size
    if sub2 is not None and abs(1.0 / sub1.kappa + 1.0 / sub2.kappa - 1.0) > KAPPA_TOL:
        raise ValueError(f"mass ratios {sub1.kappa}, {sub2.kappa} do not split the kinetic energy")
    d1 = ints.diag_block_1
    if d1.shape != (N, N):
        raise DimensionMismatch(f"diag_block_1 is {d1.shape}, expected {(N, N)}")
    if K:
        if ints.diag_block_2.shape != (K, K) or ints.cross_overlap.shape != (N, K):
            raise DimensionMismatch("coupling blocks do not match the subsystem sizes")
    dim = N + K
    H = np.zeros((dim, dim))
    S = np.eye(dim)
    b1, b2 = slice(0, N), slice(N, dim)
    H[b1, b1] = np.diag(sub1.kappa * sub1.energies) + d1
    if K:
        X = ints.cross_overlap
        H[b2, b2] = np.diag(sub2.kappa * sub2.energies) + ints.diag_block_2
        C = (sub1.energies[:, None] + sub2.energies[None, :]) * X
        H[b1, b2] = C
        H[b2, b1] = C.T
        S[b1, b2] = X
        S[b2, b1] = X.T
    H = 0.5 * (H + H.T)
    return KepAssembly(H=H, S=S, block_map=(b1, b2))


def solve(assembly: KepAssembly, dependence_threshold: float = DEFAULT_DEPENDENCE_THRESHOLD) -> KepSolution:
    res = gen_eigen(assembly.H, assembly.S, dependence_threshold)
    return KepSolution(res.eigenvalues, res.coefficients, res.retained_dim, assembly.block_map, res)


def synthesize(solution: KepSolution, state_index: int, sub1: SubsystemBasis,
               sub2: Optional[SubsystemBasis], points) -> np.ndarray:
    """Sample ``psi = sum C_1n psi_1n + sum C_2k psi_2k`` at ``points``."""
    points = np.asarray(points, dtype=float)
    psi = np.tensordot(solution.c1(state_index), sub1.evaluate(points), axes=1)
    if sub2 is not None and solution.block_map[1].stop > solution.block_map[1].start:
        psi = psi + np.tensordot(solution.c2(state_index), sub2.evaluate(points), axes=1)
    return psi


def galerkin_check(assembly: KepAssembly, direct_H, direct_S) -> float:
    """Largest entrywise deviation between the assembled pencil and directly
    integrated ``<phi_i|T + V_1 + V_2|phi_j>``, ``<phi_i|phi_j>``."""
    direct_H = as_symmetric(direct_H)
    direct_S = as_symmetric(direct_S)
    if direct_H.shape != assembly.H.shape or direct_S.shape != assembly.S.shape:
        raise DimensionMismatch("direct matrices do not match the assembly")
    return float(max(np.max(np.abs(assembly.H - direct_H)), np.max(np.abs(assembly.S - direct_S))))
