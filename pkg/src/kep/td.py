"""Time-dependent KEP in the phased union basis.

Every basis function evolves under its own subsystem Hamiltonian,
``psi_j(t) = psi_j exp(-i E_j t)``. Projecting ``i dPhi/dt = H Phi`` onto
that basis gives

    i S(t) dc/dt = M(t) c,   S(t) = S o P,   M(t) = (H - S diag(E)) o P,

with ``P_ij = exp(i (E_i - E_j) t)`` (``o`` is the entrywise product).
Because ``P`` is a rank-one phase pattern the generator factorizes as
``S(t)^-1 M(t) = F (S^-1 H - diag(E)) F^*`` with ``F = diag(exp(i E t))``,
so only one static solve is needed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import KepAssembly, SubsystemBasis, assemble
from .errors import DimensionMismatch, SingularOverlap
from .linalg import as_symmetric, gen_eigen, sym_eigen
from .models.delta import DeltaParams, coupling, subsystem_states

STEPS_PER_PERIOD = 200
SINGULAR_RCOND = 1e-12


@dataclass(frozen=True)
class TdState:
    time: float
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a non-empty vector")
        object.__setattr__(self, "coeffs", c)


class TdSystem:
    """Static pencil plus the phase energies of every union-basis function."""

    def __init__(self, H, S, energies, block_map=None):
        self.H = as_symmetric(H)
        self.S = as_symmetric(S)
        self.energies = np.asarray(energies, dtype=float).ravel()
        n = self.H.shape[0]
        if self.S.shape != (n, n) or self.energies.size != n:
            raise DimensionMismatch("H, S and energies disagree in size")
        self.block_map = block_map if block_map is not None else (slice(0, n), slice(n, n))
        s = sym_eigen(self.S)[0]
        if not s[0] > SINGULAR_RCOND * s[-1]:
            raise SingularOverlap(f"overlap condition {s[0] / s[-1]:.2e} too small to propagate")
        self._A = np.linalg.solve(self.S, self.H) - np.diag(self.energies)
        self.levels = gen_eigen(self.H, self.S)
        E = self.levels.eigenvalues
        self.delta_E_max = float((E[-1] - E[0]) + np.ptp(self.energies))
        # rotating-frame energy that centres the coefficient frequencies
        self.gauge = float(0.5 * (E[-1] + E[0]) - 0.5 * (self.energies.max() + self.energies.min()))

    @classmethod
    def from_assembly(cls, asm: KepAssembly, sub1: SubsystemBasis, sub2: Optional[SubsystemBasis]):
        energies = sub1.energies if sub2 is None else np.concatenate([sub1.energies, sub2.energies])
        return cls(asm.H, asm.S, energies, asm.block_map)

    @property
    def dim(self) -> int:
        return self.H.shape[0]

    @property
    def period(self) -> float:
        if self.delta_E_max <= 0:
            return math.inf
        return 2.0 * math.pi / self.delta_E_max

    def default_dt(self) -> float:
        if not math.isfinite(self.period):
            return 1.0 / STEPS_PER_PERIOD
        return self.period / STEPS_PER_PERIOD

    def phases(self, t: float) -> np.ndarray:
        return np.exp(1j * self.energies * t)

    def generator(self, t: float) -> np.ndarray:
        """``S(t)^-1 M(t)``."""
        f = self.phases(t)
        return f[:, None] * self._A * f.conj()[None, :]


def ode_matrices(sys: TdSystem, t: float) -> tuple[np.ndarray, np.ndarray]:
    """``(S(t), M(t))`` of the coefficient equation ``i S dc/dt = M c``."""
    f = sys.phases(t)
    P = f[:, None] * f.conj()[None, :]
    return sys.S * P, (sys.H - sys.S * sys.energies[None, :]) * P


def _rhs(sys: TdSystem, t: float, c: np.ndarray) -> np.ndarray:
    # rotating frame c~ = exp(i gauge t) c
    return -1j * (sys.generator(t) @ c - sys.gauge * c)


def rk4_step(sys: TdSystem, state: TdState, dt: float) -> TdState:
    """One classical Runge-Kutta step of the coefficient equation."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    t = state.time
    c = state.coeffs * np.exp(1j * sys.gauge * t)
    k1 = _rhs(sys, t, c)
    k2 = _rhs(sys, t + 0.5 * dt, c + 0.5 * dt * k1)
    k3 = _rhs(sys, t + 0.5 * dt, c + 0.5 * dt * k2)
    k4 = _rhs(sys, t + dt, c + dt * k3)
    c = c + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return TdState(t + dt, c * np.exp(-1j * sys.gauge * (t + dt)))


def norm(sys: TdSystem, state: TdState) -> float:
    S, _ = ode_matrices(sys, state.time)
    c = state.coeffs
    return float(np.real(np.vdot(c, S @ c)))


def populations(sys: TdSystem, state: TdState) -> np.ndarray:
    """Mulliken populations ``Re(conj(c_i) (S(t) c)_i)``; they sum to the norm."""
    S, _ = ode_matrices(sys, state.time)
    c = state.coeffs
    return np.real(c.conj() * (S @ c))


def energy(sys: TdSystem, state: TdState) -> float:
    f = sys.phases(state.time)
    Ht = sys.H * (f[:, None] * f.conj()[None, :])
    c = state.coeffs
    return float(np.real(np.vdot(c, Ht @ c))) / norm(sys, state)


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    norm: np.ndarray
    populations: np.ndarray  # (n_t, dim)
    energy: np.ndarray
    coeffs: np.ndarray  # (n_t, dim)

    def rows(self) -> list[tuple]:
        return [(float(t), float(n), *map(float, p), float(e))
                for t, n, p, e in zip(self.t, self.norm, self.populations, self.energy)]


def _record(sys, states) -> Trajectory:
    return Trajectory(
        t=np.array([s.time for s in states]),
        norm=np.array([norm(sys, s) for s in states]),
        populations=np.array([populations(sys, s) for s in states]),
        energy=np.array([energy(sys, s) for s in states]),
        coeffs=np.array([s.coeffs for s in states]),
    )


def _grid(t_final: float, dt: float) -> tuple[int, float]:
    if t_final < 0:
        raise ValueError("t_final must be non-negative")
    if not dt > 0:
        raise ValueError("dt must be positive")
    if t_final == 0:
        return 0, dt
    n = max(1, int(math.ceil(t_final / dt - 1e-9)))
    return n, t_final / n


def propagate(sys: TdSystem, state0: TdState, t_final: float, dt: Optional[float] = None,
              sample_every: int = 1) -> Trajectory:
    """RK4 from ``state0.time`` to ``state0.time + t_final``.

    ``dt`` defaults to 1/200 of the fastest coefficient period and is shrunk
    slightly so the steps land on ``t_final``.
    """
    if state0.coeffs.size != sys.dim:
        raise DimensionMismatch("initial state does not match the system")
    n, h = _grid(t_final, sys.default_dt() if dt is None else dt)
    states = [state0]
    s = state0
    for i in range(1, n + 1):
        s = rk4_step(sys, s, h)
        if i % sample_every == 0 or i == n:
            states.append(s)
    return _record(sys, states)


def reference_propagation(sys: TdSystem, state0: TdState, times) -> Trajectory:
    """Exact evolution through the static pencil's eigenvectors."""
    res = sys.levels
    D, E = res.coefficients, res.eigenvalues
    t0 = state0.time
    b0 = state0.coeffs * np.exp(-1j * sys.energies * t0)  # static-basis amplitudes
    amp = D.T @ (sys.S @ b0)
    if res.retained_dim < sys.dim:
        raise SingularOverlap("reference propagation needs a full-rank overlap")
    states = []
    for t in np.asarray(times, dtype=float):
        b = D @ (amp * np.exp(-1j * E * (t - t0)))
        states.append(TdState(float(t), b * np.exp(1j * sys.energies * t)))
    return _record(sys, states)


def measured_order(sys: TdSystem, state0: TdState, t_final: float, dt: float) -> float:
    """Convergence rate from the final-coefficient error at ``dt`` and ``dt/2``."""
    ref = reference_propagation(sys, state0, [state0.time + t_final]).coeffs[-1]
    e1 = np.max(np.abs(propagate(sys, state0, t_final, dt).coeffs[-1] - ref))
    e2 = np.max(np.abs(propagate(sys, state0, t_final, dt / 2).coeffs[-1] - ref))
    return math.log2(e1 / e2)


def delta_well_system(lam: float = 1.0, a: float = 1.0) -> TdSystem:
    """Two-state system from the double delta well."""
    p = DeltaParams(lam, a)
    s1, s2 = subsystem_states(p)
    return TdSystem.from_assembly(assemble(s1, s2, coupling(p)), s1, s2)
