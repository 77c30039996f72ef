"""Charged 2D harmonic oscillator in a uniform magnetic field (m = 0 sector).

The diamagnetic term ``mu omega_L^2 rho^2 / 2`` and the oscillator potential
``mu omega^2 rho^2 / 2`` compete; with ``mu* = 2 mu`` each one alone is an
oscillator with Laguerre-Gaussian eigenfunctions of its own width. Inputs
are ``(mu, omega, omega_L)`` only; the field strength and ``c`` enter through
``omega_L``. Radial inner products carry the ``2 pi rho d rho`` measure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..core import CouplingIntegrals, KepSolution, SubsystemBasis, assemble, solve, synthesize
from ..quadrature import confluent_M_poly, gauss_laguerre, integrate_radial, laguerre


@dataclass(frozen=True)
class MagOscParams:
    mu: float = 1.0
    omega: float = math.sqrt(2.0)
    omegaL: float = 2.0
    N: int = 5

    def __post_init__(self):
        if not (self.mu > 0 and self.omega > 0 and self.omegaL > 0):
            raise ValueError("mu, omega and omega_L must be positive")
        if int(self.N) != self.N or self.N < 1:
            raise ValueError("basis size N must be a positive integer")


@dataclass(frozen=True)
class MagOscDerived:
    mu_star: float
    omegaL_star: float
    omega_star: float
    b1: float
    b2: float
    Omega: float
    b: float


def derived(p: MagOscParams) -> MagOscDerived:
    mu_star = 2.0 * p.mu
    wl = p.omegaL / math.sqrt(2.0)
    w = p.omega / math.sqrt(2.0)
    Omega = math.hypot(p.omega, p.omegaL)
    return MagOscDerived(mu_star, wl, w, 1.0 / math.sqrt(mu_star * wl), 1.0 / math.sqrt(mu_star * w),
                         Omega, 1.0 / math.sqrt(p.mu * Omega))


def laguerre_gaussian(n: int, b: float, rho) -> np.ndarray:
    """``exp(-rho^2/2b^2) L_n(rho^2/b^2) / (b sqrt(pi))``."""
    rho = np.asarray(rho, dtype=float)
    u = rho * rho / (b * b)
    return np.exp(-0.5 * u) * laguerre(n, u) / (b * math.sqrt(math.pi))


def _evaluator(N: int, b: float):
    def ev(rho):
        return np.stack([laguerre_gaussian(n, b, rho) for n in range(N)])
    return ev


def subsystem_bases(p: MagOscParams) -> tuple[SubsystemBasis, SubsystemBasis]:
    d = derived(p)
    n = np.arange(p.N)
    return (SubsystemBasis(2.0, (2 * n + 1) * d.omegaL_star, _evaluator(p.N, d.b1), "diamagnetic"),
            SubsystemBasis(2.0, (2 * n + 1) * d.omega_star, _evaluator(p.N, d.b2), "oscillator"))


def rho2_matrix(N: int, b: float) -> np.ndarray:
    """``<m|rho^2|n>`` in the width-``b`` basis, from
    ``u L_n = (2n+1) L_n - (n+1) L_{n+1} - n L_{n-1}``."""
    M = np.diag(b * b * (2.0 * np.arange(N) + 1.0))
    for n in range(N - 1):
        M[n, n + 1] = M[n + 1, n] = -b * b * (n + 1)
    return M


def rho2_matrix_quadrature(N: int, b: float, order: int = 64) -> np.ndarray:
    """Same matrix by Gauss-Laguerre in ``u = rho^2/b^2``."""
    rule = gauss_laguerre(order)
    u = rule.nodes
    L = np.stack([laguerre(n, u) for n in range(N)])
    return b * b * np.einsum("k,ik,jk->ij", rule.weights * u, L, L)


def cross_overlap(N: int, b1: float, b2: float, order: int = 64) -> np.ndarray:
    """``<Psi_1m|Psi_2n>`` by Gauss-Laguerre after ``v = rho^2 (1/b1^2 + 1/b2^2)/2``."""
    c = 0.5 * (1.0 / b1 ** 2 + 1.0 / b2 ** 2)
    rule = gauss_laguerre(order)
    r2 = rule.nodes / c
    L1 = np.stack([laguerre(n, r2 / b1 ** 2) for n in range(N)])
    L2 = np.stack([laguerre(n, r2 / b2 ** 2) for n in range(N)])
    return np.einsum("k,ik,jk->ij", rule.weights, L1, L2) / (c * b1 * b2)


def coupling(p: MagOscParams, order: int = 64) -> CouplingIntegrals:
    d = derived(p)
    dV = 0.5 * p.mu * (p.omega ** 2 - p.omegaL ** 2)  # V2 - V1 = dV rho^2
    return CouplingIntegrals(dV * rho2_matrix(p.N, d.b1), -dV * rho2_matrix(p.N, d.b2),
                             cross_overlap(p.N, d.b1, d.b2, order))


def solve_kep(p: MagOscParams) -> tuple[KepSolution, SubsystemBasis, SubsystemBasis]:
    s1, s2 = subsystem_bases(p)
    return solve(assemble(s1, s2, coupling(p))), s1, s2


def exact_energy(p: MagOscParams, n: int, m: int = 0) -> float:
    return (2 * n + abs(m) + 1) * math.hypot(p.omega, p.omegaL) + m * p.omegaL


def exact_wavefunction(p: MagOscParams, n: int, m: int = 0):
    """Exact eigenfunction ``Psi_{n,m}(rho, phi)``; real-valued for ``m = 0``."""
    b = derived(p).b
    am = abs(m)
    Nc = math.factorial(n + am) / (math.pi * b * b * math.factorial(am) ** 2 * math.factorial(n))

    def psi(rho, phi=0.0):
        rho = np.asarray(rho, dtype=float)
        u = rho * rho / (b * b)
        radial = math.sqrt(Nc) * np.exp(-0.5 * u) * (rho / b) ** am * confluent_M_poly(n, am + 1.0, u)
        if m == 0:
            return radial
        return radial * np.exp(1j * m * np.asarray(phi))

    return psi


def radial_norm(f, scale: float, order: int = 64) -> float:
    """``int |f|^2 2 pi rho d rho`` with a Laguerre rule in ``rho^2/scale^2``."""
    # rho d rho = scale^2 du / 2
    return integrate_radial(lambda u: np.abs(f(scale * np.sqrt(u))) ** 2 * math.pi * scale ** 2, 1.0, order)


def kep_spectrum(p: MagOscParams) -> list[dict]:
    """Lowest ``N`` KEP levels against the exact m = 0 spectrum."""
    sol, s1, s2 = solve_kep(p)
    rows = []
    for n in range(min(p.N, sol.retained_dim)):
        ex = exact_energy(p, n)
        E = float(sol.eigenvalues[n])
        rows.append({"N": p.N, "n": n, "E_kep": E, "E_exact": ex, "rel_err": abs(E - ex) / ex,
                     "E1n": float(s1.energies[n]), "E2n": float(s2.energies[n])})
    return rows


def aligned_state(sol: KepSolution, n: int, s1, s2, rho) -> np.ndarray:
    """KEP state ``n`` on ``rho``, signed positive at the origin like the exact state."""
    psi = synthesize(sol, n, s1, s2, rho)
    at0 = synthesize(sol, n, s1, s2, np.zeros(1))[0]
    return -psi if at0 < 0 else psi


def wavefunctions_fig4(p: MagOscParams, n_max: int = 3, Ns=(1, 3, 5), rho=None) -> list[tuple]:
    """Long-format rows ``(N, n, rho, psi_kep, psi_exact)``; states a basis
    of size ``N`` cannot represent are skipped."""
    if rho is None:
        rho = np.linspace(0.0, 3.0, 61)
    rho = np.asarray(rho, dtype=float)
    rows = []
    for N in Ns:
        q = MagOscParams(p.mu, p.omega, p.omegaL, int(N))
        sol, s1, s2 = solve_kep(q)
        for n in range(min(n_max + 1, sol.retained_dim)):
            kep = aligned_state(sol, n, s1, s2, rho)
            ex = exact_wavefunction(q, n)(rho)
            rows.extend((int(N), n, float(r), float(k), float(e)) for r, k, e in zip(rho, kep, ex))
    return rows


def l2_distance(p: MagOscParams, n: int) -> float:
    """``|| Psi_kep - Psi_exact ||`` for state ``n`` with sign alignment."""
    sol, s1, s2 = solve_kep(p)
    ex = exact_wavefunction(p, n)
    scale = derived(p).b
    return math.sqrt(radial_norm(lambda r: aligned_state(sol, n, s1, s2, r) - ex(r), scale, 128))


def count_nodes(values, floor: float = 1e-8) -> int:
    v = np.asarray(values, dtype=float)
    v = v[np.abs(v) > floor * np.max(np.abs(v))]
    return int(np.sum(np.sign(v[1:]) != np.sign(v[:-1])))


def kinetic_action(n: int, b: float, mu: float, rho) -> np.ndarray:
    """``T Psi_n`` for the width-``b`` Laguerre-Gaussian with physical mass ``mu``.

    From the Laguerre ODE: ``T Psi_n = (4n + 2 - u) Psi_n / (2 mu b^2)``,
    ``u = rho^2/b^2``.
    """
    rho = np.asarray(rho, dtype=float)
    u = rho * rho / (b * b)
    return (4 * n + 2 - u) * laguerre_gaussian(n, b, rho) / (2.0 * mu * b * b)
