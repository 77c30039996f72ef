"""Particle in two attractive delta wells at ``x = +-a``.

Each well alone binds one state; with the mass doubled (``m* = 2m``) those
states form a two-function union basis. All delta-function matrix elements
use the sifting property; nothing here is integrated numerically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..core import CouplingIntegrals, KepSolution, SubsystemBasis, assemble, solve, synthesize
from ..errors import RootBracketFailure

ROOT_TOL = 1e-13


@dataclass(frozen=True)
class DeltaParams:
    lam: float
    a: float = 1.0
    m: float = 1.0

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("well depth must be positive")
        if not self.m > 0:
            raise ValueError("mass must be positive")
        if not self.a >= 0:
            raise ValueError("half-separation must be non-negative")


@dataclass(frozen=True)
class DeltaDerived:
    k: float
    E1: float
    delta_xi: float
    delta_eta: float
    beta: float


def derived(p: DeltaParams) -> DeltaDerived:
    mstar = 2.0 * p.m
    k = mstar * p.lam
    E1 = -mstar * p.lam ** 2 / 2.0
    xi = p.lam * k * (1.0 - math.exp(-4.0 * k * p.a))
    eta = math.exp(-2.0 * k * p.a) * (2.0 * k * p.a + 1.0)
    beta = 2.0 * p.a * p.m * p.lam
    return DeltaDerived(k=k, E1=E1, delta_xi=xi, delta_eta=eta, beta=beta)


def _well_state(k: float, center: float) -> Callable[[np.ndarray], np.ndarray]:
    def psi(x):
        x = np.asarray(x, dtype=float)
        return (math.sqrt(k) * np.exp(-k * np.abs(x - center)))[None, ...]
    return psi


def subsystem_states(p: DeltaParams) -> tuple[SubsystemBasis, SubsystemBasis]:
    d = derived(p)
    return (SubsystemBasis(2.0, [d.E1], _well_state(d.k, p.a), "well at +a"),
            SubsystemBasis(2.0, [d.E1], _well_state(d.k, -p.a), "well at -a"))


def coupling(p: DeltaParams) -> CouplingIntegrals:
    d = derived(p)
    return CouplingIntegrals([[d.delta_xi]], [[d.delta_xi]], [[d.delta_eta]])


def coupling_by_sifting(p: DeltaParams) -> tuple[float, float]:
    """``<psi_1|V_2|psi_1>`` and ``<psi_1|V_1|psi_1>`` from point values."""
    psi1 = _well_state(derived(p).k, p.a)
    return (-p.lam * float(psi1(-p.a)[0]) ** 2, -p.lam * float(psi1(p.a)[0]) ** 2)


def solve_kep(p: DeltaParams) -> tuple[KepSolution, SubsystemBasis, SubsystemBasis]:
    s1, s2 = subsystem_states(p)
    return solve(assemble(s1, s2, coupling(p))), s1, s2


@dataclass(frozen=True)
class TwoStateResult:
    E: float
    K: float
    bound: bool


def kep_two_state(p: DeltaParams) -> TwoStateResult:
    """Closed-form lower root ``E = 2E_1 + xi/(1 + eta)``.

    An unbound result (``E >= 0``) is reported with ``bound=False`` and
    ``K = nan`` rather than raised.
    """
    d = derived(p)
    E = 2.0 * d.E1 + d.delta_xi / (1.0 + d.delta_eta)
    if E >= 0:
        return TwoStateResult(E, math.nan, False)
    return TwoStateResult(E, math.sqrt(-2.0 * p.m * E), True)


def solve_gamma(beta: float) -> float:
    """Root of ``gamma (1 + tanh gamma) = beta`` by safeguarded Newton."""
    if not beta > 0:
        raise RootBracketFailure("beta must be positive")

    def f(g):
        return g * (1.0 + math.tanh(g)) - beta

    lo, hi = 0.0, beta
    if not (f(lo) < 0 < f(hi) or f(hi) == 0):
        raise RootBracketFailure(f"no sign change on [0, {beta}]")
    g = 0.5 * beta
    for _ in range(200):
        fg = f(g)
        if abs(fg) < ROOT_TOL:
            return g
        if fg < 0:
            lo = g
        else:
            hi = g
        t = math.tanh(g)
        dg = 1.0 + t + g * (1.0 - t * t)
        step = g - fg / dg
        g = step if lo < step < hi else 0.5 * (lo + hi)
        if hi - lo < 1e-16 * max(1.0, hi):
            return g
    return g


@dataclass(frozen=True)
class ExactState:
    E: float
    K: float
    gamma: float
    wavefunction: Callable[[np.ndarray], np.ndarray]


def exact_reference(p: DeltaParams) -> ExactState:
    """Even bound state of the double well."""
    if p.a == 0:
        K = 2.0 * p.m * p.lam  # single well of depth 2 lambda
        return ExactState(-K * K / (2.0 * p.m), K, 0.0,
                          lambda x: math.sqrt(K) * np.exp(-K * np.abs(np.asarray(x, dtype=float))))
    gamma = solve_gamma(2.0 * p.a * p.m * p.lam)
    K = gamma / p.a
    A = math.sqrt(2.0 * K) / math.sqrt(math.exp(2.0 * gamma) + 2.0 * gamma + 1.0)

    def psi(x):
        x = np.asarray(x, dtype=float)
        ax = np.abs(x)
        inner = A * np.cosh(K * np.minimum(ax, p.a))
        outer = A * math.cosh(gamma) * np.exp(-K * (ax - p.a))
        return np.where(ax < p.a, inner, outer)

    return ExactState(-K * K / (2.0 * p.m), K, gamma, psi)


def scan_fig1(lams, a: float = 1.0, m: float = 1.0) -> list[tuple[float, float, float, float, float]]:
    """Rows ``(lambda, K_exact, K_kep, E_exact, E_kep)``."""
    rows = []
    for lam in lams:
        p = DeltaParams(float(lam), a, m)
        ex = exact_reference(p)
        kp = kep_two_state(p)
        rows.append((float(lam), ex.K, kp.K, ex.E, kp.E))
    return rows


def wavefunctions_fig2(p: DeltaParams, x) -> tuple[np.ndarray, np.ndarray]:
    """Exact and two-state KEP ground states on ``x``, both unit-normalized
    with a positive peak."""
    x = np.asarray(x, dtype=float)
    sol, s1, s2 = solve_kep(p)
    kep = synthesize(sol, 0, s1, s2, x)
    if kep[np.argmax(np.abs(kep))] < 0:
        kep = -kep
    return exact_reference(p).wavefunction(x), kep
