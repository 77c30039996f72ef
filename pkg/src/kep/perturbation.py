"""Two-state KEP closed form and its first-order expansion.

With one function per subsystem and ``kappa_1 = kappa_2 = 2`` the pencil is

    [[2E1 + f1, (E1 + E2) eta], [(E1 + E2) eta, 2E2 + f2]]   over   [[1, eta], [eta, 1]]

and writing ``E = E1 + E2 + x`` turns its determinant into
``(1 - eta^2) x^2 - (f1 + f2) x + (d + f1)(f2 - d) = 0`` with ``d = E1 - E2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import CouplingIntegrals, SubsystemBasis, assemble, solve
from .quadrature import gauss_hermite

DEGENERATE_TOL = 1e-12
HERMITE_ORDER = 48


@dataclass(frozen=True)
class TwoStateIntegrals:
    E1: float
    E2: float
    f1: float
    f2: float
    eta: float

    def __post_init__(self):
        vals = (self.E1, self.E2, self.f1, self.f2, self.eta)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("two-state integrals must be finite")
        if abs(self.eta) > 1.0 + 1e-10:
            raise ValueError(f"|eta| = {abs(self.eta)} exceeds 1")


@dataclass(frozen=True)
class TwoStateRoot:
    E: float
    degenerate: bool  # True when the eta -> 1 limit formula was used


def two_state_exact(t: TwoStateIntegrals) -> TwoStateRoot:
    """Lower root of the two-state pencil.

    The quadratic is solved in a cancellation-free form. When ``1 - eta^2``
    vanishes the quadratic becomes linear, ``x = c / (f1 + f2)``, which in the
    symmetric case is ``2E1 + f1/2``; if ``f1 + f2`` vanishes too the bases
    coincide and ``E = 2E1 + f1``.
    """
    d = t.E1 - t.E2
    s = t.f1 + t.f2
    c = (d + t.f1) * (t.f2 - d)
    q = 1.0 - t.eta * t.eta
    if abs(q) <= DEGENERATE_TOL:
        if abs(s) <= DEGENERATE_TOL * max(1.0, abs(t.f1)):
            return TwoStateRoot(2.0 * t.E1 + t.f1, True)
        return TwoStateRoot(t.E1 + t.E2 + c / s, True)
    disc = math.sqrt(max(s * s - 4.0 * q * c, 0.0))
    if s > 0:
        x = 2.0 * c / (s + disc)
    else:
        x = (s - disc) / (2.0 * q)
    return TwoStateRoot(t.E1 + t.E2 + x, False)


def pencil_root(t: TwoStateIntegrals) -> float:
    """Same root through the general union-basis solver."""
    s1 = SubsystemBasis(2.0, [t.E1])
    s2 = SubsystemBasis(2.0, [t.E2])
    ints = CouplingIntegrals([[t.f1]], [[t.f2]], [[t.eta]])
    return float(solve(assemble(s1, s2, ints)).eigenvalues[0])


def first_order(t: TwoStateIntegrals) -> tuple[float, float]:
    """``(E0, E0 + E1)`` with ``E0 = 2 E1`` and the first correction ``f1``."""
    return 2.0 * t.E1, 2.0 * t.E1 + t.f1


# -- displaced / distorted oscillator -------------------------------------------


def _gauss_integral(f, center: float, a: float, order: int = HERMITE_ORDER) -> float:
    """``int exp(-a (x - center)^2) f(x) dx``."""
    rule = gauss_hermite(order)
    sa = math.sqrt(a)
    return float(np.sum(rule.weights * f(center + rule.nodes / sa)) / sa)


def oscillator_integrals(k: float, dk: float, dx: float, mass: float = 1.0) -> TwoStateIntegrals:
    """Two-state integrals for ``V1 = k x^2/2`` and ``V2 = (k + dk)(x + dx)^2/2``
    with each subsystem carrying mass ``2 * mass``."""
    if not (k > 0 and k + dk > 0):
        raise ValueError("spring constants must be positive")
    ms = 2.0 * mass
    k2 = k + dk
    w1, w2 = math.sqrt(k / ms), math.sqrt(k2 / ms)
    a1, a2 = ms * w1, ms * w2  # psi_i ~ exp(-a_i (x - c_i)^2 / 2)
    c1, c2 = 0.0, -dx

    def V1(x):
        return 0.5 * k * x * x

    def V2(x):
        return 0.5 * k2 * (x + dx) ** 2

    n1 = math.sqrt(a1 / math.pi)
    n2 = math.sqrt(a2 / math.pi)
    f1 = n1 * _gauss_integral(lambda x: V2(x) - V1(x), c1, a1)
    f2 = n2 * _gauss_integral(lambda x: V1(x) - V2(x), c2, a2)
    # psi1 psi2 is a single Gaussian with exponent (a1 + a2)/2 around cm
    a = 0.5 * (a1 + a2)
    cm = (a1 * c1 + a2 * c2) / (a1 + a2)
    shift = 0.5 * a1 * a2 / (a1 + a2) * (c1 - c2) ** 2
    eta = math.sqrt(n1 * n2) * math.exp(-shift) * _gauss_integral(lambda x: np.ones_like(x), cm, a)
    return TwoStateIntegrals(0.5 * w1, 0.5 * w2, f1, f2, eta)


def oscillator_exact(k: float, dk: float, dx: float, mass: float = 1.0) -> float:
    """Ground energy of ``p^2/2m + V1 + V2`` by completing the square."""
    A = 2.0 * k + dk
    B = (k + dk) * dx
    C = 0.5 * (k + dk) * dx * dx
    return 0.5 * math.sqrt(A / mass) + C - B * B / (2.0 * A)


@dataclass(frozen=True)
class HarmonicRecord:
    E_exact: float
    E_kep: float
    E0: float
    E0_plus_E1: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.E_exact, self.E_kep, self.E0, self.E0_plus_E1)


def harmonic_demo(k: float, dk: float, dx: float) -> HarmonicRecord:
    t = oscillator_integrals(k, dk, dx)
    E0, E01 = first_order(t)
    return HarmonicRecord(oscillator_exact(k, dk, dx), two_state_exact(t).E, E0, E01)
