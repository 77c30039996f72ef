"""H2+ with clamped nuclei.

The electron's kinetic energy is shared between the two nuclei through a
mass split ``kappa_1 = alpha``, ``kappa_2 = alpha/(alpha - 1)``; each center
then carries hydrogenic s orbitals of length scale ``a_1 = 1/alpha`` and
``a_2 = 1 - 1/alpha``. Two-center integrals use prolate spheroidal
coordinates with ``r_1 = R(xi + eta)/2``, ``r_2 = R(xi - eta)/2``; center 1
sits at ``x = -R/2`` on the axis and center 2 at ``x = +R/2``.

Reported energies include the nuclear repulsion ``1/R`` unless named
``E_electronic``.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from ..core import CouplingIntegrals, KepSolution, SubsystemBasis, assemble, solve, synthesize
from ..linalg import gen_eigen
from ..quadrature import hydrogenic_R, integrate_elliptic

T_MIN = 0.02
ALPHA_TOL = 1e-4
R_TOL = 1e-3
R_BRACKET = (1.0, 4.0)
PRESCAN = 13
_INV_SQRT_4PI = 1.0 / math.sqrt(4.0 * math.pi)
_GOLD = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class H2Params:
    R: float
    alpha: Optional[float] = None  # None: choose variationally
    shells: tuple[int, ...] = (1, 2)
    order_xi: int = 64
    order_eta: int = 64

    def __post_init__(self):
        if not self.R > 0:
            raise ValueError("internuclear distance must be positive")
        if self.alpha is not None and not self.alpha > 1.0:
            raise ValueError("alpha must exceed 1")
        shells = tuple(int(n) for n in self.shells)
        if not shells or min(shells) < 1:
            raise ValueError("shells must be a non-empty list of principal numbers >= 1")
        object.__setattr__(self, "shells", shells)


@dataclass(frozen=True)
class CurvePoint:
    R: float
    alpha_used: float
    E_electronic: float
    E_total: float


def length_scales(alpha: float) -> tuple[float, float]:
    return 1.0 / alpha, 1.0 - 1.0 / alpha


def _axis_evaluator(shells, a, center):
    def ev(x):
        r = np.abs(np.asarray(x, dtype=float) - center)
        return np.stack([hydrogenic_R(n, a, r) * _INV_SQRT_4PI for n in shells])
    return ev


def subsystem_bases(p: H2Params, alpha: Optional[float] = None) -> tuple[SubsystemBasis, SubsystemBasis]:
    """Center bases; evaluators sample points on the internuclear axis."""
    alpha = p.alpha if alpha is None else alpha
    if alpha is None:
        raise ValueError("alpha must be fixed or optimized first")
    a1, a2 = length_scales(alpha)
    e1 = [-1.0 / (2.0 * a1 * n * n) for n in p.shells]
    e2 = [-1.0 / (2.0 * a2 * n * n) for n in p.shells]
    return (SubsystemBasis(alpha, e1, _axis_evaluator(p.shells, a1, -0.5 * p.R), "center 1"),
            SubsystemBasis(alpha / (alpha - 1.0), e2, _axis_evaluator(p.shells, a2, 0.5 * p.R), "center 2"))


def _pair_integral(R, f, p1, p2, order_xi, order_eta, check=True):
    """``int f dV`` for an s-type integrand decaying like
    ``exp(-p1 r_1 - p2 r_2)``; ``f(xi, eta, r1, r2)`` excludes the Jacobian
    ``R^3/16 (xi^2 - eta^2)`` which is applied here."""
    def g(X, E):
        r1 = 0.5 * R * (X + E)
        r2 = 0.5 * R * (X - E)
        return f(X, E, r1, r2)
    return integrate_elliptic(g, R, order_xi, order_eta, decay=0.5 * R * (p1 + p2),
                              eta_decay=0.5 * R * (p1 - p2), check=check)


def _jac(R):
    c = R ** 3 / 16.0
    # (jacobian, jacobian / r1, jacobian / r2), singular factors cancelled
    return (lambda X, E: c * (X * X - E * E),
            lambda X, E: c * (2.0 / R) * (X - E),
            lambda X, E: c * (2.0 / R) * (X + E))


@lru_cache(maxsize=4096)
def _coulomb_cached(R: float, alpha: float, shells: tuple, order_xi: int, order_eta: int, check: bool):
    a1, a2 = length_scales(alpha)
    k1, k2 = alpha, alpha / (alpha - 1.0)
    J, J_r1, J_r2 = _jac(R)
    N = len(shells)
    D1 = np.zeros((N, N))
    D2 = np.zeros((N, N))
    X = np.zeros((N, N))
    for i, m in enumerate(shells):
        for j, n in enumerate(shells):
            if j >= i:
                pm, pn = 1.0 / (m * a1), 1.0 / (n * a1)

                def f1(x, e, r1, r2, m=m, n=n):
                    rr = hydrogenic_R(m, a1, r1) * hydrogenic_R(n, a1, r1)
                    # V2 - (k1 - 1) V1 with V_i = -1/r_i
                    return rr * (-J_r2(x, e) + (k1 - 1.0) * J_r1(x, e))

                D1[i, j] = D1[j, i] = _pair_integral(R, f1, pm + pn, 0.0, order_xi, order_eta, check)
                qm, qn = 1.0 / (m * a2), 1.0 / (n * a2)

                def f2(x, e, r1, r2, m=m, n=n):
                    rr = hydrogenic_R(m, a2, r2) * hydrogenic_R(n, a2, r2)
                    return rr * (-J_r1(x, e) + (k2 - 1.0) * J_r2(x, e))

                D2[i, j] = D2[j, i] = _pair_integral(R, f2, 0.0, qm + qn, order_xi, order_eta, check)

            def fx(x, e, r1, r2, m=m, n=n):
                return hydrogenic_R(m, a1, r1) * hydrogenic_R(n, a2, r2) * J(x, e)

            X[i, j] = _pair_integral(R, fx, 1.0 / (m * a1), 1.0 / (n * a2), order_xi, order_eta, check)
    for a in (D1, D2, X):
        a.setflags(write=False)
    return D1, D2, X


def coulomb_integrals(p: H2Params, alpha: Optional[float] = None, check: bool = True) -> CouplingIntegrals:
    """Potential blocks and cross overlaps for the mass split ``alpha``."""
    alpha = p.alpha if alpha is None else alpha
    if alpha is None:
        raise ValueError("alpha must be fixed or optimized first")
    D1, D2, X = _coulomb_cached(float(p.R), float(alpha), p.shells, p.order_xi, p.order_eta, check)
    return CouplingIntegrals(D1.copy(), D2.copy(), X.copy())


def assembly(p: H2Params, alpha: Optional[float] = None, check: bool = True):
    s1, s2 = subsystem_bases(p, alpha)
    return assemble(s1, s2, coulomb_integrals(p, alpha, check)), s1, s2


def _electronic(p: H2Params, alpha: float, check: bool = True) -> tuple[float, KepSolution]:
    asm, _, _ = assembly(p, alpha, check)
    sol = solve(asm)
    return float(sol.eigenvalues[0]), sol


def _golden(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    a, b = lo, hi
    c = b - _GOLD * (b - a)
    d = a + _GOLD * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLD * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLD * (b - a)
            fd = f(d)
    return (c, fc) if fc < fd else (d, fd)


def optimize_alpha(p: H2Params, check: bool = False) -> float:
    """Variational mass split.

    Swapping the centers maps ``t = 1/alpha`` to ``1 - t`` with the same
    energy, so only ``t`` in ``[1/2, 1 - T_MIN]`` is searched. A coarse scan
    brackets the minimum before golden-section refinement to ``ALPHA_TOL``
    in ``t``. Trial energies skip the order-doubling check by default; the
    reported energy at the chosen split is always checked.
    """
    if p.alpha is not None:
        return p.alpha

    def energy(t):
        return _electronic(p, 1.0 / t, check)[0]

    ts = np.linspace(0.5, 1.0 - T_MIN, PRESCAN)
    es = [energy(t) for t in ts]
    k = int(np.argmin(es))
    lo, hi = ts[max(k - 1, 0)], ts[min(k + 1, len(ts) - 1)]
    t, e = _golden(energy, float(lo), float(hi), ALPHA_TOL)
    if es[k] < e:
        t = float(ts[k])
    return 1.0 / t


def electronic_ground(p: H2Params) -> tuple[float, KepSolution]:
    """Lowest electronic energy (no ``1/R``) and its solution."""
    alpha = optimize_alpha(p)
    return _electronic(p, alpha)


def curve_point(p: H2Params) -> CurvePoint:
    alpha = optimize_alpha(p)
    E, _ = _electronic(p, alpha)
    return CurvePoint(p.R, alpha, E, E + 1.0 / p.R)


def potential_curve(Rs: Sequence[float], p: H2Params, jobs: int = 1) -> list[CurvePoint]:
    """``CurvePoint`` per distance, in input order; ``jobs > 1`` uses processes."""
    params = [replace(p, R=float(R)) for R in Rs]
    if jobs <= 1 or len(params) < 2:
        return [curve_point(q) for q in params]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(curve_point, params))


def equilibrium(p: H2Params, bracket=R_BRACKET, tol: float = R_TOL) -> tuple[float, float]:
    """``(R_e, E_total)`` by golden section on ``R``."""
    R, E = _golden(lambda R: curve_point(replace(p, R=R)).E_total, bracket[0], bracket[1], tol)
    return R, E


# -- LCAO-MO baseline ----------------------------------------------------------------


@lru_cache(maxsize=1024)
def lcao_integrals(R: float, order_xi: int = 64, order_eta: int = 64) -> tuple[float, float, float]:
    """``S = <A|B>``, ``J = <A|1/r_B|A>``, ``K = <A|1/r_A|B>`` for 1s(a=1)."""
    J_, J_r1, J_r2 = _jac(R)

    def one_s(r):
        return hydrogenic_R(1, 1.0, r)

    S = _pair_integral(R, lambda x, e, r1, r2: one_s(r1) * one_s(r2) * J_(x, e), 1.0, 1.0, order_xi, order_eta)
    J = _pair_integral(R, lambda x, e, r1, r2: one_s(r1) ** 2 * J_r2(x, e), 2.0, 0.0, order_xi, order_eta)
    K = _pair_integral(R, lambda x, e, r1, r2: one_s(r1) * one_s(r2) * J_r1(x, e), 1.0, 1.0, order_xi, order_eta)
    return S, J, K


def lcao_baseline(R: float) -> tuple[float, np.ndarray]:
    """Total energy and ground coefficients of the two-orbital LCAO pencil.

    With ``(p^2/2 - 1/r_A) A = -A/2`` every element reduces to
    ``H_AA = -1/2 - J`` and ``H_AB = -S/2 - K``.
    """
    S, J, K = lcao_integrals(float(R))
    Haa = -0.5 - J
    Hab = -0.5 * S - K
    res = gen_eigen([[Haa, Hab], [Hab, Haa]], [[1.0, S], [S, 1.0]])
    return float(res.eigenvalues[0]) + 1.0 / R, res.coefficients[:, 0]


def lcao_equilibrium(bracket=R_BRACKET, tol: float = R_TOL) -> tuple[float, float]:
    return _golden(lambda R: lcao_baseline(R)[0], bracket[0], bracket[1], tol)


# -- wavefunction ---------------------------------------------------------------------


def wavefunction_slice(p: H2Params, x) -> np.ndarray:
    """Ground state along the axis (``y = z = 0``), signed positive at the midpoint."""
    alpha = optimize_alpha(p)
    E, sol = _electronic(p, alpha)
    s1, s2 = subsystem_bases(p, alpha)
    psi = synthesize(sol, 0, s1, s2, np.asarray(x, dtype=float))
    mid = synthesize(sol, 0, s1, s2, np.zeros(1))[0]
    return -psi if mid < 0 else psi


def one_sided_slopes(p: H2Params, x0: float, h: float = 1e-5) -> tuple[float, float]:
    """Left and right derivatives of the axis slice at ``x0``."""
    v = wavefunction_slice(p, np.array([x0 - 2 * h, x0 - h, x0, x0 + h, x0 + 2 * h]))
    left = (3 * v[2] - 4 * v[1] + v[0]) / (2 * h)
    right = (-3 * v[2] + 4 * v[3] - v[4]) / (2 * h)
    return left, right
