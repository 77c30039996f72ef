"""Gauss rules, special functions and the two-center elliptic integrator.

Nodes are found by Newton iteration on the three-term recurrences; rules are
cached and returned as immutable :class:`QuadratureRule` values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import NotConverged, OrderTooLarge

NEWTON_MAXITER = 100
NEWTON_TOL = 1e-15

MAX_LEGENDRE = 512
MAX_LAGUERRE = 256
MAX_HERMITE = 150

DEFAULT_ORDER = 64


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    domain: str  # "finite", "half-line" or "real-line"
    interval: tuple[float, float]
    order: int

    def __post_init__(self):
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    def integrate(self, f: Callable[[np.ndarray], np.ndarray]) -> float:
        return float(np.sum(self.weights * f(self.nodes)))

    def mapped(self, a: float, b: float) -> "QuadratureRule":
        """Affine image of a finite rule on ``[a, b]``."""
        if self.domain != "finite":
            raise ValueError("only finite rules can be remapped")
        lo, hi = self.interval
        scale = (b - a) / (hi - lo)
        return QuadratureRule(a + (self.nodes - lo) * scale, self.weights * scale, "finite", (a, b), self.order)


def _check_order(order: int, limit: int) -> int:
    order = int(order)
    if order < 1:
        raise ValueError("quadrature order must be >= 1")
    if order > limit:
        raise OrderTooLarge(f"order {order} exceeds the supported maximum {limit}")
    return order


@lru_cache(maxsize=None)
def _legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    i = np.arange(1, n + 1)
    x = np.cos(np.pi * (i - 0.25) / (n + 0.5))
    for _ in range(NEWTON_MAXITER):
        p0, p1 = np.ones_like(x), x.copy()
        for k in range(2, n + 1):
            p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
        pn = p1 if n > 1 else x
        pm = p0 if n > 1 else np.ones_like(x)
        dp = n * (x * pn - pm) / (x * x - 1.0)
        dx = pn / dp
        x = x - dx
        if np.max(np.abs(dx)) < NEWTON_TOL:
            break
    # final derivative at converged nodes
    p0, p1 = np.ones_like(x), x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    pm = p0 if n > 1 else np.ones_like(x)
    dp = n * (x * p1 - pm) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    x = x[::-1].copy()
    w = w[::-1].copy()
    # exact mirror symmetry
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return x, w


def gauss_legendre(order: int) -> QuadratureRule:
    """Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree 2n-1."""
    n = _check_order(order, MAX_LEGENDRE)
    x, w = _legendre(n)
    return QuadratureRule(x.copy(), w.copy(), "finite", (-1.0, 1.0), n)


def _laguerre_functions(n: int, x: float) -> tuple[float, float]:
    """``exp(-x/2) L_n(x)`` and ``exp(-x/2) L_{n-1}(x)`` (bounded by 1)."""
    l0, l1 = math.exp(-0.5 * x), (1.0 - x) * math.exp(-0.5 * x)
    if n == 1:
        return l1, l0
    for k in range(1, n):
        l0, l1 = l1, ((2 * k + 1 - x) * l1 - k * l0) / (k + 1)
    return l1, l0


@lru_cache(maxsize=None)
def _laguerre(n: int) -> tuple[np.ndarray, np.ndarray]:
    x = np.zeros(n)
    w = np.zeros(n)
    z = 0.0
    for i in range(n):
        # standard asymptotic initial guesses
        if i == 0:
            z = 3.0 / (1.0 + 2.4 * n)
        elif i == 1:
            z += 15.0 / (1.0 + 2.5 * n)
        else:
            ai = i - 1
            z += (1.0 + 2.55 * ai) / (1.9 * ai) * (z - x[i - 2])
        for _ in range(NEWTON_MAXITER):
            ln, lm = _laguerre_functions(n, z)
            # z L_n' = n (L_n - L_{n-1}); the exp(-z/2) scale cancels in the ratio
            dz = z * ln / (n * (ln - lm))
            z -= dz
            if abs(dz) <= NEWTON_TOL * max(1.0, z):
                break
        ln, lm = _laguerre_functions(n, z)
        x[i] = z
        d = n * (ln - lm)  # exp(-z/2) z L_n'(z)
        w[i] = z * math.exp(-z) / (d * d) if z < 745.0 else 0.0
    return x, w


def gauss_laguerre(order: int) -> QuadratureRule:
    """Gauss-Laguerre rule for ``int_0^inf exp(-x) f(x) dx``.

    Tail weights below the double-precision range underflow to zero for
    orders beyond ~150.
    """
    n = _check_order(order, MAX_LAGUERRE)
    x, w = _laguerre(n)
    return QuadratureRule(x.copy(), w.copy(), "half-line", (0.0, math.inf), n)


@lru_cache(maxsize=None)
def _hermite(n: int) -> tuple[np.ndarray, np.ndarray]:
    pim4 = math.pi ** -0.25
    m = (n + 1) // 2
    x = np.zeros(n)
    w = np.zeros(n)
    z = 0.0
    for i in range(m):
        if i == 0:
            z = math.sqrt(2 * n + 1) - 1.85575 * (2 * n + 1) ** (-1 / 6)
        elif i == 1:
            z -= 1.14 * n ** 0.426 / z
        elif i == 2:
            z = 1.86 * z - 0.86 * x[0]
        elif i == 3:
            z = 1.91 * z - 0.91 * x[1]
        else:
            z = 2.0 * z - x[i - 2]
        for _ in range(NEWTON_MAXITER):
            # orthonormal Hermite functions
            p1, p2 = pim4, 0.0
            for j in range(1, n + 1):
                p1, p2 = z * math.sqrt(2.0 / j) * p1 - math.sqrt((j - 1) / j) * p2, p1
            pp = math.sqrt(2.0 * n) * p2
            dz = p1 / pp
            z -= dz
            if abs(dz) <= NEWTON_TOL * max(1.0, abs(z)):
                break
        p1, p2 = pim4, 0.0
        for j in range(1, n + 1):
            p1, p2 = z * math.sqrt(2.0 / j) * p1 - math.sqrt((j - 1) / j) * p2, p1
        pp = math.sqrt(2.0 * n) * p2
        x[i], x[n - 1 - i] = z, -z
        w[i] = w[n - 1 - i] = 2.0 / (pp * pp)
    if n % 2 == 1:
        x[m - 1] = 0.0
    return x[::-1].copy(), w[::-1].copy()


def gauss_hermite(order: int) -> QuadratureRule:
    """Gauss-Hermite rule for ``int exp(-x^2) f(x) dx`` over the real line."""
    n = _check_order(order, MAX_HERMITE)
    x, w = _hermite(n)
    return QuadratureRule(x.copy(), w.copy(), "real-line", (-math.inf, math.inf), n)


# -- special functions ---------------------------------------------------------------


def assoc_laguerre(n: int, alpha: float, x):
    """Generalized Laguerre polynomial ``L_n^(alpha)(x)`` by forward recurrence."""
    if n < 0:
        raise ValueError("n must be >= 0")
    x = np.asarray(x, dtype=float)
    l0 = np.ones_like(x)
    if n == 0:
        return l0 if l0.ndim else float(l0)
    l1 = 1.0 + alpha - x
    for k in range(1, n):
        l0, l1 = l1, ((2 * k + 1 + alpha - x) * l1 - (k + alpha) * l0) / (k + 1)
    return l1 if np.ndim(l1) else float(l1)


def laguerre(n: int, x):
    return assoc_laguerre(n, 0.0, x)


def assoc_laguerre_deriv(n: int, alpha: float, x):
    """d/dx L_n^(alpha)(x) = -L_{n-1}^(alpha+1)(x)."""
    if n == 0:
        return np.zeros_like(np.asarray(x, dtype=float)) if np.ndim(x) else 0.0
    return -assoc_laguerre(n - 1, alpha + 1.0, x)


def confluent_M_poly(n: int, b: float, x):
    """Terminating Kummer function ``M(-n, b, x)`` for integer ``n >= 0``."""
    if n < 0 or int(n) != n:
        raise ValueError("n must be a non-negative integer")
    if b <= 0:
        raise ValueError("b must be positive")
    # n! Gamma(b) / Gamma(n + b) as a product
    c = 1.0
    for k in range(1, n + 1):
        c *= k / (b + k - 1)
    return c * assoc_laguerre(n, b - 1.0, x)


@dataclass(frozen=True)
class RadialOrbital:
    """Normalized hydrogenic s radial function with Bohr-radius analog ``a``."""

    n: int
    a: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("principal number must be >= 1")
        if not self.a > 0:
            raise ValueError("length scale must be positive")

    @property
    def decay(self) -> float:
        """Exponential decay rate 1/(n a) of the radial function."""
        return 1.0 / (self.n * self.a)

    @property
    def energy(self) -> float:
        return hydrogenic_energy(self.n, self.a)

    def __call__(self, r):
        return hydrogenic_R(self.n, self.a, r)


def hydrogenic_R(n: int, a: float, r):
    """Normalized ``R_{n0}`` with scale ``a``: ``int R^2 r^2 dr = 1``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    r = np.asarray(r, dtype=float)
    rho = 2.0 * r / (n * a)
    norm = math.sqrt((2.0 / (n * a)) ** 3 * math.factorial(n - 1) / (2 * n * math.factorial(n)))
    out = norm * np.exp(-0.5 * rho) * assoc_laguerre(n - 1, 1.0, rho)
    return out if out.ndim else float(out)


def hydrogenic_energy(n: int, a: float) -> float:
    return -1.0 / (2.0 * a * n * n)


# -- integrators -----------------------------------------------------------------------


def converged(coarse: float, fine: float, rtol: float = 1e-9, atol: float = 1e-12) -> bool:
    return abs(fine - coarse) <= max(rtol * abs(fine), atol)


def integrate_radial(f: Callable[[np.ndarray], np.ndarray], decay: float = 1.0, order: int = DEFAULT_ORDER) -> float:
    """``int_0^inf f(r) dr`` on a Laguerre rule mapped by ``r = t / decay``.

    ``decay`` should match the exponential decay rate of ``f``.
    """
    rule = gauss_laguerre(order)
    t = rule.nodes
    w = _scaled_weights(rule)
    return float(np.sum(w * f(t / decay)) / decay)


def _scaled_weights(rule: QuadratureRule) -> np.ndarray:
    """Laguerre weights times e^t, formed in log space; underflowed weights stay zero."""
    pos = rule.weights > 0
    out = np.zeros_like(rule.nodes)
    out[pos] = np.exp(np.log(rule.weights[pos]) + rule.nodes[pos])
    return out


def _eta_breaks(eta_decay: float, max_width_rate: float = 32.0) -> list[float]:
    """Panel boundaries on [-1, 1], split at 0 and graded toward the end where
    ``exp(-eta_decay * eta)`` concentrates."""
    c = abs(eta_decay)
    pts = {-1.0, 0.0, 1.0}
    width = 1.0
    while width * c > max_width_rate and width > 1e-12:
        width *= 0.5
        pts.add(-1.0 + width)
    if eta_decay < 0:
        pts = {-p for p in pts}
    return sorted(pts)


@lru_cache(maxsize=256)
def _elliptic_grid(R: float, order_xi: int, order_eta: int, decay: float, eta_decay: float):
    lag = gauss_laguerre(order_xi)
    leg = gauss_legendre(order_eta)
    t = lag.nodes
    xi = 1.0 + t / decay
    wx = _scaled_weights(lag) / decay
    etas, wes = [], []
    breaks = _eta_breaks(eta_decay)
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        panel = leg.mapped(lo, hi)
        etas.append(panel.nodes)
        wes.append(panel.weights)
    eta = np.concatenate(etas)
    we = np.concatenate(wes)
    X, E = np.meshgrid(xi, eta, indexing="ij")
    W = wx[:, None] * we[None, :]
    for a in (X, E, W):
        a.setflags(write=False)
    return X, E, W


def elliptic_grid(R: float, order_xi: int = DEFAULT_ORDER, order_eta: int = DEFAULT_ORDER,
                  decay: float = 1.0, eta_decay: float = 0.0):
    """Tensor grid ``(xi, eta, weight)`` for ``int_1^inf dxi int_-1^1 deta``.

    ``xi = 1 + t/decay`` on a Laguerre rule; ``eta`` uses ``order_eta``
    Legendre points per panel, panels split at 0 and graded toward the
    endpoint favoured by ``exp(-eta_decay * eta)``.
    """
    if not R > 0:
        raise ValueError("R must be positive")
    if not decay > 0:
        raise ValueError("decay hint must be positive")
    return _elliptic_grid(float(R), int(order_xi), int(order_eta), float(decay), float(eta_decay))


def integrate_elliptic(f: Callable[[np.ndarray, np.ndarray], np.ndarray], R: float,
                       order_xi: int = DEFAULT_ORDER, order_eta: int = DEFAULT_ORDER, *,
                       decay: float = 1.0, eta_decay: float = 0.0, check: bool = True,
                       rtol: float = 1e-9, atol: float = 1e-12) -> float:
    """Integrate ``f(xi, eta)`` over ``xi >= 1, |eta| <= 1``.

    ``f`` must already contain every Jacobian factor (including
    ``R^3/8 (xi^2 - eta^2)`` for volume integrals). With ``check`` the orders
    are doubled until two successive results agree to ``rtol`` (``atol``
    floor); :class:`NotConverged` is raised if Laguerre/Legendre limits are
    reached first.
    """
    def run(nx, ne):
        X, E, W = elliptic_grid(R, nx, ne, decay, eta_decay)
        return float(np.sum(W * f(X, E)))

    value = run(order_xi, order_eta)
    if not check:
        return value
    nx, ne = order_xi, order_eta
    while True:
        nx2, ne2 = 2 * nx, 2 * ne
        if nx2 > MAX_LAGUERRE or ne2 > MAX_LEGENDRE:
            raise NotConverged(
                f"elliptic quadrature unstable at orders ({nx}, {ne}); last value {value!r}")
        fine = run(nx2, ne2)
        if converged(value, fine, rtol, atol):
            return fine
        value, nx, ne = fine, nx2, ne2
