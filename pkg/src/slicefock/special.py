r"""Gamma, modified Bessel functions and the normalization sequence beta_n.

The Macdonald function is evaluated from its integral representation

.. math::
    K_\nu(x) = \int_0^\infty e^{-x\cosh t}\cosh(\nu t)\,dt ,

which is valid for every real order, so integer orders need no limiting
procedure.  Internally the exponentially scaled integrand
``exp(-x (cosh t - 1))`` is used so that large arguments do not underflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DomainError

ALPHA_MIN = -0.5


def check_alpha(alpha: float) -> float:
    """Validate the Fock-space weight parameter (alpha >= -1/2)."""
    alpha = float(alpha)
    if not alpha >= ALPHA_MIN:
        raise DomainError(f"alpha must be >= -1/2, got {alpha!r}")
    return alpha


def _is_pole(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def gamma_fn(x: float) -> float:
    if _is_pole(x):
        raise DomainError(f"Gamma has a pole at {x!r}")
    return math.gamma(x)


def log_gamma(x: float) -> float:
    if _is_pole(x):
        raise DomainError(f"Gamma has a pole at {x!r}")
    return math.lgamma(x)


# -- Macdonald function -------------------------------------------------------

@dataclass(frozen=True)
class BesselConfig:
    """Truncation and refinement policy for the integral representation.

    The cutoff ``T`` is solved per argument from ``x (cosh T - 1) - |nu| T = margin``,
    which makes the neglected tail smaller than ``exp(-margin)`` relative to the
    scaled integrand at the origin.  Panels are doubled from ``panels`` until two
    successive estimates agree to ``tol`` (relative) or ``max_panels`` is hit.
    """

    tol: float = 1e-13
    panels: int = 4
    max_panels: int = 4096
    order: int = 16
    margin: float = 40.0


DEFAULT_BESSEL = BesselConfig()


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def bessel_cutoff(nu: float, x, margin: float = DEFAULT_BESSEL.margin) -> np.ndarray:
    """Smallest T with x (cosh T - 1) - |nu| T >= margin, vectorized over x > 0."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    a = abs(nu)

    def g(t):
        return x * (np.cosh(t) - 1.0) - a * t - margin

    lo = np.zeros_like(x)
    hi = np.ones_like(x)
    while True:
        bad = g(hi) < 0
        if not bad.any():
            break
        hi = np.where(bad, 2.0 * hi, hi)
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        neg = g(mid) < 0
        lo = np.where(neg, mid, lo)
        hi = np.where(neg, hi, mid)
    return hi


def _scaled_k_rule(nu, x, T, panels, order):
    u, w = gauss_legendre(order)
    # composite rule on [0, 1], then s = T u
    edges = np.linspace(0.0, 1.0, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    uu = (mid[:, None] + half[:, None] * u[None, :]).ravel()
    ww = (half[:, None] * w[None, :]).ravel()
    s = T[:, None] * uu[None, :]
    vals = np.exp(-2.0 * x[:, None] * np.sinh(0.5 * s) ** 2) * np.cosh(nu * s)
    return T * (vals @ ww)


def bessel_K_scaled(nu: float, x, cfg: BesselConfig = DEFAULT_BESSEL):
    """exp(x) * K_nu(x) for x > 0 (scalar or array)."""
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x <= 0):
        raise DomainError("bessel_K requires x > 0")
    T = bessel_cutoff(nu, x, cfg.margin)
    panels = cfg.panels
    prev = _scaled_k_rule(nu, x, T, panels, cfg.order)
    while True:
        panels *= 2
        cur = _scaled_k_rule(nu, x, T, panels, cfg.order)
        err = np.abs(cur - prev)
        if np.all(err <= cfg.tol * np.abs(cur)):
            break
        if panels >= cfg.max_panels:
            raise ConvergenceError(
                f"K_{nu} integral did not converge (max rel change {np.max(err / np.abs(cur)):.3e})"
            )
        prev = cur
    return float(cur[0]) if scalar else cur


def bessel_K(nu: float, x, cfg: BesselConfig = DEFAULT_BESSEL):
    """Macdonald function K_nu(x), x > 0, any real order."""
    x_arr = np.asarray(x, dtype=float)
    val = bessel_K_scaled(nu, x_arr, cfg) * np.exp(-x_arr)
    return float(val) if np.ndim(x) == 0 else val


def bessel_I(nu: float, x: float, terms: int = 60) -> float:
    """Power series of I_nu(x) for x >= 0, nu > -1."""
    if x < 0:
        raise DomainError("bessel_I requires x >= 0")
    if nu <= -1:
        raise DomainError("bessel_I requires nu > -1")
    if x == 0:
        return 1.0 if nu == 0 else 0.0
    h = 0.5 * x
    term = math.exp(nu * math.log(h) - math.lgamma(nu + 1.0))
    total = term
    for k in range(terms - 1):
        term *= h * h / ((k + 1) * (nu + k + 1))
        total += term
    return total


def mellin_K(delta: float, nu: float) -> float:
    """Closed form of the Mellin transform of K_nu at delta."""
    if not (delta + nu > 0 and delta - nu > 0):
        raise DomainError("mellin_K requires delta + nu > 0 and delta - nu > 0")
    return 2.0 ** (delta - 2.0) * math.gamma(0.5 * (delta + nu)) * math.gamma(0.5 * (delta - nu))


# -- normalization sequence ---------------------------------------------------

def log_beta_n(n: int, alpha: float) -> float:
    if n < 0:
        raise DomainError("n must be nonnegative")
    alpha = check_alpha(alpha)
    return (
        n * math.log(2.0)
        + math.lgamma(n // 2 + 1)
        + math.lgamma((n + 1) // 2 + alpha + 1.0)
        - math.lgamma(alpha + 1.0)
    )


def rising(a: float, k: int) -> float:
    """Rising factorial (a)_k = a (a+1) ... (a+k-1) = Gamma(a+k) / Gamma(a)."""
    out = 1.0
    for j in range(k):
        out *= a + j
    return out


def beta_n(n: int, alpha: float) -> float:
    """beta_n(alpha) = 2^n [n/2]! Gamma([(n+1)/2] + alpha + 1) / Gamma(alpha + 1).

    The Gamma ratio is a finite rising factorial, so small n is computed as a
    product (exact for half-integer alpha, e.g. beta_n(-1/2) = n!).
    """
    if n < 0:
        raise DomainError("n must be nonnegative")
    alpha = check_alpha(alpha)
    if n <= 60:
        return (2.0 ** n) * math.factorial(n // 2) * rising(alpha + 1.0, (n + 1) // 2)
    lb = log_beta_n(n, alpha)
    if lb > 709.0:
        raise DomainError(f"beta_{n}({alpha}) overflows double precision; use log_beta_n")
    return math.exp(lb)


def beta_ratio(n: int, alpha: float) -> float:
    """beta_{n+1}(alpha) / beta_n(alpha) = n + 1 + (2 alpha + 1)(1 + (-1)^n) / 2."""
    return n + 1 + (2.0 * alpha + 1.0) * (1 - n % 2)


@lru_cache(maxsize=256)
def _beta_table(alpha: float, nmax: int) -> np.ndarray:
    out = np.array([beta_n(n, alpha) for n in range(nmax + 1)])
    out.setflags(write=False)
    return out


def beta_array(nmax: int, alpha: float) -> np.ndarray:
    """beta_0..beta_nmax as a read-only array."""
    return _beta_table(check_alpha(alpha), int(nmax))
