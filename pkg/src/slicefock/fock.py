"""The slice Cholewinski-Fock space at coefficient level.

An element is a finite-degree :class:`~slicefock.series.SliceSeries` together
with the weight parameter alpha.  The inner product is

    <f, g> = sum_n conj(b_n) a_n beta_n(alpha)

for f = sum q^n a_n and g = sum q^n b_n.  It is quaternion valued and right
linear in ``f``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .quaternion import Quaternion, decompose_many, qconj, qmul
from .series import SliceSeries, eval_many
from .special import beta_array, beta_n, check_alpha


@dataclass(frozen=True, eq=False)
class FockElement:
    series: SliceSeries
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", check_alpha(self.alpha))
        if not isinstance(self.series, SliceSeries):
            object.__setattr__(self, "series", SliceSeries(self.series))

    @classmethod
    def from_coeffs(cls, coeffs, alpha: float) -> "FockElement":
        return cls(SliceSeries(coeffs), alpha)

    @property
    def coeffs(self) -> np.ndarray:
        return self.series.coeffs

    @property
    def degree(self) -> int:
        return self.series.degree

    def __call__(self, q) -> Quaternion:
        return self.series(q)

    def __add__(self, other: "FockElement") -> "FockElement":
        _same_alpha(self, other)
        return FockElement(self.series + other.series, self.alpha)

    def __sub__(self, other: "FockElement") -> "FockElement":
        _same_alpha(self, other)
        return FockElement(self.series - other.series, self.alpha)

    def __repr__(self) -> str:
        return f"FockElement(alpha={self.alpha!r}, coeffs={self.coeffs.tolist()!r})"


def _same_alpha(f: FockElement, g: FockElement) -> None:
    if f.alpha != g.alpha:
        raise DomainError(f"alpha mismatch: {f.alpha!r} vs {g.alpha!r}")


def inner_product(f: FockElement, g: FockElement) -> Quaternion:
    _same_alpha(f, g)
    n = max(f.degree, g.degree)
    a = f.series.padded(n)
    b = g.series.padded(n)
    beta = beta_array(n, f.alpha)
    terms = qmul(qconj(b), a) * beta[:, None]
    return Quaternion.from_array(terms.sum(axis=0))


def norm2(f: FockElement) -> float:
    """||f||^2 = sum beta_n |a_n|^2, the (real) value of <f, f>."""
    beta = beta_array(f.degree, f.alpha)
    return float(np.sum(beta * np.sum(f.coeffs ** 2, axis=1)))


def norm(f: FockElement) -> float:
    return math.sqrt(norm2(f))


def basis_phi(n: int, alpha: float) -> FockElement:
    """phi_n(q) = q^n / sqrt(beta_n(alpha))."""
    if n < 0:
        raise DomainError("basis index must be nonnegative")
    return FockElement(SliceSeries.monomial(n, 1.0 / math.sqrt(beta_n(n, alpha))), alpha)


def from_basis_coords(c, alpha: float) -> FockElement:
    """sum_n phi_n c_n for a (N+1, 4) array of quaternion coordinates."""
    c = np.asarray(c, dtype=float)
    beta = beta_array(c.shape[0] - 1, alpha)
    return FockElement(SliceSeries(c / np.sqrt(beta)[:, None]), alpha)


def random_element(rng: np.random.Generator, degree: int, alpha: float) -> FockElement:
    """Element with standard normal quaternion coordinates in the phi_n basis."""
    return from_basis_coords(rng.normal(size=(degree + 1, 4)), alpha)


# -- kernels ------------------------------------------------------------------

@dataclass(frozen=True)
class KernelValue:
    value: Quaternion
    degree: int
    tail_bound: float


def factorial_tail(s: float, N: int) -> float:
    """Upper bound for sum_{n>N} s^n / n!  (s >= 0)."""
    if s == 0.0:
        return 0.0
    if s >= N + 2:
        return math.inf
    first = math.exp((N + 1) * math.log(s) - math.lgamma(N + 2))
    return first / (1.0 - s / (N + 2))


def truncation_degree(s: float, tol: float, max_degree: int = 2000) -> tuple[int, float]:
    """Smallest N whose factorial tail bound is below ``tol``."""
    if tol <= 0:
        raise DomainError("tol must be positive")
    for N in range(max_degree + 1):
        t = factorial_tail(s, N)
        if t < tol:
            return N, t
    raise DomainError(f"no truncation below {max_degree} reaches tol={tol!r} at s={s!r}")


def _slice_powers(q: Quaternion, N: int) -> np.ndarray:
    # q^0..q^N as an (N+1, 4) array, computed in the slice of q
    z, units = decompose_many(q.array[None, :])
    zn = np.concatenate([[1.0 + 0j], np.cumprod(np.full(N, z[0]))])
    out = np.zeros((N + 1, 4))
    out[:, 0] = zn.real
    out[:, 1:] = zn.imag[:, None] * units[0]
    return out


def kernel_L(p, q, alpha: float, tol: float = 1e-15, degree: int | None = None) -> KernelValue:
    """L_alpha(p, q) = sum_n p^n q^n / beta_n(alpha), truncated by the n! <= beta_n tail bound."""
    p = Quaternion.coerce(p)
    q = Quaternion.coerce(q)
    s = abs(p) * abs(q)
    if degree is None:
        N, tail = truncation_degree(s, tol)
    else:
        N, tail = degree, factorial_tail(s, degree)
    beta = beta_array(N, alpha)
    terms = qmul(_slice_powers(p, N), _slice_powers(q, N)) / beta[:, None]
    return KernelValue(Quaternion.from_array(terms.sum(axis=0)), N, tail)


def kernel_K(p, q, alpha: float, tol: float = 1e-15, degree: int | None = None) -> KernelValue:
    """Reproducing kernel K_alpha(p, q) = L_alpha(p, conj(q))."""
    return kernel_L(p, Quaternion.coerce(q).conj(), alpha, tol, degree)


def kernel_element(q, alpha: float, degree: int) -> FockElement:
    """K_q as an element: p -> sum p^n conj(q)^n / beta_n, truncated at ``degree``."""
    q = Quaternion.coerce(q)
    beta = beta_array(degree, alpha)
    return FockElement(SliceSeries(_slice_powers(q.conj(), degree) / beta[:, None]), alpha)


def eval_bound(q, alpha: float, tol: float = 1e-15) -> float:
    """C(|q|) = (sum |q|^{2n} / beta_n)^{1/2}."""
    r2 = abs(Quaternion.coerce(q)) ** 2
    N, _ = truncation_degree(r2, tol)
    beta = beta_array(N, alpha)
    return math.sqrt(float(np.sum(r2 ** np.arange(N + 1) / beta)))


def evaluate_many(f: FockElement, points) -> np.ndarray:
    return eval_many(f.coeffs, points)
