r"""Generalized Hermite functions, the kernel C_alpha, the transform T_alpha and
the slice Dunkl transform.

Complex arithmetic does most of the work: every quaternion involved in a kernel
evaluation lives in a single slice ``R + R I``, so it is mapped to ``C``,
evaluated there, and embedded back with :func:`~slicefock.quaternion.embed`.

The one-variable kernel

.. math::
    L_\alpha(w) = \sum_n \frac{w^n}{\beta_n(\alpha)}
               = \Gamma(\alpha+1)\,(w/2)^{-\alpha}\,[I_\alpha(w) + I_{\alpha+1}(w)]

is summed directly for ``|w| <= SERIES_RADIUS``.  Beyond that the series
cancels badly along the imaginary axis (the Dunkl kernel is oscillatory there),
so the Bessel form is used with ``scipy.special.ive``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import ive

from .errors import DomainError
from .fock import FockElement, from_basis_coords, truncation_degree
from .quadrature import (
    DEFAULT_SPEC,
    Certificate,
    LineMeasure,
    QuadratureSpec,
    _refine,
    line_nodes,
    slice_quad_z,
)
from .quaternion import I_UNIT, Quaternion, as_unit, decompose_many, embed, qabs, qconj, qmul
from .series import coeffs_from_list, coeffs_to_list, eval_slice, parity_split
from .special import beta_array, beta_ratio, check_alpha, log_beta_n

SERIES_RADIUS = 10.0


# -- generalized Hermite polynomials and functions ----------------------------

@lru_cache(maxsize=512)
def _hermite_terms(n: int, alpha: float):
    # (sign_k, log|coefficient of x^{n-2k}|) for H_n^alpha
    lb = log_beta_n(n, alpha)
    signs, logs, powers = [], [], []
    for k in range(n // 2 + 1):
        p = n - 2 * k
        signs.append(-1.0 if k % 2 else 1.0)
        logs.append(lb - math.lgamma(k + 1) - log_beta_n(p, alpha) + p * math.log(2.0))
        powers.append(p)
    return np.array(signs), np.array(logs), np.array(powers)


def _hermite_sum(n, x, alpha, log_prefactor=0.0):
    signs, logs, powers = _hermite_terms(int(n), check_alpha(alpha))
    x = np.asarray(x, dtype=float)
    coef = signs * np.exp(logs + log_prefactor)
    return np.sum(coef * x[..., None] ** powers, axis=-1)


def hermite_H(n: int, x, alpha: float):
    """H_n^alpha(x) = sum_k (-1)^k beta_n / (k! beta_{n-2k}) (2x)^{n-2k}."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    out = _hermite_sum(n, x, alpha)
    return float(out) if np.ndim(x) == 0 else out


def _h_log_prefactor(n: int, alpha: float) -> float:
    return -0.5 * (n - alpha - 1.0) * math.log(2.0) - 0.5 * log_beta_n(n, alpha)


def hermite_h(n: int, x, alpha: float):
    """Generalized Hermite function, orthonormal in L^2(R, d mu_alpha)."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    x_arr = np.asarray(x, dtype=float)
    out = np.exp(-0.5 * x_arr ** 2) * _hermite_sum(n, x_arr, alpha, _h_log_prefactor(n, alpha))
    return float(out) if np.ndim(x) == 0 else out


def hermite_h_table(nmax: int, x, alpha: float) -> np.ndarray:
    """h_0..h_nmax at the points x: shape (nmax+1,) + x.shape."""
    x = np.asarray(x, dtype=float)
    return np.stack([hermite_h(n, x, alpha) for n in range(nmax + 1)])


@dataclass(frozen=True, eq=False)
class HermiteExpansion:
    """phi = sum_n h_n^alpha c_n with quaternion coefficients on the right."""

    coeffs: np.ndarray
    alpha: float

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.size == 0:
            c = np.zeros((1, 4))
        if c.ndim != 2 or c.shape[1] != 4:
            raise DomainError(f"coefficients must have shape (N+1, 4), got {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "alpha", check_alpha(self.alpha))

    @classmethod
    def basis(cls, n: int, alpha: float, coeff=1.0) -> "HermiteExpansion":
        c = np.zeros((n + 1, 4))
        c[n] = Quaternion.coerce(coeff).array
        return cls(c, alpha)

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    def __call__(self, x) -> np.ndarray:
        """Values at real points: shape x.shape + (4,)."""
        x = np.asarray(x, dtype=float)
        table = hermite_h_table(self.degree, x, self.alpha)
        return np.tensordot(table, self.coeffs, axes=(0, 0))

    def norm2(self) -> float:
        return float(np.sum(self.coeffs ** 2))

    def to_json(self) -> str:
        return json.dumps({"alpha": self.alpha, "coeffs": coeffs_to_list(self.coeffs)})

    @classmethod
    def from_json(cls, text: str) -> "HermiteExpansion":
        data = json.loads(text)
        return cls.from_obj(data)

    @classmethod
    def from_obj(cls, data) -> "HermiteExpansion":
        if not isinstance(data, dict) or "coeffs" not in data or "alpha" not in data:
            raise ValueError("Hermite expansion: expected an object with 'alpha' and 'coeffs'")
        alpha = data["alpha"]
        if isinstance(alpha, bool) or not isinstance(alpha, (int, float)):
            raise ValueError("Hermite expansion: 'alpha' must be a number")
        return cls(coeffs_from_list(data["coeffs"], "Hermite expansion"), float(alpha))

    def __repr__(self) -> str:
        return f"HermiteExpansion(alpha={self.alpha!r}, coeffs={self.coeffs.tolist()!r})"


# -- the one-variable kernel L_alpha(w) on complex arguments --------------------

def _L_series(w: np.ndarray, alpha: float, parity: str | None = None) -> np.ndarray:
    s = float(np.max(np.abs(w))) if w.size else 0.0
    N, _ = truncation_degree(s, 1e-17)
    if parity is None:
        term = np.ones_like(w)
        total = np.ones_like(w)
        for n in range(N):
            term = term * w / beta_ratio(n, alpha)
            total = total + term
        return total
    # one parity class: step two degrees at a time
    start = 0 if parity == "even" else 1
    term = np.ones_like(w) if start == 0 else w / beta_ratio(0, alpha)
    total = term.copy()
    w2 = w * w
    for n in range(start, N, 2):
        term = term * w2 / (beta_ratio(n, alpha) * beta_ratio(n + 1, alpha))
        total = total + term
    return total


def _L_bessel_scaled(w: np.ndarray, alpha: float, parity: str | None = None):
    # L(w) = mant * exp(shift), reflecting to Re >= 0 to stay off the branch cut
    sign = np.where(w.real >= 0, 1.0, -1.0)
    v = w * sign
    g = math.gamma(alpha + 1.0) * (0.5 * v) ** (-alpha)
    if parity == "even":
        mant = g * ive(alpha, v)
    elif parity == "odd":
        mant = sign * g * ive(alpha + 1.0, v)
    else:
        mant = g * (ive(alpha, v) + sign * ive(alpha + 1.0, v))
    return mant, np.abs(v.real)


def L_complex_scaled(w, alpha: float, parity: str | None = None):
    """Return ``(mant, shift)`` with L_alpha(w) = mant * exp(shift).

    ``parity`` selects the even or odd part in w ("even", "odd"); None gives
    the full kernel.
    """
    alpha = check_alpha(alpha)
    if parity not in (None, "even", "odd"):
        raise ValueError(f"unknown parity {parity!r}")
    w = np.asarray(w, dtype=complex)
    mant = np.empty_like(w)
    shift = np.zeros(w.shape)
    small = np.abs(w) <= SERIES_RADIUS
    if small.any():
        mant[small] = _L_series(w[small], alpha, parity)
    if (~small).any():
        m, s = _L_bessel_scaled(w[~small], alpha, parity)
        mant[~small] = m
        shift[~small] = s
    return mant, shift


def L_complex(w, alpha: float):
    """L_alpha(w) = sum_n w^n / beta_n(alpha) for complex w.

    The error is at rounding level relative to L_alpha(|w|), which bounds
    |L_alpha(w)|.  When Re w is large and negative the value itself is much
    smaller than that bound (at alpha = -1/2 it is e^w), so the relative
    error of the result can be large there.
    """
    mant, shift = L_complex_scaled(w, alpha)
    out = mant * np.exp(shift)
    return complex(out) if np.ndim(w) == 0 else out


def C_complex(z, x, alpha: float, parity: str | None = None):
    """C_alpha(z, x) = 2^{(alpha+1)/2} exp(-(z^2 + x^2)/2) L_alpha(sqrt(2) z x), complex z.

    With ``parity`` set, only the even or odd part in z is returned.
    """
    z = np.asarray(z, dtype=complex)
    x = np.asarray(x, dtype=float)
    mant, shift = L_complex_scaled(math.sqrt(2.0) * z * x, alpha, parity)
    return 2.0 ** (0.5 * (alpha + 1.0)) * np.exp(-0.5 * (z * z + x * x) + shift) * mant


# -- the kernel C_alpha on quaternions -------------------------------------------

@dataclass(frozen=True)
class TransformKernelValue:
    value: Quaternion
    truncation: int


def kernel_C(p, x: float, alpha: float, tol: float = 1e-15) -> TransformKernelValue:
    """Product form; e^{-p^2/2} and L_alpha(sqrt(2) p x) are both evaluated in the slice of p.

    ``truncation`` is the series degree used for L_alpha, or -1 when the Bessel
    form was used.
    """
    p = Quaternion.coerce(p)
    z, units = decompose_many(p.array[None, :])
    val = C_complex(z[0], x, alpha)
    s = math.sqrt(2.0) * abs(z[0]) * abs(x)
    trunc = truncation_degree(s, tol)[0] if s <= SERIES_RADIUS else -1
    q = Quaternion(val.real, *(val.imag * units[0]))
    return TransformKernelValue(q, trunc)


def kernel_C_series(p, x: float, alpha: float, degree: int = 40) -> Quaternion:
    """Generating-function form sum_{n<=degree} h_n(x) p^n / sqrt(beta_n)."""
    p = Quaternion.coerce(p)
    z, units = decompose_many(p.array[None, :])
    h = hermite_h_table(degree, np.asarray(float(x)), alpha)
    beta = beta_array(degree, alpha)
    zn = np.concatenate([[1.0 + 0j], np.cumprod(np.full(degree, z[0]))])
    val = np.sum(h * zn / np.sqrt(beta))
    return Quaternion(val.real, *(val.imag * units[0]))


# -- T_alpha ------------------------------------------------------------------

def T_alpha_coeff(phi: HermiteExpansion) -> FockElement:
    """Coefficient map: h_n c_n -> phi_n c_n."""
    return from_basis_coords(phi.coeffs, phi.alpha)


def T_alpha_inverse_coeff(f: FockElement) -> HermiteExpansion:
    """Inverse coefficient map: q^n a_n -> h_n sqrt(beta_n) a_n."""
    beta = beta_array(f.degree, f.alpha)
    return HermiteExpansion(f.coeffs * np.sqrt(beta)[:, None], f.alpha)


def T_alpha_quad(phi, q, m: LineMeasure, spec: QuadratureSpec = DEFAULT_SPEC, full_output: bool = False):
    """T_alpha phi(q) = int C_alpha(q, x) phi(x) d mu_alpha(x) by line quadrature.

    ``phi`` is vectorized: real nodes (n,) -> quaternions (n, 4).
    """
    q = Quaternion.coerce(q)
    z, units = decompose_many(q.array[None, :])
    zq, uq = z[0], units[0]
    uq_quat = np.concatenate([[0.0], uq])

    def estimate(level):
        x, w = line_nodes(m.alpha, spec, level)
        c = C_complex(zq, x, m.alpha)
        vals = np.asarray(phi(x), dtype=float)
        if vals.ndim == 1:
            vals = np.stack([vals, np.zeros_like(vals), np.zeros_like(vals), np.zeros_like(vals)], axis=-1)
        a = (w * c.real) @ vals
        b = (w * c.imag) @ vals
        return a + qmul(uq_quat, b)

    value, cert = _refine(estimate, spec, "T_alpha quadrature")
    out = Quaternion.from_array(value)
    return (out, cert) if full_output else out


@lru_cache(maxsize=32)
def _inverse_moments(alpha: float, xs_bytes: bytes, N: int, spec: QuadratureSpec):
    # mu_n(x) = int C^{par(n)}(conj z, x) z^n d lambda, with the odd moments taken
    # against d lambda_{alpha+1} / |z|^2 and already scaled by 2(alpha+1)
    xs = np.frombuffer(xs_bytes)
    deg = N + 16
    n_even = np.arange(0, N + 1, 2)
    n_odd = np.arange(1, N + 1, 2)

    def integrand(parity, powers):
        def fz(z):
            c = C_complex(np.conj(z)[..., None], xs, alpha, parity)
            zn = z[..., None] ** powers
            if parity == "odd":
                zn = zn / (np.abs(z) ** 2)[..., None]
            m = zn[..., :, None] * c[..., None, :]
            return np.stack([m.real, m.imag], axis=-1)
        return fz

    mu = np.zeros((N + 1, xs.size), dtype=complex)
    ev, cert_e = slice_quad_z(integrand("even", n_even), alpha, spec, degree=deg, decay=0.5,
                              what="inverse transform, even moments")
    mu[n_even] = ev[..., 0] + 1j * ev[..., 1]
    certs = [cert_e]
    if n_odd.size:
        od, cert_o = slice_quad_z(integrand("odd", n_odd), alpha + 1.0, spec, degree=deg, decay=0.5,
                                  what="inverse transform, odd moments")
        mu[n_odd] = 2.0 * (alpha + 1.0) * (od[..., 0] + 1j * od[..., 1])
        certs.append(cert_o)
    mu.setflags(write=False)
    return mu, tuple(certs)


def T_inverse_quad(f: FockElement, x, unit=I_UNIT, spec: QuadratureSpec = DEFAULT_SPEC,
                   full_output: bool = False):
    """T_alpha^{-1} f(x) from the slice integrals against the even/odd parts of C_alpha(conj p, x).

    Parity of C_alpha is taken in its quaternion variable.  Because the kernel
    is intrinsic, the integral splits into complex moments
    mu_n(x) = int C(conj z, x) z^n (computed on the slice, cached per alpha, x
    and spec) and T^{-1} f(x) = sum_n mu_n(x) a_n with mu_n read in the slice of
    ``unit``.  ``x`` may be a 1-D array, giving an (n, 4) result.
    """
    unit = as_unit(unit)
    scalar = np.ndim(x) == 0
    xs = np.ascontiguousarray(np.atleast_1d(np.asarray(x, dtype=float)))
    # round the degree up so that nearby inputs share one moment table
    N = 8 * max(1, -(-f.degree // 8))
    mu, certs = _inverse_moments(f.alpha, xs.tobytes(), N, spec)
    mu = mu[: f.degree + 1]
    a = mu.real.T @ f.coeffs
    b = mu.imag.T @ f.coeffs
    value = a + qmul(np.concatenate([[0.0], unit.vector]), b)
    out = Quaternion.from_array(value[0]) if scalar else value
    return (out, certs) if full_output else out


# -- slice Dunkl transform -----------------------------------------------------

@lru_cache(maxsize=16)
def _dunkl_matrix(alpha: float, s_bytes: bytes, t_bytes: bytes):
    s = np.frombuffer(s_bytes)
    t = np.frombuffer(t_bytes)
    k = L_complex(-1j * s[:, None] * t[None, :], alpha)
    return np.ascontiguousarray(k.real), np.ascontiguousarray(k.imag)


def _as_quat_values(vals: np.ndarray) -> np.ndarray:
    vals = np.asarray(vals, dtype=float)
    if vals.ndim == 1:
        out = np.zeros(vals.shape + (4,))
        out[:, 0] = vals
        return out
    return vals


def dunkl_at(phi, s, unit, alpha: float, spec: QuadratureSpec = DEFAULT_SPEC, level: int = 1) -> np.ndarray:
    """D_alpha^I phi at the points ``s`` with a fixed (non-refined) line rule of the given level."""
    unit = as_unit(unit)
    s = np.ascontiguousarray(np.atleast_1d(np.asarray(s, dtype=float)))
    t, w = line_nodes(alpha, spec, level)
    kr, ki = _dunkl_matrix(float(alpha), s.tobytes(), np.ascontiguousarray(t).tobytes())
    vals = _as_quat_values(phi(t))
    a = (kr * w) @ vals
    b = (ki * w) @ vals
    return a + qmul(np.concatenate([[0.0], unit.vector]), b)


def dunkl(phi, x: float, unit, m: LineMeasure, spec: QuadratureSpec = DEFAULT_SPEC, full_output: bool = False):
    """(Right) slice Dunkl transform D_alpha^I phi(x) = int L_alpha(-I x t) phi(t) d mu_alpha(t)."""
    unit = as_unit(unit)
    uq = np.concatenate([[0.0], unit.vector])

    def estimate(level):
        t, w = line_nodes(m.alpha, spec, level)
        k = L_complex(-1j * float(x) * t, m.alpha)
        vals = _as_quat_values(phi(t))
        return (w * k.real) @ vals + qmul(uq, (w * k.imag) @ vals)

    value, cert = _refine(estimate, spec, "Dunkl transform")
    out = Quaternion.from_array(value)
    return (out, cert) if full_output else out


def dunkl_coeff(phi: HermiteExpansion, x, unit) -> np.ndarray:
    """D_alpha^I phi(x) from the eigenrelation D_alpha^I h_n = (-I)^n h_n.

    Returns shape x.shape + (4,).  Used as the coefficient-level counterpart of
    :func:`dunkl`.
    """
    unit = as_unit(unit)
    x = np.asarray(x, dtype=float)
    n = np.arange(phi.degree + 1)
    zn = (-1j) ** n
    table = hermite_h_table(phi.degree, x, phi.alpha)
    a = np.tensordot(table * zn.real.reshape((-1,) + (1,) * x.ndim), phi.coeffs, axes=(0, 0))
    b = np.tensordot(table * zn.imag.reshape((-1,) + (1,) * x.ndim), phi.coeffs, axes=(0, 0))
    return a + qmul(np.concatenate([[0.0], unit.vector]), b)


def T_alpha_dunkl_quad(psi, x: float, unit, m: LineMeasure, spec: QuadratureSpec = DEFAULT_SPEC,
                       full_output: bool = False):
    """T_alpha(D_alpha^I psi)(x) by nested quadrature, both rules refined together."""
    unit = as_unit(unit)

    def estimate(level):
        s, w = line_nodes(m.alpha, spec, level)
        inner = dunkl_at(psi, s, unit, m.alpha, spec, level)
        c = C_complex(complex(float(x)), s, m.alpha).real
        return (w * c) @ inner

    value, cert = _refine(estimate, spec, "T_alpha of Dunkl transform")
    out = Quaternion.from_array(value)
    return (out, cert) if full_output else out


def kernel_orthogonality_check(p, q, alpha: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """|int C(p,x) C(q,x) d mu_alpha - L_alpha(p, q)|, product order preserved."""
    from .fock import kernel_L

    p = Quaternion.coerce(p)
    q = Quaternion.coerce(q)
    zp, up = decompose_many(p.array[None, :])
    zq, uq = decompose_many(q.array[None, :])
    m = LineMeasure(alpha)

    def phi(x):
        cp = C_complex(zp[0], x, alpha)
        cq = C_complex(zq[0], x, alpha)
        qp = np.zeros(x.shape + (4,))
        qp[:, 0], qp[:, 1:] = cp.real, cp.imag[:, None] * up[0]
        qq = np.zeros(x.shape + (4,))
        qq[:, 0], qq[:, 1:] = cq.real, cq.imag[:, None] * uq[0]
        return qmul(qp, qq)

    def estimate(level):
        x, w = line_nodes(m.alpha, spec, level)
        return w @ phi(x)

    value, _ = _refine(estimate, spec, "kernel orthogonality")
    target = kernel_L(p, q, alpha).value
    return abs(Quaternion.from_array(value) - target)


def line_norm2(phi, alpha: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """||phi||^2 in L^2(R, d mu_alpha) by quadrature (phi vectorized, quaternion valued)."""

    def estimate(level):
        x, w = line_nodes(alpha, spec, level)
        v = _as_quat_values(phi(x))
        return w @ np.sum(v * v, axis=-1)

    value, _ = _refine(estimate, spec, "line norm")
    return float(value)
