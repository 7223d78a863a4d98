"""Quadrature against the slice measure d lambda_{alpha,I} and the line measure d mu_alpha.

Slice integrals are done in polar form ``p = r e^{I theta}`` with the radial
substitution ``t = r^2``, so the weight becomes

    t^{alpha+1} K_alpha(t) / (2 pi 2^alpha Gamma(alpha+1)) dt dtheta.

The radial rule is composite Gauss-Legendre on ``[0, t_max]`` whose first panel
is geometrically graded towards 0 (the weight has ``t log t`` or non-integer
power behaviour there).  The angular rule is the periodic trapezoid rule.  Every
call refines once by doubling radial panels and angular nodes and compares the
two estimates; the difference is the convergence certificate.

Line integrals are composite Gauss-Legendre on ``[-X, 0]`` and ``[0, X]`` except
for the panels touching 0, which use Gauss-Jacobi nodes for the ``|x|^{2 alpha+1}``
factor of the density.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq
from scipy.special import roots_jacobi

from .errors import ConvergenceError, DomainError
from .fock import FockElement, _same_alpha
from .quaternion import I_UNIT, ImaginaryUnit, Quaternion, as_unit, embed, qconj, qmul
from .series import eval_slice, parity_split
from .special import bessel_K_scaled, check_alpha, gauss_legendre

DEFAULT_DEGREE_HINT = 16


@dataclass(frozen=True)
class QuadratureSpec:
    """Node/panel configuration.

    ``radial_R`` of ``None`` means the radial cutoff is chosen per call from the
    degree of the integrand (see :func:`radial_cutoff`).
    """

    radial_R: float | None = None
    radial_panels: int = 16
    angular_nodes: int = 64
    line_X: float = 12.0
    line_panels: int = 24
    tol: float = 1e-10
    order: int = 20
    grading: int = 40
    max_refinements: int = 4

    def __post_init__(self):
        if self.radial_R is not None and self.radial_R <= 0:
            raise DomainError("radial_R must be positive")
        for name in ("radial_panels", "angular_nodes", "line_panels", "order", "max_refinements"):
            if int(getattr(self, name)) < 1:
                raise DomainError(f"{name} must be a positive integer")
        if self.line_X <= 0 or self.tol <= 0:
            raise DomainError("line_X and tol must be positive")

    @classmethod
    def from_dict(cls, data: dict) -> "QuadratureSpec":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown quadrature keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "QuadratureSpec":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULT_SPEC = QuadratureSpec()


@dataclass(frozen=True)
class SliceMeasure:
    alpha: float
    unit: ImaginaryUnit = I_UNIT

    def __post_init__(self):
        object.__setattr__(self, "alpha", check_alpha(self.alpha))
        object.__setattr__(self, "unit", as_unit(self.unit))


@dataclass(frozen=True)
class LineMeasure:
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", check_alpha(self.alpha))

    def density(self, x):
        a = self.alpha
        return np.abs(x) ** (2 * a + 1) / (2 ** (a + 1) * math.gamma(a + 1))


@dataclass
class Certificate:
    """Result of one refinement step: coarse vs fine estimate."""

    change: float
    tol: float
    scale: float
    levels: int
    nodes: int
    converged: bool
    history: list = field(default_factory=list)


# -- rules ----------------------------------------------------------------------

def radial_cutoff(alpha: float, degree: int, decay: float = 1.0, margin: float = 40.0) -> float:
    """t_max with decay*t - (alpha+degree+1) log t = margin (t past the peak)."""
    a = alpha + degree + 1.0
    lo = max(a / decay, 1.0)

    def g(t):
        return decay * t - a * math.log(t) - margin

    hi = 2.0 * lo
    while g(hi) < 0:
        hi *= 2.0
    if g(lo) >= 0:
        return lo
    return brentq(g, lo, hi, xtol=1e-10)


def _composite(edges: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    u, w = gauss_legendre(order)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    return (mid[:, None] + half[:, None] * u).ravel(), (half[:, None] * w).ravel()


@lru_cache(maxsize=128)
def radial_rule(t_max: float, panels: int, order: int, grading: int):
    h = t_max / panels
    graded = h * 2.0 ** -np.arange(grading, -1, -1)
    edges = np.concatenate([[0.0], graded, h + h * np.arange(1, panels)])
    t, w = _composite(edges, order)
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


@lru_cache(maxsize=128)
def _radial_weights(alpha: float, t_max: float, panels: int, order: int, grading: int):
    # quadrature weights for t^{alpha+1} K_alpha(t) / (2 pi 2^alpha Gamma(alpha+1)) dt
    t, w = radial_rule(t_max, panels, order, grading)
    k = bessel_K_scaled(alpha, t) * np.exp(-t)
    c = 1.0 / (2.0 * math.pi * 2.0 ** alpha * math.gamma(alpha + 1.0))
    out = c * w * t ** (alpha + 1.0) * k
    out.setflags(write=False)
    return t, out


@lru_cache(maxsize=64)
def line_rule(alpha: float, X: float, panels: int, order: int):
    """Nodes and weights on [-X, X] with the d mu_alpha density folded into the weights."""
    a = check_alpha(alpha)
    h = X / panels
    b = 2.0 * a + 1.0
    if b == 0.0:
        u, wj = gauss_legendre(order)
    else:
        u, wj = roots_jacobi(order, 0.0, b)
    x0 = 0.5 * h * (1.0 + u)
    w0 = wj * (0.5 * h) ** (b + 1.0)
    xr, wr = _composite(h * np.arange(1, panels + 1), order)
    wr = wr * xr ** b
    x = np.concatenate([x0, xr])
    w = np.concatenate([w0, wr]) / (2.0 ** (a + 1.0) * math.gamma(a + 1.0))
    nodes = np.concatenate([-x[::-1], x])
    weights = np.concatenate([w[::-1], w])
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def line_nodes(alpha: float, spec: QuadratureSpec, level: int = 0):
    return line_rule(float(alpha), float(spec.line_X), spec.line_panels * 2 ** level, spec.order)


# -- refinement driver ----------------------------------------------------------

def _refine(estimate, spec: QuadratureSpec, what: str, nodes_of=None):
    """Evaluate ``estimate(level)`` for level 0, 1, ... until two successive values agree."""
    prev = np.asarray(estimate(0))
    history = []
    for level in range(1, spec.max_refinements + 1):
        cur = np.asarray(estimate(level))
        change = float(np.max(np.abs(cur - prev))) if cur.size else 0.0
        scale = max(1.0, float(np.max(np.abs(cur))) if cur.size else 0.0)
        history.append(change)
        if change <= spec.tol * scale:
            cert = Certificate(change, spec.tol, scale, level, nodes_of(level) if nodes_of else 0, True, history)
            return cur, cert
        prev = cur
    cert = Certificate(change, spec.tol, scale, spec.max_refinements,
                       nodes_of(spec.max_refinements) if nodes_of else 0, False, history)
    raise ConvergenceError(
        f"{what}: refinement did not converge (last change {change:.3e}, tol {spec.tol:.1e})", cert
    )


def _package(value: np.ndarray):
    if value.shape == (4,):
        return Quaternion.from_array(value)
    if value.shape == ():
        return float(value)
    return value


# -- slice integrals ------------------------------------------------------------

def slice_quad_z(fz, alpha: float, spec: QuadratureSpec = DEFAULT_SPEC, degree: int | None = None,
                 decay: float = 1.0, what: str = "slice integral"):
    """Integrate ``fz(z)`` against d lambda_alpha where ``z`` is the complex image of p.

    ``fz`` receives a complex array of shape (n_t, n_theta) and returns an
    array whose first two axes match; the remaining axes are integrated
    componentwise.  Returns ``(value, certificate)``.
    """
    alpha = check_alpha(alpha)
    hint = DEFAULT_DEGREE_HINT if degree is None else degree
    if spec.radial_R is not None:
        t_max = float(spec.radial_R) ** 2
    else:
        t_max = radial_cutoff(alpha, hint, decay)
    m0 = spec.angular_nodes if degree is None else max(spec.angular_nodes, 4 * degree + 8)

    def estimate(level):
        t, wt = _radial_weights(alpha, t_max, spec.radial_panels * 2 ** level, spec.order, spec.grading)
        m = m0 * 2 ** level
        theta = 2.0 * math.pi * np.arange(m) / m
        z = np.sqrt(t)[:, None] * np.exp(1j * theta)[None, :]
        vals = np.asarray(fz(z), dtype=float)
        ang = vals.sum(axis=1) * (2.0 * math.pi / m)
        return np.tensordot(wt, ang, axes=(0, 0))

    def nodes_of(level):
        return len(radial_rule(t_max, spec.radial_panels * 2 ** level, spec.order, spec.grading)[0]) * m0 * 2 ** level

    return _refine(estimate, spec, what, nodes_of)


def slice_integral(f, m: SliceMeasure, spec: QuadratureSpec = DEFAULT_SPEC, degree: int | None = None,
                   full_output: bool = False):
    """Integral of ``f`` over the slice of ``m.unit`` against d lambda_{alpha, I}.

    ``f`` is vectorized: it receives quaternion points of shape (..., 4) and
    returns quaternions of shape (..., 4) or reals of shape (...).
    ``degree`` (total power of |p| divided by two, if known) sizes the radial
    cutoff and the angular rule.
    """
    unit = m.unit

    def fz(z):
        return f(embed(z, unit))

    value, cert = slice_quad_z(fz, m.alpha, spec, degree)
    out = _package(value)
    return (out, cert) if full_output else out


def moment_E(m: int, n: int, alpha: float, unit=I_UNIT, spec: QuadratureSpec = DEFAULT_SPEC,
             full_output: bool = False):
    """Quadrature of int conj(q^{2m}) q^{2n} d lambda_{alpha, I}."""
    if m < 0 or n < 0:
        raise DomainError("moment indices must be nonnegative")
    unit = as_unit(unit)

    def fz(z):
        return embed(np.conj(z ** (2 * m)) * z ** (2 * n), unit)

    value, cert = slice_quad_z(fz, alpha, spec, degree=m + n, what=f"E_{m},{n}")
    out = Quaternion.from_array(value)
    return (out, cert) if full_output else out


def moment_O(m: int, n: int, alpha: float, unit=I_UNIT, spec: QuadratureSpec = DEFAULT_SPEC,
             full_output: bool = False):
    """Quadrature of int conj(q^{2m+1}) q^{2n+1} |q|^{-2} d lambda_{alpha+1, I}."""
    if m < 0 or n < 0:
        raise DomainError("moment indices must be nonnegative")
    unit = as_unit(unit)

    def fz(z):
        return embed(np.conj(z ** (2 * m + 1)) * z ** (2 * n + 1) / np.abs(z) ** 2, unit)

    value, cert = slice_quad_z(fz, check_alpha(alpha) + 1.0, spec, degree=m + n, what=f"O_{m},{n}")
    out = Quaternion.from_array(value)
    return (out, cert) if full_output else out


def fock_inner_quad(f: FockElement, g: FockElement, unit=I_UNIT, spec: QuadratureSpec = DEFAULT_SPEC,
                    full_output: bool = False):
    """<f, g> from its defining integrals on the slice of ``unit``.

    even part against d lambda_alpha plus 2(alpha+1) times the odd part with
    |p|^{-2} against d lambda_{alpha+1}.
    """
    _same_alpha(f, g)
    unit = as_unit(unit)
    alpha = f.alpha
    fe, fo = parity_split(f.series)
    ge, go = parity_split(g.series)
    deg = max(f.degree, g.degree)

    def even(z):
        return qmul(qconj(eval_slice(ge.coeffs, z, unit)), eval_slice(fe.coeffs, z, unit))

    def odd(z):
        vals = qmul(qconj(eval_slice(go.coeffs, z, unit)), eval_slice(fo.coeffs, z, unit))
        return vals / (np.abs(z) ** 2)[..., None]

    a, cert_e = slice_quad_z(even, alpha, spec, degree=deg, what="even part")
    b, cert_o = slice_quad_z(odd, alpha + 1.0, spec, degree=deg, what="odd part")
    out = Quaternion.from_array(a + 2.0 * (alpha + 1.0) * b)
    return (out, (cert_e, cert_o)) if full_output else out


# -- line integrals -------------------------------------------------------------

def line_integral(phi, m: LineMeasure, spec: QuadratureSpec = DEFAULT_SPEC, full_output: bool = False):
    """Integral of ``phi`` against d mu_alpha on the real line.

    ``phi`` is vectorized over a 1-D array of real nodes and returns an array
    whose first axis matches (quaternions as (n, 4), reals as (n,)).
    """

    def estimate(level):
        x, w = line_nodes(m.alpha, spec, level)
        vals = np.asarray(phi(x), dtype=float)
        return np.tensordot(w, vals, axes=(0, 0))

    def nodes_of(level):
        return len(line_nodes(m.alpha, spec, level)[0])

    value, cert = _refine(estimate, spec, "line integral", nodes_of)
    out = _package(value)
    return (out, cert) if full_output else out


def basis_gram_quad(alpha: float, N: int, unit=I_UNIT, spec: QuadratureSpec = DEFAULT_SPEC):
    """Gram matrix <phi_n, phi_m> for n, m <= N from the defining slice integrals.

    Returns a quaternion array of shape (N+1, N+1, 4) indexed [m, n] (``phi_m``
    in the conjugated slot).  Pairs of opposite parity vanish identically, as
    the even and odd parts are integrated separately.
    """
    from .special import beta_array

    alpha = check_alpha(alpha)
    unit = as_unit(unit)
    scale = 1.0 / np.sqrt(beta_array(N, alpha))
    gram = np.zeros((N + 1, N + 1), dtype=complex)
    certs = []
    for par, a, k in (("even", alpha, 0), ("odd", alpha + 1.0, 1)):
        idx = np.arange(k, N + 1, 2)
        if idx.size == 0:
            continue

        def fz(z, idx=idx, odd=bool(k)):
            zn = z[..., None] ** idx * scale[idx]
            g = np.conj(zn)[..., :, None] * zn[..., None, :]
            if odd:
                g = g / (np.abs(z) ** 2)[..., None, None]
            return np.stack([g.real, g.imag], axis=-1)

        val, cert = slice_quad_z(fz, a, spec, degree=N, what=f"{par} Gram block")
        block = val[..., 0] + 1j * val[..., 1]
        if k:
            block = 2.0 * (alpha + 1.0) * block
        gram[np.ix_(idx, idx)] = block
        certs.append(cert)
    return embed(gram, unit), certs


def mellin_quad(delta: float, nu: float, spec: QuadratureSpec = DEFAULT_SPEC, full_output: bool = False):
    """int_0^inf t^{delta-1} K_nu(t) dt by Gauss-Legendre in u = log t.

    In u the integrand e^{delta u} K_nu(e^u) decays like e^{(delta-|nu|) u} to
    the left and double exponentially to the right, so a finite window with a
    composite rule suffices.
    """
    gap = delta - abs(nu)
    if gap <= 0:
        raise DomainError("the Mellin integral needs delta > |nu|")
    u_lo = -45.0 / gap
    u_hi = math.log(100.0 + 2.0 * abs(delta))
    base = max(32, int(math.ceil((u_hi - u_lo) / 2.0)))

    def estimate(level):
        u, w = _composite(np.linspace(u_lo, u_hi, base * 2 ** level + 1), spec.order)
        t = np.exp(u)
        k = bessel_K_scaled(nu, t) * np.exp(-t)
        return np.dot(w, np.exp(delta * u) * k)

    value, cert = _refine(estimate, spec, f"Mellin integral (delta={delta}, nu={nu})")
    return (float(value), cert) if full_output else float(value)
