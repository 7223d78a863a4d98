"""Multiplication by q, the Dunkl-type derivative and the parity operator.

All three act on coefficient vectors.  With f = sum q^n a_n:

* ``op_M``:  a_n -> placed at index n + 1,
* ``op_D``:  the coefficient at index n is (beta_{n+1} / beta_n) a_{n+1},
* ``op_A``:  a_n -> (-1)^n a_n.

``op_D`` equals the slice derivative plus (2 alpha + 1) q^{-1} f^o; the
two-term form is kept as :func:`op_D_two_term` for cross-checking away from
q = 0.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .fock import FockElement, _same_alpha, inner_product, norm2
from .quaternion import Quaternion
from .series import SliceSeries, parity_split, slice_derivative
from .special import beta_array, beta_ratio


def op_M(f: FockElement) -> FockElement:
    c = np.zeros((f.degree + 2, 4))
    c[1:] = f.coeffs
    return FockElement(SliceSeries(c), f.alpha)


def op_D(f: FockElement) -> FockElement:
    if f.degree == 0:
        return FockElement(SliceSeries.zero(0), f.alpha)
    ratios = np.array([beta_ratio(n, f.alpha) for n in range(f.degree)])
    return FockElement(SliceSeries(ratios[:, None] * f.coeffs[1:]), f.alpha)


def op_A(f: FockElement) -> FockElement:
    signs = np.where(np.arange(f.degree + 1) % 2 == 0, 1.0, -1.0)
    return FockElement(SliceSeries(signs[:, None] * f.coeffs), f.alpha)


def op_D_two_term(f: FockElement, q) -> Quaternion:
    """(d_S f)(q) + (2 alpha + 1) q^{-1} f^o(q), evaluated pointwise (q != 0)."""
    q = Quaternion.coerce(q)
    _, fo = parity_split(f.series)
    qinv = q.conj() / q.norm2()
    return slice_derivative(f.series)(q) + (2.0 * f.alpha + 1.0) * (qinv * fo(q))


def _pad(f: FockElement, n: int) -> np.ndarray:
    return f.series.padded(n)


@dataclass(frozen=True)
class OperatorReport:
    """Residuals of the three operator identities for one pair (f, g).

    ``adjointness``: |<Df, g> - <f, Mg>|, relative to ||Df|| ||g||.
    ``commutator``: max coefficient of (DM - MD)f - f - (2 alpha + 1) Af,
    relative to the largest coefficient magnitude involved.
    ``norm_relation``: |  ||Df||^2 - ||Mf||^2 + ||f||^2 + (2 alpha + 1) sum (-1)^k beta_k |a_k|^2 |,
    relative to ||Mf||^2.
    """

    adjointness: float
    commutator: float
    norm_relation: float
    tol: float

    @property
    def passed(self) -> bool:
        return max(self.adjointness, self.commutator, self.norm_relation) < self.tol

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def commutator_residual(f: FockElement) -> float:
    alpha = f.alpha
    lhs = op_D(op_M(f)).series - op_M(op_D(f)).series
    rhs = f.series + op_A(f).series * (2.0 * alpha + 1.0)
    n = max(lhs.degree, rhs.degree)
    diff = _pad(FockElement(lhs, alpha), n) - _pad(FockElement(rhs, alpha), n)
    scale = max(1.0, float(np.max(np.abs(op_D(op_M(f)).coeffs))))
    return float(np.max(np.abs(diff))) / scale


def verify_identities(f: FockElement, g: FockElement, tol: float = 1e-11) -> OperatorReport:
    _same_alpha(f, g)
    alpha = f.alpha
    Df, Mg, Mf = op_D(f), op_M(g), op_M(f)

    adj = abs(inner_product(Df, g) - inner_product(f, Mg))
    adj_scale = max(1.0, (norm2(Df) * norm2(g)) ** 0.5)

    beta = beta_array(f.degree, alpha)
    signs = np.where(np.arange(f.degree + 1) % 2 == 0, 1.0, -1.0)
    alt = float(np.sum(signs * beta * np.sum(f.coeffs ** 2, axis=1)))
    nr = abs(norm2(Df) - norm2(Mf) + norm2(f) + (2.0 * alpha + 1.0) * alt)
    nr_scale = max(1.0, norm2(Mf))

    return OperatorReport(adj / adj_scale, commutator_residual(f), nr / nr_scale, tol)
