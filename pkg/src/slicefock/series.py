"""Truncated entire slice regular functions f(q) = sum_n q^n a_n.

Coefficients always sit to the right of the powers.  A :class:`SliceSeries`
stores them as a read-only ``(N+1, 4)`` float array.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .quaternion import (
    UNIT_TOL,
    ImaginaryUnit,
    Quaternion,
    as_unit,
    decompose_many,
    qmul,
)


def _coeff_array(coeffs) -> np.ndarray:
    if isinstance(coeffs, np.ndarray):
        arr = np.array(coeffs, dtype=float)
    else:
        arr = np.array([Quaternion.coerce(c).array for c in coeffs], dtype=float)
    if arr.size == 0:
        arr = np.zeros((1, 4))
    if arr.ndim != 2 or arr.shape[1] != 4:
        raise DomainError(f"coefficients must have shape (N+1, 4), got {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SliceSeries:
    """Coefficient vector a_0..a_N of a slice regular polynomial."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _coeff_array(self.coeffs))

    @classmethod
    def zero(cls, degree: int = 0) -> "SliceSeries":
        return cls(np.zeros((degree + 1, 4)))

    @classmethod
    def monomial(cls, n: int, coeff=1.0) -> "SliceSeries":
        c = np.zeros((n + 1, 4))
        c[n] = Quaternion.coerce(coeff).array
        return cls(c)

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    def coeff(self, n: int) -> Quaternion:
        if n > self.degree:
            return Quaternion()
        return Quaternion.from_array(self.coeffs[n])

    def padded(self, degree: int) -> np.ndarray:
        """Coefficient array zero-padded (or checked) to the given degree."""
        if degree < self.degree:
            raise DomainError("cannot pad to a smaller degree")
        out = np.zeros((degree + 1, 4))
        out[: self.degree + 1] = self.coeffs
        return out

    def __call__(self, q) -> Quaternion:
        return evaluate(self, q)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SliceSeries):
            return NotImplemented
        return self.coeffs.shape == other.coeffs.shape and bool(np.all(self.coeffs == other.coeffs))

    def __add__(self, other: "SliceSeries") -> "SliceSeries":
        n = max(self.degree, other.degree)
        return SliceSeries(self.padded(n) + other.padded(n))

    def __sub__(self, other: "SliceSeries") -> "SliceSeries":
        n = max(self.degree, other.degree)
        return SliceSeries(self.padded(n) - other.padded(n))

    def __mul__(self, c) -> "SliceSeries":
        """Right scalar multiplication: coefficients a_n -> a_n c."""
        c = Quaternion.coerce(c)
        return SliceSeries(qmul(self.coeffs, c.array))

    def __repr__(self) -> str:
        return f"SliceSeries(degree={self.degree}, coeffs={self.coeffs.tolist()!r})"


# -- evaluation ---------------------------------------------------------------

def _powers(z: np.ndarray, degree: int) -> np.ndarray:
    out = np.empty(z.shape + (degree + 1,), dtype=complex)
    out[..., 0] = 1.0
    for n in range(1, degree + 1):
        out[..., n] = out[..., n - 1] * z
    return out


def eval_slice(coeffs: np.ndarray, z, unit: ImaginaryUnit) -> np.ndarray:
    """Evaluate sum q^n a_n at q = Re z + Im z * unit for a complex array z."""
    coeffs = np.asarray(coeffs, dtype=float)
    z = np.asarray(z, dtype=complex)
    zn = _powers(z, coeffs.shape[0] - 1)
    a = zn.real @ coeffs
    b = zn.imag @ coeffs
    return a + qmul(np.concatenate([[0.0], unit.vector]), b)


def eval_many(coeffs: np.ndarray, points) -> np.ndarray:
    """Evaluate at an array of quaternions of shape (..., 4); returns (..., 4)."""
    coeffs = np.asarray(coeffs, dtype=float)
    z, units = decompose_many(points)
    zn = _powers(z, coeffs.shape[0] - 1)
    a = zn.real @ coeffs
    b = zn.imag @ coeffs
    uq = np.concatenate([np.zeros(units.shape[:-1] + (1,)), units], axis=-1)
    return a + qmul(uq, b)


def evaluate(f: SliceSeries, q) -> Quaternion:
    """f(q) = sum_{n<=N} q^n a_n."""
    q = Quaternion.coerce(q)
    return Quaternion.from_array(eval_many(f.coeffs, q.array[None, :])[0])


# -- structural operations ----------------------------------------------------

def parity_split(f: SliceSeries) -> tuple[SliceSeries, SliceSeries]:
    """(f^e, f^o) with f^e(q) = (f(q) + f(-q))/2 and f^o(q) = (f(q) - f(-q))/2."""
    idx = np.arange(f.degree + 1)
    even = np.where((idx % 2 == 0)[:, None], f.coeffs, 0.0)
    odd = np.where((idx % 2 == 1)[:, None], f.coeffs, 0.0)
    return SliceSeries(even), SliceSeries(odd)


def slice_derivative(f: SliceSeries) -> SliceSeries:
    if f.degree == 0:
        return SliceSeries.zero(0)
    n = np.arange(1, f.degree + 1, dtype=float)
    return SliceSeries(n[:, None] * f.coeffs[1:])


def representation_formula(fI_plus, fI_minus, I, J) -> Quaternion:
    """f(x + yJ) from the values f(x + yI) and f(x - yI) on the slice of I."""
    I = as_unit(I).as_quaternion()
    J = as_unit(J).as_quaternion()
    fp = Quaternion.coerce(fI_plus)
    fm = Quaternion.coerce(fI_minus)
    JI = J * I
    return ((1 - JI) * fp + (1 + JI) * fm) / 2.0


def split(f: SliceSeries, I, J) -> tuple[np.ndarray, np.ndarray]:
    """Complex coefficient lists (F, G) with f_I(z) = F(z) + G(z) J.

    Each a_n is written as c0 + c1 I + c2 J + c3 IJ; then F_n = c0 + i c1 and
    G_n = c2 + i c3, read as elements of the slice of ``I``.
    """
    I = as_unit(I)
    J = as_unit(J)
    if abs(I.dot(J)) > UNIT_TOL:
        raise DomainError("split requires perpendicular imaginary units")
    IJ = np.cross(I.vector, J.vector)
    re = f.coeffs[:, 0]
    im = f.coeffs[:, 1:]
    F = re + 1j * (im @ I.vector)
    G = (im @ J.vector) + 1j * (im @ IJ)
    return F, G


def reassemble_split(F, G, z, I, J) -> Quaternion:
    """Evaluate F(z) + G(z) J for z in the slice of I (z given as a complex number)."""
    I = as_unit(I)
    J = as_unit(J)
    F = np.asarray(F, dtype=complex)
    G = np.asarray(G, dtype=complex)
    fz = np.polynomial.polynomial.polyval(z, F)
    gz = np.polynomial.polynomial.polyval(z, G)
    Fq = Quaternion(fz.real, *(fz.imag * I.vector))
    Gq = Quaternion(gz.real, *(gz.imag * I.vector))
    return Fq + Gq * J.as_quaternion()


# -- serialization ------------------------------------------------------------

def coeffs_to_list(coeffs: np.ndarray) -> list:
    return [[float(v) for v in row] for row in np.asarray(coeffs)]


def coeffs_from_list(data, what: str = "series") -> np.ndarray:
    if not isinstance(data, list):
        raise ValueError(f"{what}: expected a JSON array of [x0,x1,x2,x3] quadruples")
    rows = []
    for i, row in enumerate(data):
        if not (isinstance(row, list) and len(row) == 4):
            raise ValueError(f"{what}: entry {i} is not a quadruple")
        for v in row:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ValueError(f"{what}: entry {i} holds a non-numeric component {v!r}")
        rows.append([float(v) for v in row])
    return np.array(rows, dtype=float).reshape(-1, 4)


def series_to_json(f: SliceSeries) -> str:
    return json.dumps(coeffs_to_list(f.coeffs))


def series_from_json(text: str) -> SliceSeries:
    return SliceSeries(coeffs_from_list(json.loads(text)))
