"""Quaternion arithmetic and slice decomposition.

Scalar values are :class:`Quaternion` instances.  Bulk work (quadrature grids,
series evaluation) uses plain ``numpy`` arrays whose last axis holds the four
components ``(x0, x1, x2, x3)``; :func:`qmul` and friends operate on those.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError

UNIT_TOL = 1e-12


@dataclass(frozen=True)
class Quaternion:
    """q = x0 + x1 i + x2 j + x3 k."""

    x0: float = 0.0
    x1: float = 0.0
    x2: float = 0.0
    x3: float = 0.0

    @classmethod
    def from_array(cls, arr) -> "Quaternion":
        a = np.asarray(arr, dtype=float).reshape(4)
        return cls(float(a[0]), float(a[1]), float(a[2]), float(a[3]))

    @classmethod
    def coerce(cls, value) -> "Quaternion":
        """Accept a Quaternion, an ImaginaryUnit, a real number or a length-4 sequence."""
        if isinstance(value, Quaternion):
            return value
        if isinstance(value, ImaginaryUnit):
            return value.as_quaternion()
        if isinstance(value, (int, float, np.floating, np.integer)):
            return cls(float(value))
        return cls.from_array(value)

    @property
    def array(self) -> np.ndarray:
        return np.array([self.x0, self.x1, self.x2, self.x3])

    @property
    def real(self) -> float:
        return self.x0

    @property
    def imag(self) -> "Quaternion":
        return Quaternion(0.0, self.x1, self.x2, self.x3)

    def conj(self) -> "Quaternion":
        return Quaternion(self.x0, -self.x1, -self.x2, -self.x3)

    def norm2(self) -> float:
        return self.x0 * self.x0 + self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3

    def __abs__(self) -> float:
        return math.hypot(self.x0, self.x1, self.x2, self.x3)

    def __add__(self, other):
        o = _as_quat(other)
        if o is None:
            return NotImplemented
        return Quaternion(self.x0 + o.x0, self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)

    __radd__ = __add__

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.x0, -self.x1, -self.x2, -self.x3)

    def __sub__(self, other):
        o = _as_quat(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = _as_quat(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = _as_quat(other)
        if o is None:
            return NotImplemented
        return quat_mul(self, o)

    def __rmul__(self, other):
        o = _as_quat(other)
        if o is None:
            return NotImplemented
        return quat_mul(o, self)

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Quaternion(self.x0 / other, self.x1 / other, self.x2 / other, self.x3 / other)
        return NotImplemented

    def __pow__(self, n: int) -> "Quaternion":
        return quat_pow(self, n)

    def __iter__(self):
        return iter((self.x0, self.x1, self.x2, self.x3))

    def __repr__(self) -> str:
        return f"Quaternion({self.x0!r}, {self.x1!r}, {self.x2!r}, {self.x3!r})"


def _as_quat(value):
    if isinstance(value, Quaternion):
        return value
    if isinstance(value, ImaginaryUnit):
        return value.as_quaternion()
    if isinstance(value, (int, float, np.floating, np.integer)):
        return Quaternion(float(value))
    return None


@dataclass(frozen=True)
class ImaginaryUnit:
    """A point of the unit sphere of pure quaternions; squares to -1."""

    u1: float
    u2: float
    u3: float

    def __post_init__(self):
        n2 = self.u1 ** 2 + self.u2 ** 2 + self.u3 ** 2
        if abs(n2 - 1.0) > UNIT_TOL:
            raise DomainError(f"imaginary unit must have norm 1, got |u|^2={n2!r}")

    @classmethod
    def from_vector(cls, v) -> "ImaginaryUnit":
        """Normalize a nonzero 3-vector."""
        v = np.asarray(v, dtype=float).reshape(3)
        n = float(np.linalg.norm(v))
        if n == 0.0:
            raise DomainError("cannot build an imaginary unit from the zero vector")
        v = v / n
        return cls(float(v[0]), float(v[1]), float(v[2]))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.u1, self.u2, self.u3])

    def as_quaternion(self) -> Quaternion:
        return Quaternion(0.0, self.u1, self.u2, self.u3)

    def dot(self, other: "ImaginaryUnit") -> float:
        return self.u1 * other.u1 + self.u2 * other.u2 + self.u3 * other.u3


I_UNIT = ImaginaryUnit(1.0, 0.0, 0.0)
J_UNIT = ImaginaryUnit(0.0, 1.0, 0.0)
K_UNIT = ImaginaryUnit(0.0, 0.0, 1.0)

ONE = Quaternion(1.0)
ZERO = Quaternion()

UnitLike = Union[ImaginaryUnit, Quaternion]


def as_unit(u) -> ImaginaryUnit:
    if isinstance(u, ImaginaryUnit):
        return u
    q = Quaternion.coerce(u)
    if abs(q.x0) > UNIT_TOL:
        raise DomainError(f"imaginary unit must be a pure quaternion, got {q!r}")
    return ImaginaryUnit(q.x1, q.x2, q.x3)


@dataclass(frozen=True)
class SliceForm:
    """q = x + y*unit with y >= 0.  For real q the unit is the caller's default."""

    x: float
    y: float
    unit: ImaginaryUnit
    is_real: bool

    def reassemble(self) -> Quaternion:
        u = self.unit
        return Quaternion(self.x, self.y * u.u1, self.y * u.u2, self.y * u.u3)

    @property
    def z(self) -> complex:
        """The image of q in the complex plane under x + yI -> x + iy."""
        return complex(self.x, self.y)


def quat_mul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product ``a*b``."""
    a0, a1, a2, a3 = a.x0, a.x1, a.x2, a.x3
    b0, b1, b2, b3 = b.x0, b.x1, b.x2, b.x3
    return Quaternion(
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    )


def conj_norm(q: Quaternion) -> tuple[Quaternion, float]:
    return q.conj(), abs(q)


def slice_decompose(q: Quaternion, default_unit: ImaginaryUnit = I_UNIT) -> SliceForm:
    q = Quaternion.coerce(q)
    y = math.hypot(q.x1, q.x2, q.x3)
    if y == 0.0:
        return SliceForm(q.x0, 0.0, as_unit(default_unit), True)
    unit = ImaginaryUnit(q.x1 / y, q.x2 / y, q.x3 / y)
    return SliceForm(q.x0, y, unit, False)


def from_complex(z: complex, unit: ImaginaryUnit) -> Quaternion:
    """Embed ``z = a + ib`` into the slice of ``unit`` as ``a + b*unit``."""
    a, b = z.real, z.imag
    return Quaternion(a, b * unit.u1, b * unit.u2, b * unit.u3)


def quat_pow(q: Quaternion, n: int) -> Quaternion:
    """q**n, computed in the slice of q by de Moivre's formula."""
    if n < 0:
        raise DomainError("quat_pow needs a nonnegative exponent")
    if n == 0:
        return ONE
    s = slice_decompose(q)
    r = math.hypot(s.x, s.y)
    if r == 0.0:
        return ZERO
    theta = math.atan2(s.y, s.x)
    rn = r ** n
    return from_complex(complex(rn * math.cos(n * theta), rn * math.sin(n * theta)), s.unit)


def random_unit(seed: int) -> ImaginaryUnit:
    """Deterministic, uniformly distributed point of the unit 2-sphere."""
    rng = np.random.default_rng(seed)
    while True:
        v = rng.normal(size=3)
        n = float(np.linalg.norm(v))
        if n > 1e-8:
            return ImaginaryUnit.from_vector(v)


def perpendicular_unit(u: ImaginaryUnit) -> ImaginaryUnit:
    """Some unit orthogonal to ``u`` (deterministic)."""
    v = u.vector
    helper = np.eye(3)[int(np.argmin(np.abs(v)))]
    return ImaginaryUnit.from_vector(np.cross(v, helper))


# -- array helpers: last axis = 4 quaternion components -----------------------

def qmul(a, b) -> np.ndarray:
    """Broadcasting Hamilton product on arrays of shape (..., 4)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a0, a1, a2, a3 = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    b0, b1, b2, b3 = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ],
        axis=-1,
    )


def qconj(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a[..., 1:] *= -1.0
    return a


def qabs(a) -> np.ndarray:
    return np.linalg.norm(np.asarray(a, dtype=float), axis=-1)


def embed(z, unit: ImaginaryUnit) -> np.ndarray:
    """Map complex array ``z`` into the slice of ``unit``: shape (..., 4)."""
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape + (4,))
    out[..., 0] = z.real
    out[..., 1:] = z.imag[..., None] * unit.vector
    return out


def embed_many(z, units) -> np.ndarray:
    """Like :func:`embed` with a per-element unit array ``units`` of shape (..., 3)."""
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape + (4,))
    out[..., 0] = z.real
    out[..., 1:] = z.imag[..., None] * units
    return out


def decompose_many(q, default_unit: ImaginaryUnit = I_UNIT):
    """Vectorized slice decomposition.

    Returns ``(z, units)`` with ``z = x + iy`` complex (y >= 0) and ``units`` of
    shape (..., 3); real points get ``default_unit``.
    """
    q = np.asarray(q, dtype=float)
    im = q[..., 1:]
    y = np.linalg.norm(im, axis=-1)
    units = np.empty_like(im)
    nz = y > 0
    units[nz] = im[nz] / y[nz][:, None]
    units[~nz] = default_unit.vector
    return q[..., 0] + 1j * y, units
