"""Numerics for the slice Cholewinski-Fock space of quaternionic entire functions."""

__version__ = "0.1.0"

from .errors import ConvergenceError, DomainError
from .fock import (
    FockElement,
    KernelValue,
    basis_phi,
    eval_bound,
    inner_product,
    kernel_K,
    kernel_L,
    norm,
    norm2,
)
from .operators import OperatorReport, op_A, op_D, op_M, verify_identities
from .quadrature import (
    DEFAULT_SPEC,
    Certificate,
    LineMeasure,
    QuadratureSpec,
    SliceMeasure,
    fock_inner_quad,
    line_integral,
    moment_E,
    moment_O,
    slice_integral,
)
from .quaternion import I_UNIT, J_UNIT, K_UNIT, ImaginaryUnit, Quaternion, SliceForm, slice_decompose
from .series import SliceSeries, evaluate, slice_derivative
from .special import beta_n, bessel_K, gamma_fn, mellin_K
from .transforms import (
    HermiteExpansion,
    T_alpha_coeff,
    T_alpha_quad,
    T_inverse_quad,
    dunkl,
    hermite_H,
    hermite_h,
    kernel_C,
    kernel_orthogonality_check,
)
