import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import kve

from slicefock.errors import DomainError
from slicefock.special import (
    beta_n,
    beta_ratio,
    bessel_I,
    bessel_K,
    bessel_K_scaled,
    check_alpha,
    gamma_fn,
    log_beta_n,
    mellin_K,
)
from slicefock.quadrature import mellin_quad

ALPHAS = (-0.5, 0.0, 0.5, 1.3)


def test_gamma_values():
    assert gamma_fn(1.0) == 1.0
    assert math.isclose(gamma_fn(0.5), math.sqrt(math.pi), rel_tol=1e-15)
    x = 1.3
    lhs = gamma_fn(x) * gamma_fn(x + 0.5) / gamma_fn(2 * x)
    assert math.isclose(lhs, math.sqrt(math.pi) * 2 ** (1 - 2 * x), rel_tol=1e-12)


@pytest.mark.parametrize("x", [0.0, -1.0, -7.0])
def test_gamma_poles(x):
    with pytest.raises(DomainError):
        gamma_fn(x)


def test_alpha_domain():
    with pytest.raises(DomainError):
        check_alpha(-0.6)
    with pytest.raises(DomainError):
        check_alpha(float("nan"))


def test_macdonald_closed_forms():
    assert math.isclose(bessel_K(0.5, 1.0), math.sqrt(math.pi / 2) / math.e, rel_tol=1e-12)
    assert math.isclose(bessel_K(0.7, 2.0), bessel_K(-0.7, 2.0), rel_tol=1e-10)
    assert math.isclose(bessel_K(0.0, 1.0), 0.4210244382407084, rel_tol=1e-12)


def test_macdonald_domain():
    with pytest.raises(DomainError):
        bessel_K(0.3, 0.0)


@pytest.mark.parametrize("nu", [0.0, 0.3, 0.5, 1.3, 2.3])
def test_macdonald_against_scipy(nu):
    # scipy is the external oracle here, not part of the implementation
    x = np.geomspace(1e-6, 500.0, 60)
    assert np.allclose(bessel_K_scaled(nu, x), kve(nu, x), rtol=1e-12, atol=0)


def test_bessel_I_series():
    assert bessel_I(0.0, 0.0) == 1.0
    assert math.isclose(bessel_I(0.5, 1.0), math.sqrt(2 / math.pi) * math.sinh(1.0), rel_tol=1e-12)
    via_i = math.pi / 2 * (bessel_I(-0.3, 2.0) - bessel_I(0.3, 2.0)) / math.sin(0.3 * math.pi)
    assert math.isclose(via_i, bessel_K(0.3, 2.0), rel_tol=1e-8)


@pytest.mark.parametrize("nu", [0.3, 0.5, 0.7])
def test_macdonald_against_I_formula(nu):
    for x in np.linspace(0.5, 5.0, 10):
        via_i = math.pi / 2 * (bessel_I(-nu, x) - bessel_I(nu, x)) / math.sin(nu * math.pi)
        assert math.isclose(via_i, bessel_K(nu, x), rel_tol=1e-8)


def test_mellin_closed_form():
    assert mellin_K(2.0, 0.0) == 1.0
    assert math.isclose(mellin_K(2.5, 0.5), math.sqrt(2) * math.sqrt(math.pi) / 2, rel_tol=1e-15)
    with pytest.raises(DomainError):
        mellin_K(1.0, 1.0)


def test_mellin_numeric():
    assert math.isclose(mellin_quad(3.0, 0.5), mellin_K(3.0, 0.5), rel_tol=1e-8)


def test_beta_examples():
    for a in ALPHAS:
        assert beta_n(0, a) == 1.0
    for n in range(11):
        assert beta_n(n, -0.5) == math.factorial(n)
    assert beta_n(2, 1.0) == 8.0


@pytest.mark.parametrize("alpha", ALPHAS)
def test_beta_dominates_factorial(alpha):
    for n in range(31):
        assert math.factorial(n) <= beta_n(n, alpha) * (1 + 1e-15)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_beta_ratio(alpha):
    for n in range(31):
        expected = n + 1 + (2 * alpha + 1) / 2 * (1 + (-1) ** n)
        assert math.isclose(beta_n(n + 1, alpha) / beta_n(n, alpha), expected, rel_tol=1e-10)
        assert beta_ratio(n, alpha) == expected


@given(st.integers(min_value=0, max_value=200), st.floats(min_value=-0.5, max_value=20.0))
def test_beta_log_path_consistent(n, alpha):
    lb = log_beta_n(n, alpha)
    if lb > 709.0 and n > 60:
        with pytest.raises(DomainError):
            beta_n(n, alpha)
        return
    if lb > 700.0:
        return
    assert math.isclose(math.log(beta_n(n, alpha)), log_beta_n(n, alpha), rel_tol=1e-12, abs_tol=1e-12)
