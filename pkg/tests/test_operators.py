import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from slicefock.errors import DomainError
from slicefock.fock import FockElement, basis_phi, inner_product, norm2, random_element
from slicefock.operators import (
    OperatorReport,
    commutator_residual,
    op_A,
    op_D,
    op_D_two_term,
    op_M,
    verify_identities,
)
from slicefock.quaternion import Quaternion
from slicefock.series import SliceSeries, slice_derivative
from slicefock.special import beta_n

from conftest import alphas


def test_M_examples(rng):
    one = FockElement(SliceSeries([[1, 0, 0, 0]]), 0.3)
    assert op_M(one).coeffs.tolist() == [[0, 0, 0, 0], [1, 0, 0, 0]]
    a = 1.3
    for n in range(6):
        m = op_M(basis_phi(n, a))
        factor = math.sqrt(beta_n(n + 1, a) / beta_n(n, a))
        assert np.allclose(m.coeffs, factor * basis_phi(n + 1, a).coeffs, rtol=1e-14, atol=0)
    f = random_element(rng, 7, a)
    expected = sum(beta_n(n + 1, a) * np.sum(f.coeffs[n] ** 2) for n in range(8))
    assert norm2(op_M(f)) == pytest.approx(expected, rel=1e-14)


def test_D_examples(rng):
    for a in (-0.5, 0.0, 0.7):
        assert not np.any(op_D(FockElement(SliceSeries([[3, 1, 0, 2]]), a)).coeffs)
        q = FockElement(SliceSeries([[0, 0, 0, 0], [1, 0, 0, 0]]), a)
        assert op_D(q).coeffs.tolist() == [[2 * (a + 1), 0, 0, 0]]
    f = random_element(rng, 9, -0.5)
    assert np.array_equal(op_D(f).coeffs, slice_derivative(f.series).coeffs)


@given(st.integers(0, 10_000), alphas)
def test_D_matches_two_term_form(seed, a):
    rng = np.random.default_rng(seed)
    f = random_element(rng, 8, a)
    q = Quaternion(*rng.uniform(-1.5, 1.5, 4))
    if q.norm2() < 1e-2:
        q = q + 0.5
    ref = op_D_two_term(f, q)
    assert abs(op_D(f)(q) - ref) <= 1e-11 * max(1.0, abs(ref))


def test_A_examples(rng):
    even = FockElement(SliceSeries([[1, 2, 0, 0], [0] * 4, [0, 0, 1, 0]]), 0.0)
    assert op_A(even).coeffs.tolist() == even.coeffs.tolist()
    cube = FockElement(SliceSeries.monomial(3), 0.0)
    assert op_A(cube).coeffs[3].tolist() == [-1, 0, 0, 0]
    f = random_element(rng, 7, 0.2)
    assert np.array_equal(op_A(op_A(f)).coeffs, f.coeffs)
    q = Quaternion(0.3, -0.2, 0.9, 0.1)
    assert abs(op_A(f)(q) - f(-q)) < 1e-13


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.3])
def test_commutator_eigenvalue_on_basis(alpha):
    for n in range(10):
        phi = basis_phi(n, alpha)
        lhs = op_D(op_M(phi)).coeffs[n] - op_M(op_D(phi)).coeffs[n]
        eig = 1 + (2 * alpha + 1) * (-1) ** n
        assert lhs[0] == pytest.approx(eig * phi.coeffs[n, 0], rel=1e-12, abs=1e-15)


def test_verify_identities_example():
    rng = np.random.default_rng(6)
    f, g = random_element(rng, 6, 0.7), random_element(rng, 6, 0.7)
    rep = verify_identities(f, g)
    assert rep.passed
    assert max(rep.adjointness, rep.commutator, rep.norm_relation) < 1e-11
    d = json.loads(rep.to_json())
    assert set(d) == {"adjointness", "commutator", "norm_relation", "tol", "passed"}


def test_classical_commutator_is_identity():
    rng = np.random.default_rng(1)
    f = FockElement(SliceSeries(rng.integers(-8, 9, size=(9, 4)) / 8.0), -0.5)
    assert commutator_residual(f) == 0.0
    diff = op_D(op_M(f)).series - op_M(op_D(f)).series
    assert np.array_equal(diff.padded(f.degree + 1), f.series.padded(f.degree + 1))


@given(st.integers(0, 10_000), alphas)
def test_second_adjoint_identity(seed, a):
    rng = np.random.default_rng(seed)
    f, g = random_element(rng, 7, a), random_element(rng, 5, a)
    lhs = inner_product(op_M(g), f)
    rhs = inner_product(g, op_D(f))
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


def test_alpha_mismatch():
    with pytest.raises(DomainError):
        verify_identities(basis_phi(1, 0.0), basis_phi(1, 0.5))


def test_report_pass_rule():
    assert not OperatorReport(0.0, 2e-11, 0.0, 1e-11).passed
    assert OperatorReport(0.0, 0.0, 0.0, 1e-11).passed
