import json
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from slicefock.fock import basis_phi, evaluate_many, kernel_L, norm, norm2
from slicefock.quadrature import LineMeasure
from slicefock.quaternion import I_UNIT, J_UNIT, Quaternion, random_unit
from slicefock.transforms import (
    HermiteExpansion,
    L_complex,
    T_alpha_coeff,
    T_alpha_dunkl_quad,
    T_alpha_inverse_coeff,
    T_alpha_quad,
    T_inverse_quad,
    dunkl,
    dunkl_coeff,
    hermite_H,
    hermite_h,
    kernel_C,
    kernel_C_series,
    kernel_orthogonality_check,
    line_norm2,
)

from conftest import alphas

i = Quaternion(0, 1, 0, 0)
j = Quaternion(0, 0, 1, 0)


def classical_hermite(n, x):
    h0, h1 = 1.0, 2 * x
    if n == 0:
        return h0
    for k in range(1, n):
        h0, h1 = h1, 2 * x * h1 - 2 * k * h0
    return h1


def L_oracle(w, alpha):
    # L_alpha(w) = 0F1(; a+1; w^2/4) + w / (2(a+1)) 0F1(; a+2; w^2/4)
    with mp.workdps(40):
        a = mp.mpf(alpha)
        w = mp.mpc(w)
        v = mp.hyp0f1(a + 1, w * w / 4) + w / (2 * (a + 1)) * mp.hyp0f1(a + 2, w * w / 4)
        return complex(v)


def test_hermite_polynomial_examples():
    assert hermite_H(0, 0.3, 1.3) == 1.0
    assert hermite_H(1, 0.7, 1.3) == pytest.approx(1.4, rel=1e-15)
    for n in range(9):
        assert hermite_H(n, 0.7, -0.5) == pytest.approx(classical_hermite(n, 0.7), rel=1e-12, abs=1e-12)


def test_hermite_function_examples():
    for a in (-0.5, 0.5, 1.3):
        assert hermite_h(3, -1.1, a) == pytest.approx(-hermite_h(3, 1.1, a), rel=1e-15)
        assert hermite_h(0, 0.0, a) == pytest.approx(2 ** ((a + 1) / 2), rel=1e-15)


def test_hermite_functions_orthonormal():
    a = 0.5
    for n in range(9):
        for m in range(n, 9):
            phi = lambda x, n=n, m=m: hermite_h(n, x, a) * hermite_h(m, x, a)
            from slicefock.quadrature import line_integral

            assert abs(line_integral(phi, LineMeasure(a)) - float(n == m)) < 1e-7


def test_hermite_large_degree_is_finite():
    v = hermite_h(30, np.linspace(-3, 3, 7), 1.3)
    assert np.all(np.isfinite(v))


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 0.5, 1.3])
@pytest.mark.parametrize("w", [0.3, -2.0 + 1.0j, 4.5j, -8.0j, 12.0 + 3.0j, -15.0j, 25.0 - 5.0j, -20.0])
def test_L_complex_against_mpmath(alpha, w):
    ref = L_oracle(w, alpha)
    # the natural scale is L(|w|) >= |L(w)|: for Re w << 0 the terms cancel
    scale = L_oracle(abs(w), alpha).real
    assert abs(L_complex(np.array([w]), alpha)[0] - ref) <= 1e-13 * scale


def test_L_complex_at_minus_half_is_exponential():
    w = np.array([0.5, 3j, -11j, 14.0 + 2j])
    assert np.allclose(L_complex(w, -0.5), np.exp(w), rtol=1e-13)


def test_kernel_C_examples():
    for a in (-0.5, 0.0, 1.3):
        v = kernel_C(Quaternion(), 0.8, a).value
        assert abs(v - Quaternion(2 ** ((a + 1) / 2) * math.exp(-0.32))) < 1e-15
    p = Quaternion(0.3, 0.4, 0, 0)
    assert abs(kernel_C(p, 0.9, 0.0).value - kernel_C_series(p, 0.9, 0.0)) < 1e-9


@given(st.integers(0, 10_000), alphas)
def test_kernel_C_conjugation(seed, a):
    rng = np.random.default_rng(seed)
    q = Quaternion(*rng.uniform(-1.5, 1.5, 4))
    x = float(rng.uniform(-2, 2))
    assert abs(kernel_C(q, x, a).value.conj() - kernel_C(q.conj(), x, a).value) < 1e-13


def test_T_coeff_examples():
    a = 0.4
    f = T_alpha_coeff(HermiteExpansion.basis(0, a))
    assert f.coeffs.tolist() == basis_phi(0, a).coeffs.tolist()
    assert norm2(T_alpha_coeff(HermiteExpansion(np.zeros((3, 4)), a))) == 0.0
    phi = HermiteExpansion([[0, 0, 0, 0], i.array, j.array], a)
    assert norm2(T_alpha_coeff(phi)) == pytest.approx(2.0, rel=1e-15)


@given(st.integers(0, 10_000), alphas)
def test_T_coeff_isometry_and_inverse(seed, a):
    rng = np.random.default_rng(seed)
    phi = HermiteExpansion(rng.normal(size=(7, 4)), a)
    f = T_alpha_coeff(phi)
    assert norm2(f) == pytest.approx(phi.norm2(), rel=1e-13)
    assert np.allclose(T_alpha_inverse_coeff(f).coeffs, phi.coeffs, rtol=1e-14, atol=0)


def test_T_quad_examples():
    a = 0.5
    m = LineMeasure(a)
    q = Quaternion(0.5, 0, 0.2, 0)
    h3 = HermiteExpansion.basis(3, a)
    assert abs(T_alpha_quad(h3, q, m) - basis_phi(3, a)(q)) < 1e-7
    assert abs(T_alpha_quad(lambda x: np.zeros(x.shape + (4,)), q, m)) == 0.0


def test_T_quad_estimate(rng):
    for _ in range(20):
        a = float(rng.choice([-0.5, 0.0, 0.5, 1.3]))
        phi = HermiteExpansion(rng.normal(size=(int(rng.integers(1, 7)), 4)), a)
        q = Quaternion(*rng.uniform(-1.2, 1.2, 4))
        bound = math.sqrt(kernel_L(q.norm2(), 1.0, a).value.real) * math.sqrt(phi.norm2())
        assert abs(T_alpha_quad(phi, q, LineMeasure(a))) <= bound * (1 + 1e-9)


def test_T_inverse_examples():
    a = 0.5
    assert abs(T_inverse_quad(basis_phi(2, a), 0.8) - Quaternion(hermite_h(2, 0.8, a))) < 1e-6
    zero = T_alpha_coeff(HermiteExpansion(np.zeros((3, 4)), a))
    assert abs(T_inverse_quad(zero, 0.3)) == 0.0
    rng = np.random.default_rng(2)
    f = T_alpha_coeff(HermiteExpansion(rng.normal(size=(6, 4)), a))
    v1 = T_inverse_quad(f, 0.4, random_unit(1))
    v2 = T_inverse_quad(f, 0.4, random_unit(2))
    assert abs(v1 - v2) < 1e-6


def test_T_inverse_vectorized_matches_scalar():
    a = 1.3
    f = basis_phi(5, a)
    xs = np.array([-1.0, 0.25, 1.7])
    vec = T_inverse_quad(f, xs, J_UNIT)
    for x, row in zip(xs, vec):
        assert np.allclose(row, T_inverse_quad(f, float(x), J_UNIT).array, rtol=0, atol=1e-14)
        assert abs(row[0] - hermite_h(5, x, a)) < 1e-6


def test_dunkl_gaussian_is_self_reproducing():
    m = LineMeasure(-0.5)
    gauss = lambda t: np.exp(-t * t / 2)
    for x in (0.0, 0.7, 1.9):
        v = dunkl(gauss, x, random_unit(0), m)
        assert abs(v - Quaternion(math.exp(-x * x / 2))) < 1e-6


def test_dunkl_at_zero_is_the_mean():
    a = 0.5
    phi = HermiteExpansion([[1, 0, 2, 0], [0, 1, 0, 0], [0.5, 0, 0, -1]], a)
    from slicefock.quadrature import line_integral

    mean = line_integral(phi, LineMeasure(a))
    assert abs(dunkl(phi, 0.0, I_UNIT, LineMeasure(a)) - mean) < 1e-12


def test_dunkl_quad_matches_eigenrelation():
    a = 1.3
    phi = HermiteExpansion(np.random.default_rng(4).normal(size=(6, 4)), a)
    u = random_unit(8)
    for x in (0.3, 1.0, 2.2):
        assert abs(dunkl(phi, x, u, LineMeasure(a)) - Quaternion.from_array(dunkl_coeff(phi, x, u))) < 1e-9


def test_dunkl_intertwining_example():
    a = 0.5
    psi = HermiteExpansion.basis(2, a)
    x = 0.6
    for u in (I_UNIT, random_unit(5)):
        lhs = T_alpha_dunkl_quad(psi, x, u, LineMeasure(a))
        rhs = T_alpha_quad(psi, Quaternion.from_array(-x * np.concatenate([[0.0], u.vector])), LineMeasure(a))
        assert abs(lhs - rhs) < 1e-6


def test_kernel_orthogonality_examples():
    a = 0.5
    assert kernel_orthogonality_check(Quaternion(), Quaternion(), a) < 1e-7
    q = Quaternion(0.7, 0.3, 0, 0)
    # || C(q, .) ||^2 = L(q, conj q) = L(|q|^2)
    c2 = line_norm2(lambda x: np.array([kernel_C(q, t, a).value.array for t in x]), a)
    assert c2 == pytest.approx(kernel_L(q.norm2(), 1.0, a).value.real, rel=1e-7)
    p, s = Quaternion(0.2, 0.5, -0.3, 0.1), Quaternion(-0.4, 0.0, 0.6, 0.3)
    assert kernel_orthogonality_check(p, s, a) < 1e-6


def test_hermite_expansion_json():
    phi = HermiteExpansion(np.random.default_rng(0).normal(size=(4, 4)), 0.75)
    back = HermiteExpansion.from_json(phi.to_json())
    assert back.alpha == phi.alpha and np.array_equal(back.coeffs, phi.coeffs)
    with pytest.raises(ValueError):
        HermiteExpansion.from_json(json.dumps({"coeffs": [[1, 0, 0, 0]]}))
    with pytest.raises(ValueError):
        HermiteExpansion.from_json(json.dumps({"alpha": "x", "coeffs": [[1, 0, 0, 0]]}))


def test_T_quad_is_cross_check_of_coefficient_path():
    a = 0.0
    phi = HermiteExpansion(np.random.default_rng(9).normal(size=(5, 4)), a)
    f = T_alpha_coeff(phi)
    pts = np.random.default_rng(10).uniform(-1, 1, size=(5, 4))
    ref = evaluate_many(f, pts)
    for p, r in zip(pts, ref):
        assert abs(T_alpha_quad(phi, Quaternion.from_array(p), LineMeasure(a)) - Quaternion.from_array(r)) < 1e-7 * max(1, norm(f))
