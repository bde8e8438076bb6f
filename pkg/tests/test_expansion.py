import numpy as np
import pytest

from harmbesov.expansion import (
    HarmonicExpansion, MultiIndex, dilate, dst_apply, its_field, partial_deriv, radial_power,
    random_expansion,
)
from harmbesov.numeric import DerivPair, DomainError, gamma_coeffs
from harmbesov.zonal import zonal_coeffs, zonal_eval

from conftest import ball_points


def test_constant_and_single_term(rng):
    c = HarmonicExpansion.constant(3, 2 - 1j)
    x = rng.uniform(-0.5, 0.5, 3)
    assert c(x) == 2 - 1j
    y = np.array([0.2, -0.9, 0.1])
    u = HarmonicExpansion.from_terms(3, [(4, y, 1.0)])
    assert u(x) == pytest.approx(zonal_eval(zonal_coeffs(3, 4), x, y), rel=1e-13)


def test_linearity(rng):
    u = random_expansion(3, 6, 2, 1)
    v = random_expansion(3, 5, 1, 2)
    X = ball_points(rng, 3, 20)
    np.testing.assert_allclose((u + 2j * v)(X), u(X) + 2j * v(X), rtol=1e-12)
    np.testing.assert_allclose((u - v)(X), u(X) - v(X), rtol=1e-12)
    np.testing.assert_allclose(u.conj()(X), np.conj(u(X)), rtol=1e-13)


def test_gradient_hessian_finite_difference(rng):
    u = random_expansion(3, 7, 2, 5)
    h = 1e-5
    for x in ball_points(rng, 3, 5, 0.8):
        g = u.gradient(x)
        fd = np.array([(u(x + h * e) - u(x - h * e)) / (2 * h) for e in np.eye(3)])
        np.testing.assert_allclose(g, fd, rtol=1e-6, atol=1e-8)
        H = u.hessian(x)
        fdh = np.array([(u.gradient(x + h * e) - u.gradient(x - h * e)) / (2 * h) for e in np.eye(3)])
        np.testing.assert_allclose(H, fdh, rtol=1e-6, atol=1e-7)
        assert abs(np.trace(H)) <= 1e-9 * np.max(np.abs(H))


def test_partial_deriv_orders(rng):
    u = random_expansion(2, 5, 2, 9)
    x = np.array([0.3, -0.4])
    assert partial_deriv(u, MultiIndex((0, 0)), x) == u(x)
    assert partial_deriv(u, MultiIndex((1, 1)), x) == pytest.approx(u.hessian(x)[0, 1])
    with pytest.raises(DomainError):
        partial_deriv(u, MultiIndex((2, 1)), x)
    lin = HarmonicExpansion.from_terms(2, [(1, np.array([0.6, 0.8]), 1.5)])
    assert partial_deriv(lin, (1, 0), x) == pytest.approx(partial_deriv(lin, (1, 0), 2 * x))


def test_radial_power():
    u = random_expansion(3, 6, 1, 4)
    assert np.all(radial_power(HarmonicExpansion.constant(3), 1).coeffs == 0)
    np.testing.assert_allclose(radial_power(radial_power(u, 1), 1).coeffs, radial_power(u, 2).coeffs)
    np.testing.assert_array_equal(radial_power(u, 0).coeffs, u.coeffs)
    with pytest.raises(DomainError):
        radial_power(u, -1)


def test_dst_apply_examples():
    u = random_expansion(2, 10, 2, 11)
    assert dst_apply(u, DerivPair(1.3, 0.0)) is u
    v = dst_apply(u, DerivPair(0.0, 1.0))
    k = np.arange(11)
    # n = 2: gamma_k(1) / gamma_k(0) = (3)_k / (2)_k = (k + 2) / 2
    np.testing.assert_allclose(v.coeffs, u.coeffs * (k + 2) / 2, rtol=1e-14)


def test_its_field(rng):
    one = HarmonicExpansion.constant(3)
    f = its_field(one, DerivPair(0.5, 2.0))
    X = ball_points(rng, 3, 10)
    np.testing.assert_allclose(f(X), (1 - np.sum(X * X, axis=1)) ** 2, rtol=1e-14)
    u = random_expansion(3, 4, 1, 3)
    np.testing.assert_allclose(its_field(u, DerivPair(0.0, 0.0))(X), u(X))
    assert its_field(u, DerivPair(1.0, 1.0))(np.zeros(3)) == pytest.approx(dst_apply(u, DerivPair(1.0, 1.0))(np.zeros(3)))
    with pytest.raises(DomainError):
        f(np.array([1.0, 0.0, 0.0]))


def test_dilate():
    u = random_expansion(3, 8, 1, 6)
    np.testing.assert_array_equal(dilate(u, 1.0).coeffs, u.coeffs)
    d = DerivPair(-1.5, 2.0)
    np.testing.assert_allclose(dilate(dst_apply(u, d), 0.7).coeffs, dst_apply(dilate(u, 0.7), d).coeffs, rtol=1e-14)
    x = np.array([0.1, 0.5, -0.3])
    assert dilate(u, 0.6)(x) == pytest.approx(u(0.6 * x), rel=1e-12)
    c = HarmonicExpansion.constant(3, 3.0)
    assert dilate(c, 0.2)(x) == 3.0
    with pytest.raises(DomainError):
        dilate(u, 1.5)


def test_random_expansion_contract():
    a = random_expansion(3, 5, 2, 42)
    b = random_expansion(3, 5, 2, 42)
    np.testing.assert_array_equal(a.coeffs, b.coeffs)
    np.testing.assert_array_equal(a.poles, b.poles)
    np.testing.assert_allclose(np.linalg.norm(a.poles, axis=1), 1.0)
    c = random_expansion(2, 0, 3, 1)
    assert c.max_degree == 0
    assert c(np.array([0.3, 0.3])) == pytest.approx(c(np.zeros(2)))


def test_text_round_trip():
    u = random_expansion(3, 6, 2, 8)
    v = HarmonicExpansion.from_text(u.to_text())
    x = np.array([0.2, -0.1, 0.6])
    assert v(x) == pytest.approx(u(x), rel=1e-15)
    assert u.to_text().splitlines()[0] == "# harmonic-expansion n=3"
    with pytest.raises(ValueError):
        HarmonicExpansion.from_text("# harmonic-expansion n=3\n1 0.5 0.5 0 0\n")


def test_degree_kernel_truncation_identity():
    from harmbesov.kernels import KernelSpec, kernel_truncate

    y = np.array([0.3, 0.4, 0.0])
    a = dst_apply(kernel_truncate(KernelSpec(3, -2.0), y, 25), DerivPair(-2.0, 3.0))
    b = kernel_truncate(KernelSpec(3, 1.0), y, 25)
    np.testing.assert_allclose(a.coeffs, b.coeffs, rtol=1e-13)
    np.testing.assert_allclose(b.coeffs[0], gamma_coeffs(3, 1.0, 25), rtol=1e-15)
