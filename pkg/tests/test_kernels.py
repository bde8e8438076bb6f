import numpy as np
import pytest
from scipy import special

from harmbesov.expansion import MultiIndex
from harmbesov.kernels import (
    KernelConvergenceError, KernelSpec, kernel_deriv, kernel_eval, kernel_multiplied, kernel_truncate,
)
from harmbesov.numeric import DerivPair, DomainError, gamma_coeffs

from conftest import ball_points


def _legendre_series(alpha, x, y, K=400):
    # n = 3: Z_k(x, y) = (2k+1) P_k(cos) |x|^k |y|^k
    rx, ry = np.linalg.norm(x), np.linalg.norm(y)
    c = x @ y / (rx * ry)
    k = np.arange(K + 1)
    return float(np.sum(gamma_coeffs(3, alpha, K) * (2 * k + 1) * special.eval_legendre(k, c) * (rx * ry) ** k))


def test_disc_closed_form(rng):
    X = ball_points(rng, 2, 40, 0.97)
    Y = ball_points(rng, 2, 40, 0.97)
    z = X[:, 0] + 1j * X[:, 1]
    w = Y[:, 0] + 1j * Y[:, 1]
    ref = 2 * np.real(1 / (1 - z * np.conj(w)) ** 2) - 1
    np.testing.assert_allclose(kernel_eval(KernelSpec(2, 0.0), X, Y).value, ref, rtol=1e-12)


@pytest.mark.parametrize("alpha", [-3.5, -1.0, 0.0, 2.5])
def test_ball_series_against_legendre(alpha, rng):
    for x, y in zip(ball_points(rng, 3, 5, 0.8), ball_points(rng, 3, 5, 0.8)):
        v = kernel_eval(KernelSpec(3, alpha), x, y)
        assert v.value == pytest.approx(_legendre_series(alpha, x, y), rel=1e-11)
        assert v.tail_bound <= 1e-14 * abs(v.value) + 1e-300


def test_origin_and_symmetry(rng):
    X = ball_points(rng, 3, 20, 0.99)
    Y = ball_points(rng, 3, 20, 0.99)
    for a in (-3.0, 0.0, 1.5):
        spec = KernelSpec(3, a)
        np.testing.assert_allclose(kernel_eval(spec, X, np.zeros(3)).value, 1.0, rtol=0, atol=1e-15)
        np.testing.assert_allclose(kernel_eval(spec, X, Y).value, kernel_eval(spec, Y, X).value, rtol=1e-12)


def test_fixed_truncation_matches_truncated_expansion(rng):
    spec = KernelSpec(2, 1.5, K=30)
    y = np.array([0.5, -0.7])
    x = np.array([0.2, 0.3])
    assert kernel_eval(spec, x, y).value == pytest.approx(kernel_truncate(spec, y, 30)(x).real, rel=1e-13)
    one = kernel_truncate(KernelSpec(3, 0.5), np.ones(3) / np.sqrt(3), 0)
    assert one(np.array([0.4, 0.1, 0.0])) == pytest.approx(1.0)


def test_derivatives_finite_difference(rng):
    spec = KernelSpec(3, -0.5)
    h = 1e-6
    for x, y in zip(ball_points(rng, 3, 4, 0.8), ball_points(rng, 3, 4, 0.9)):
        g = np.array([kernel_deriv(spec, MultiIndex(tuple(e)), x, y).value for e in np.eye(3, dtype=int)])
        fd = np.array([(kernel_eval(spec, x + h * e, y).value - kernel_eval(spec, x - h * e, y).value) / (2 * h)
                       for e in np.eye(3)])
        np.testing.assert_allclose(g, fd, rtol=1e-6, atol=1e-8)
        H = spec.series().hessian(x, y)
        assert abs(np.trace(H)) <= 1e-10 * np.max(np.abs(H))
    m0 = kernel_deriv(spec, MultiIndex((0, 0, 0)), x, y)
    assert m0.value == kernel_eval(spec, x, y).value


def test_multiplied_kernels(rng):
    X = ball_points(rng, 3, 20, 0.95)
    Y = ball_points(rng, 3, 20, 0.95)
    base = KernelSpec(3, 0.7)
    np.testing.assert_allclose(kernel_multiplied(base, DerivPair(0.3, 0.0))(X, Y), kernel_eval(base, X, Y).value)
    there = kernel_multiplied(base, DerivPair(-1.0, 2.5))
    back = kernel_multiplied(there, DerivPair(1.5, -2.5))
    np.testing.assert_allclose(back(X, Y), kernel_eval(base, X, Y).value, rtol=1e-12)
    np.testing.assert_allclose(kernel_multiplied(base, DerivPair(0.7, 1.3))(X, Y),
                               kernel_eval(KernelSpec(3, 2.0), X, Y).value, rtol=1e-12)


def test_errors():
    with pytest.raises(DomainError):
        KernelSpec(2, 0.0, tail_tol=0.0)
    with pytest.raises(DomainError):
        KernelSpec(2, 0.0, K_cap=0)
    with pytest.raises(DomainError):
        kernel_eval(KernelSpec(2, 0.0), np.array([1.0, 0.0]), np.zeros(2))
    # near the diagonal the certified series refuses
    with pytest.raises(KernelConvergenceError):
        kernel_eval(KernelSpec(2, 0.0), np.array([0.9995, 0.0]), np.array([1.0, 0.0]))
    with pytest.raises(KernelConvergenceError) as info:
        kernel_eval(KernelSpec(3, 2.0, K_cap=20), np.array([0.9, 0, 0]), np.array([0.9, 0, 0]))
    assert info.value.tail_bound > 0 and info.value.degree == 20
    with pytest.raises(DomainError):
        kernel_deriv(KernelSpec(2, 0.0), MultiIndex((2, 1)), np.zeros(2), np.zeros(2))


def test_estimate_shadow_bounded():
    # |R_alpha(x, zeta)| [x, zeta]^(n+alpha) stays bounded along a ray to the boundary
    zeta = np.array([0.0, 0.0, 1.0])
    eps = np.geomspace(1.5e-3, 0.5, 30)
    X = (1 - eps)[:, None] * zeta
    for a in (0.0, 1.5):
        v = np.abs(kernel_eval(KernelSpec(3, a), X, np.tile(zeta, (30, 1))).value) * (eps ** (3 + a))
        assert np.all(np.isfinite(v)) and v.max() / v.min() < 20
