import warnings

import numpy as np
import pytest

from harmbesov.numeric import DomainError, volume_const
from harmbesov.quadrature import (
    QuadratureWarning, axial_rotations, build_ball_rule, build_focused_rule, refine, segment_rule,
    sphere_rule, translated_rule,
)


@pytest.mark.parametrize("n,M", [(2, 32), (3, 302)])
@pytest.mark.parametrize("jac", [0.0, -0.5, 1.0, 2.5])
def test_product_rule_mass_and_moments(n, M, jac):
    rule = build_ball_rule(n, 10, M, jac)
    assert np.sum(rule.weights) == pytest.approx(1.0, abs=1e-12)
    assert np.all(rule.weights > 0)
    x = rule.nodes
    # odd moments vanish, int x_1^2 dnu = 1/(n+2) (unweighted)
    assert abs(rule.integrate(x[:, 0] * x[:, 1] ** 2, jac)) < 1e-14
    if jac == 0.0:
        assert rule.integrate(x[:, 0] ** 2) == pytest.approx(1.0 / (n + 2), rel=1e-12)
        for m in (1, 2, 5):
            assert rule.integrate(np.sum(x * x, axis=1) ** m) == pytest.approx(n / (n + 2 * m), rel=1e-12)
    np.testing.assert_allclose(rule.onem, 1.0 - np.sum(x * x, axis=1), atol=1e-15)


def test_weighted_volume_oracle():
    rule = build_ball_rule(2, 8, 16, 0.0)
    # int (1-|x|^2) dnu over the disc is V_1 = 1/2
    assert rule.integrate(rule.onem) == pytest.approx(0.5, rel=1e-14)
    r3 = build_ball_rule(3, 8, 50, 0.5)
    assert r3.integrate(r3.onem, 0.5) == pytest.approx(volume_const(3, 1.5) / volume_const(3, 0.5), rel=1e-13)


def test_monomial_exactness():
    rng = np.random.default_rng(3)
    rule = build_ball_rule(3, 6, 110, 0.0)
    deg = rule.exactness
    assert deg == min(22, 17)
    # monomials x^a y^b z^c with a, b, c even: closed form via Gamma functions
    from scipy.special import gamma

    for _ in range(6):
        a, b, c = 2 * rng.integers(0, 3, 3)
        if a + b + c > deg:
            continue
        x = rule.nodes
        val = rule.integrate(x[:, 0] ** a * x[:, 1] ** b * x[:, 2] ** c)
        sph = 2 * gamma((a + 1) / 2) * gamma((b + 1) / 2) * gamma((c + 1) / 2) / gamma((a + b + c + 3) / 2)
        ref = 3 * sph / (4 * np.pi) / (a + b + c + 3)
        assert val == pytest.approx(ref, rel=1e-10)


def test_mismatched_weight_warns():
    rule = build_ball_rule(2, 6, 8, 1.0)
    with pytest.warns(QuadratureWarning):
        rule.weights_for(0.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        rule.weights_for(2.0)


def test_general_dimension_falls_back():
    with pytest.warns(QuadratureWarning):
        rule = build_ball_rule(4, 6, 64)
    assert rule.meta["fallback"] == "qmc"
    assert np.sum(rule.weights) == pytest.approx(1.0)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("jac", [0.0, -0.5, 1.5])
def test_focused_rule_mass(n, jac):
    zeta = np.ones(n) / np.sqrt(n)
    rule = build_focused_rule(n, zeta, 8, 8, jac, azimuth=8)
    assert np.sum(rule.weights) == pytest.approx(1.0, abs=1e-12)
    x = rule.nodes
    assert rule.integrate(x[:, 0] ** 2, jac) * volume_const(n, jac) == pytest.approx(
        (volume_const(n, jac) - volume_const(n, jac + 1)) / n, rel=1e-8)


def test_focused_rule_resolves_peak():
    # int (1-|x|^2)^b / |x - zeta|^(n+b+s) dnu has the closed form at x-center 0: use R_c-type peak
    zeta = np.array([1.0, 0.0])
    rule = build_focused_rule(2, zeta, 8, 8)
    w = 0.999 * zeta
    f = 1.0 / np.abs(1 - (rule.nodes[:, 0] + 1j * rule.nodes[:, 1]) * (w[0] - 1j * w[1])) ** 2
    # int_D |1 - z conj(w)|^-2 dnu = log(1/(1-|w|^2)) / |w|^2
    ref = np.log(1 / (1 - w @ w)) / (w @ w)
    assert rule.integrate(f) == pytest.approx(ref, rel=1e-8)


def test_axial_rotations_reproduce_nodes():
    rule = build_focused_rule(3, [0.0, 0.6, 0.8], 4, 4, azimuth=6)
    Q = axial_rotations(rule)
    nr, nt, m = rule.meta["layout"]
    X = rule.nodes.reshape(nr, nt, m, 3)
    np.testing.assert_allclose(np.einsum("jab,rtb->rtja", Q, X[:, :, 0, :]), X, atol=1e-14)
    assert axial_rotations(build_ball_rule(3, 4, 26)) is None


def test_refine_doubles():
    rule = build_ball_rule(2, 5, 12)
    r2 = refine(rule)
    assert r2.size == 4 * rule.size
    f = build_focused_rule(2, [1.0, 0.0], 4, 4)
    assert refine(f).meta["radial"] == "graded-8"


def test_segment_rule():
    for b in (-0.5, 0.0, 2.0):
        tau, w = segment_rule(12, b)
        assert np.sum(w) == pytest.approx(1.0 / (b + 1.0), rel=1e-12)
        assert np.sum(w * tau) == pytest.approx(1.0 / (b + 1.0) - 1.0 / (b + 2.0), rel=1e-12)
    with pytest.raises(DomainError):
        segment_rule(4, -1.0)


def test_translated_rule():
    rule = build_ball_rule(3, 4, 26)
    nodes, w = translated_rule(rule, [0.2, 0.1, 0.0], 0.5)
    assert np.sum(w) == pytest.approx(0.125)
    with pytest.raises(DomainError):
        translated_rule(rule, [0.6, 0.0, 0.0], 0.5)
    with pytest.raises(DomainError):
        translated_rule(build_ball_rule(3, 4, 26, 1.0), [0.0, 0.0, 0.0], 0.5)


def test_sphere_rule_sizes():
    dirs, w, deg, meta = sphere_rule(3, 100)
    assert len(w) == 110 and deg == 17 and meta["sphere"] == "lebedev-17"
    np.testing.assert_allclose(np.linalg.norm(dirs, axis=1), 1.0)
