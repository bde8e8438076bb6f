import math
import re

import numpy as np
import pytest
from scipy import integrate, special

from harmbesov.numeric import (
    CoeffSequence, DomainError, SpaceParams, bracket, gamma_coeff, gamma_coeffs, gamma_sequence,
    multiplier_sequence, pochhammer, stirling_ratio, volume_const,
)


@pytest.mark.parametrize("a,b", [(0.5, 3), (2.25, 7.5), (-2.5, 3), (-0.5, 0.25), (1.0, 40)])
def test_pochhammer_matches_scipy(a, b):
    assert pochhammer(a, b) == pytest.approx(special.poch(a, b), rel=1e-13)


def test_pochhammer_examples():
    assert pochhammer(2.7, 0) == 1.0
    assert pochhammer(1.0, 3) == 6.0
    assert pochhammer(0.5, 2) == 0.75


@pytest.mark.parametrize("a,b,bad", [(-3.0, 2, "a="), (0.0, 1, "a="), (0.5, -1.5, "a+b=")])
def test_pochhammer_pole_names_argument(a, b, bad):
    with pytest.raises(DomainError, match=re.escape(bad)):
        pochhammer(a, b)


def test_gamma_coeff_examples():
    assert gamma_coeff(5, -1.7, 0) == 1.0
    assert gamma_coeff(2, 0.0, 3) == pytest.approx(4.0, rel=1e-15)
    assert gamma_coeff(2, -3.0, 1) == pytest.approx(1 / 3, rel=1e-15)
    assert stirling_ratio(2, 0.0, 1) == pytest.approx(2.0, rel=1e-14)
    assert stirling_ratio(2, 0.0, 1000) == pytest.approx(stirling_ratio(2, 0.0, 4000), rel=0.02)


def test_branch_boundary_takes_second_branch():
    # alpha = -(1 + n/2) exactly
    assert gamma_coeff(2, -2.0, 4) == pytest.approx(_gamma_direct(2, -2.0, 4), rel=1e-14)
    # (1)_1^2 / ((1 - (1 - 2))_1 (1)_1) = 1/2; the first branch would give (1)_1/(1)_1 = 1
    assert gamma_coeff(2, -2.0, 1) == pytest.approx(0.5, rel=1e-15)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("alpha", [-3.0, -1.0, 0.0, 1.5, 2.0])
def test_stirling_band(n, alpha):
    r = stirling_ratio(n, alpha, np.arange(500, 4001))
    assert r.max() / r.min() <= 1.05


def test_coefficient_ratio_tends_to_one():
    for n, a in ((2, 0.0), (3, 1.5), (3, -2.0)):
        c = gamma_coeffs(n, a, 10**4)
        assert np.all(np.abs(c[1001:] / c[1000:-1] - 1) <= 0.01)


def _gamma_direct(n, alpha, k):
    h = n / 2
    if alpha > -(1 + h):
        return special.poch(1 + h + alpha, k) / special.poch(h, k)
    return special.factorial(k) ** 2 / (special.poch(1 - h - alpha, k) * special.poch(h, k))


@pytest.mark.parametrize("n", [2, 3, 5])
@pytest.mark.parametrize("alpha", [-4.5, -3.0, -2.0, -1.0, 0.0, 1.5, 2.5])
def test_gamma_coeffs_against_direct_formula(n, alpha):
    c = gamma_coeffs(n, alpha, 30)
    ref = np.array([_gamma_direct(n, alpha, k) for k in range(31)])
    np.testing.assert_allclose(c, ref, rtol=1e-12)
    assert gamma_coeff(n, alpha, 17) == pytest.approx(ref[17], rel=1e-12)


def test_gamma_zero_is_one_and_positive():
    for n in (2, 3, 4):
        for a in np.linspace(-6, 3, 19):
            c = gamma_coeffs(n, a, 50)
            assert c[0] == 1.0
            assert np.all(c > 0)


def test_gamma_at_two_dims_alpha_zero():
    # n = 2, alpha = 0: gamma_k = (2)_k / (1)_k = k + 1
    np.testing.assert_allclose(gamma_coeffs(2, 0.0, 10), np.arange(1, 12), rtol=1e-15)


def test_stirling_ratio_tends_to_limit():
    # gamma_k(alpha) / k^(alpha+1) -> Gamma(n/2) / Gamma(1+n/2+alpha) on the upper branch
    for n, a in ((2, 0.0), (3, 1.5), (2, -1.0)):
        lim = special.gamma(n / 2) / special.gamma(1 + n / 2 + a)
        assert stirling_ratio(n, a, 10**6) == pytest.approx(lim, rel=1e-5)


def test_stirling_ratio_rejects_k0():
    with pytest.raises(DomainError):
        stirling_ratio(2, 0.0, 0)


def test_sequence_algebra():
    s = gamma_sequence(3, 0.7)
    assert (s * s.inverse()).values(20) == pytest.approx(np.ones(21))
    m = multiplier_sequence(3, 0.5, 2.0)
    np.testing.assert_allclose(m.values(20), gamma_coeffs(3, 2.5, 20) / gamma_coeffs(3, 0.5, 20), rtol=1e-13)
    assert isinstance(m, CoeffSequence)


def test_volume_const_against_quad():
    for n, a in ((2, 0.0), (2, 1.0), (3, -0.5), (3, 2.5), (4, 0.3)):
        h = n / 2
        ref = h * integrate.quad(lambda u: u ** (h - 1) * (1 - u) ** a, 0, 1)[0]
        assert volume_const(n, a) == pytest.approx(ref, rel=1e-9)


def test_volume_const_beta_value():
    # n = 2, alpha = 1: the integral of (1-|x|^2) over the disc, normalized, is 1/2
    assert volume_const(2, 1.0) == pytest.approx(0.5, rel=1e-15)
    assert volume_const(3, -2.0) == 1.0


def test_space_params():
    sp = SpaceParams(2, 0.5, 0.0)
    assert sp.rho == pytest.approx(2.0)
    with pytest.raises(DomainError):
        SpaceParams(2, 1.5, 0.0)
    with pytest.raises(DomainError):
        SpaceParams(1, 0.5, 0.0)


def test_bracket_bounds(rng):
    x = rng.uniform(-1, 1, (100000, 3)) * 0.577
    y = rng.uniform(-1, 1, (100000, 3)) * 0.577
    b = bracket(x, y)
    pr = np.linalg.norm(x, axis=1) * np.linalg.norm(y, axis=1)
    assert np.all(b >= 1 - pr - 1e-15) and np.all(b <= 1 + pr + 1e-15)


def test_bracket_identities(rng):
    x = rng.uniform(-0.5, 0.5, (10, 3))
    y = rng.uniform(-0.5, 0.5, (10, 3))
    np.testing.assert_allclose(bracket(x, y), bracket(y, x))
    np.testing.assert_allclose(bracket(x, np.zeros(3)), 1.0)
    # on the sphere [x, zeta] = |x - zeta|
    z = y / np.linalg.norm(y, axis=1, keepdims=True)
    np.testing.assert_allclose(bracket(x, z), np.linalg.norm(x - z, axis=1), rtol=1e-13)
    assert math.isclose(float(bracket(np.zeros(3), np.zeros(3))), 1.0)
