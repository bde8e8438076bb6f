"""Hypothesis properties of the operator algebra, kernels and records."""

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from harmbesov import _accel
from harmbesov.atomic import AtomCoeffs, AtomLattice, build_lattice
from harmbesov.expansion import HarmonicExpansion, dilate, dst_apply, radial_power, random_expansion
from harmbesov.kernels import KernelSpec, kernel_eval
from harmbesov.norms import lp_quasinorm
from harmbesov.numeric import DerivPair, bracket, gamma_coeffs, gamma_sequence
from harmbesov.quadrature import build_ball_rule

dims = st.sampled_from([2, 3, 4])
reals = st.floats(min_value=-6.0, max_value=4.0, allow_nan=False)
seeds = st.integers(min_value=0, max_value=2**31 - 1)
SETTINGS = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def _rel(a, b):
    return np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300)


def _point(rng, n, rmax):
    x = rng.standard_normal(n)
    return x / np.linalg.norm(x) * rmax * rng.uniform() ** (1 / n)


@SETTINGS
@given(dims, reals, reals, seeds)
def test_dst_two_sided_inverse(n, s, t, seed):
    u = random_expansion(n, 20, 1, seed)
    back = dst_apply(dst_apply(u, DerivPair(s, t)), DerivPair(s + t, -t))
    assert _rel(back.coeffs, u.coeffs) <= 1e-12


@SETTINGS
@given(dims, reals, reals, reals, seeds)
def test_dst_additive(n, s, t, z, seed):
    u = random_expansion(n, 20, 1, seed)
    a = dst_apply(dst_apply(u, DerivPair(s, t)), DerivPair(s + t, z))
    b = dst_apply(u, DerivPair(s, z + t))
    assert _rel(a.coeffs, b.coeffs) <= 1e-12


@SETTINGS
@given(dims, reals, reals, st.integers(0, 3), seeds)
def test_dst_commutes_with_radial_power(n, s, t, N, seed):
    u = random_expansion(n, 15, 1, seed)
    d = DerivPair(s, t)
    # equal up to the order of two float multiplications
    assert _rel(dst_apply(radial_power(u, N), d).coeffs, radial_power(dst_apply(u, d), N).coeffs) <= 4e-16


@SETTINGS
@given(dims, reals, reals, st.floats(0.05, 1.0), seeds)
def test_dst_commutes_with_dilation(n, s, t, r, seed):
    u = random_expansion(n, 15, 1, seed)
    d = DerivPair(s, t)
    assert _rel(dilate(dst_apply(u, d), r).coeffs, dst_apply(dilate(u, r), d).coeffs) <= 1e-14


@SETTINGS
@given(dims, seeds)
def test_euler_identity(n, seed):
    rng = np.random.default_rng(seed)
    u = random_expansion(n, 8, 2, seed)
    x = _point(rng, n, 0.9)
    assert abs(x @ u.gradient(x) - radial_power(u, 1)(x)) <= 1e-9 * max(1.0, abs(radial_power(u, 1)(x)))


@SETTINGS
@given(dims, reals, reals, st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False), seeds)
def test_linearity(n, s, t, lam, seed):
    u = random_expansion(n, 6, 1, seed)
    v = random_expansion(n, 6, 1, seed + 1)
    d = DerivPair(s, t)
    x = _point(np.random.default_rng(seed), n, 0.9)
    lhs = dst_apply(u + lam * v, d)(x)
    rhs = dst_apply(u, d)(x) + lam * dst_apply(v, d)(x)
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))


@SETTINGS
@given(dims, seeds)
def test_harmonic_hessian_trace(n, seed):
    u = random_expansion(n, 8, 1, seed)
    x = _point(np.random.default_rng(seed), n, 0.95)
    H = u.hessian(x)
    assert abs(np.trace(H)) <= 1e-9 * max(np.max(np.abs(H)), 1e-300)


@SETTINGS
@given(st.sampled_from([2, 3]), reals, seeds)
def test_kernel_symmetry_and_origin(n, a, seed):
    rng = np.random.default_rng(seed)
    x, y = _point(rng, n, 0.97), _point(rng, n, 0.97)
    spec = KernelSpec(n, a)
    r1, r2 = kernel_eval(spec, x, y).value, kernel_eval(spec, y, x).value
    assert abs(r1 - r2) <= 1e-12 * abs(r1)
    assert abs(kernel_eval(spec, x, np.zeros(n)).value - 1.0) <= 1e-15


@SETTINGS
@given(dims, reals)
def test_gamma_positive(n, a):
    c = gamma_coeffs(n, a, 200)
    assert c[0] == 1.0 and np.all(c > 0)


@SETTINGS
@given(st.sampled_from([2, 3]), seeds)
def test_bracket_bounds(n, seed):
    rng = np.random.default_rng(seed)
    x, y = _point(rng, n, 0.999), _point(rng, n, 1.0)
    b = bracket(x, y)
    pr = np.linalg.norm(x) * np.linalg.norm(y)
    assert 1 - pr - 1e-15 <= b <= 1 + pr + 1e-15


_RULE = build_ball_rule(2, 6, 12)


@SETTINGS
@given(st.floats(0.05, 1.0), seeds)
def test_p_triangle(p, seed):
    rng = np.random.default_rng(seed)
    f, g = rng.standard_normal((2, _RULE.size))
    lhs = lp_quasinorm(f + g, p, 0.0, _RULE) ** p
    rhs = lp_quasinorm(f, p, 0.0, _RULE) ** p + lp_quasinorm(g, p, 0.0, _RULE) ** p
    if p < 1:
        assert lhs <= rhs * (1 + 1e-12)
    else:
        assert lp_quasinorm(f + g, 1, 0.0, _RULE) <= lp_quasinorm(f, 1, 0.0, _RULE) + lp_quasinorm(g, 1, 0.0, _RULE) + 1e-12


@SETTINGS
@given(dims, st.integers(0, 10), st.integers(1, 3), seeds)
def test_expansion_record_round_trip(n, K, per, seed):
    u = random_expansion(n, K, per, seed)
    v = HarmonicExpansion.from_text(u.to_text())
    x = _point(np.random.default_rng(seed), n, 0.9)
    assert abs(v(x) - u(x)) <= 1e-14 * max(1.0, abs(u(x)))


@SETTINGS
@given(st.sampled_from([2, 3]), st.floats(0.2, 0.7), st.floats(0.3, 0.9), seeds)
def test_lattice_records_round_trip(n, delta, rmax, seed):
    lat = build_lattice(n, delta, rmax)
    again = AtomLattice.from_text(lat.to_text())
    np.testing.assert_array_equal(again.points, lat.points)
    rng = np.random.default_rng(seed)
    lam = AtomCoeffs(rng.standard_normal(lat.size) + 1j * rng.standard_normal(lat.size))
    np.testing.assert_array_equal(AtomCoeffs.from_text(lam.to_text()).lambdas, lam.lambdas)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([2, 3, 4]), reals, st.integers(0, 2), seeds)
def test_backends_agree(n, a, order, seed):
    rng = np.random.default_rng(seed)
    X = np.array([_point(rng, n, 0.95) for _ in range(20)])
    Y = np.array([_point(rng, n, 1.0) for _ in range(20)])
    seq = gamma_sequence(n, a)
    fast = _accel.kernel_sums(n, X, Y, seq.num, seq.den, order, use_numba=True)
    slow = _accel.kernel_sums(n, X, Y, seq.num, seq.den, order, use_numba=False)
    # different summation order; rounding grows with the number of terms
    # (about a thousand near |x||y| = 0.95 for large alpha)
    assert _rel(fast[0], slow[0]) <= 1e-11
    if order:
        assert _rel(fast[1], slow[1]) <= 1e-11
    P = Y[:3]
    C = rng.standard_normal((3, 12)) + 0j
    e1 = _accel.expansion_sums(n, X, P, C, order, use_numba=True)
    e2 = _accel.expansion_sums(n, X, P, C, order, use_numba=False)
    assert _rel(e1[0], e2[0]) <= 1e-12
