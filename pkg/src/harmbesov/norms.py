"""Weighted Lebesgue and Besov quasinorms, Bloch norms, projections, pairings
and the integral probes, all evaluated by quadrature on a BallRule.

Throughout dnu_a = V_a^-1 (1-|x|^2)^a dnu with V_a = 1 for a <= -1. A Besov
quasinorm of order p on b^p_alpha only ever integrates |g|^p (1-|x|^2)^e
with e = alpha + p t > -1, so it is computed as (V_e / V_alpha) times a
probability-measure integral, which is finite even when alpha <= -1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .expansion import HarmonicExpansion, MultiIndex, dst_apply, radial_power
from .kernels import KernelConvergenceError, KernelSpec, SeriesKernel, kernel_eval, kernel_truncate
from .numeric import DerivPair, DomainError, SpaceParams, bracket, volume_const
from .quadrature import BallRule, axial_rotations, build_focused_rule, segment_rule, sphere_rule, translated_rule


# -- variants --------------------------------------------------------------


@dataclass(frozen=True)
class DstVariant:
    """||(1-|x|^2)^t D^t_s u||_{L^p_alpha}."""

    d: DerivPair


@dataclass(frozen=True)
class RadialVariant:
    """(|u(0)|^p + ||(1-|x|^2)^N R^N u||^p)^(1/p)."""

    N: int


@dataclass(frozen=True)
class PartialVariant:
    """(sum_{|m|<N} |d^m u(0)|^p + sum_{|m|=N} ||(1-|x|^2)^N d^m u||^p)^(1/p)."""

    N: int


Variant = Union[DstVariant, RadialVariant, PartialVariant]


def _order(variant: Variant) -> float:
    return variant.d.t if isinstance(variant, DstVariant) else float(variant.N)


@dataclass(frozen=True)
class NormSpec:
    space: SpaceParams
    variant: Variant
    rule: BallRule

    def __post_init__(self):
        sp = self.space
        order = _order(self.variant)
        if isinstance(self.variant, (RadialVariant, PartialVariant)) and self.variant.N < 0:
            raise DomainError("N must be >= 0")
        if isinstance(self.variant, PartialVariant) and self.variant.N > 2:
            raise DomainError("partial variants support N <= 2")
        name = "alpha + p*t" if isinstance(self.variant, DstVariant) else "alpha + p*N"
        if not sp.alpha + sp.p * order > -1:
            raise DomainError(
                f"quasinorm needs {name} > -1, got {sp.alpha} + {sp.p}*{order} = {sp.alpha + sp.p * order}"
            )

    @property
    def weight_exponent(self) -> float:
        return self.space.alpha + self.space.p * _order(self.variant)


def space_weight_exponent(space: SpaceParams, variant: Variant) -> float:
    """The exponent e = alpha + p*(order) integrated by a NormSpec."""
    return space.alpha + space.p * _order(variant)


# -- Lebesgue quasinorms ---------------------------------------------------


def _values(field, rule: BallRule) -> np.ndarray:
    if callable(field):
        return np.asarray(field(rule.nodes))
    vals = np.asarray(field)
    if vals.shape[0] != rule.size:
        raise ValueError("precomputed field values must match the rule's nodes")
    return vals


def _p_integral(absvals: np.ndarray, p: float, e: float, alpha: float, rule: BallRule) -> float:
    """V_alpha^-1 int |g|^p (1-|x|^2)^e dnu for e > -1."""
    if not e > -1:
        raise DomainError(f"weight exponent {e} must exceed -1")
    scale = volume_const(rule.n, e) / volume_const(rule.n, alpha)
    return float(scale * np.sum(rule.weights_for(e) * absvals ** p))


def lp_quasinorm(field, p: float, alpha: float, rule: BallRule) -> float:
    """||f||_{L^p_alpha} = (int |f|^p dnu_alpha)^(1/p), alpha > -1."""
    if not alpha > -1:
        raise DomainError(f"L^p_alpha needs alpha > -1 for a finite measure, got {alpha}")
    if not 0 < p:
        raise DomainError("p must be positive")
    vals = np.abs(_values(field, rule))
    return _p_integral(vals, p, alpha, alpha, rule) ** (1.0 / p)


def quasi_metric(f, g, p: float, alpha: float, rule: BallRule) -> float:
    """d(f, g) = ||f - g||^p, a metric for 0 < p <= 1."""
    diff = _values(f, rule) - _values(g, rule)
    return lp_quasinorm(diff, p, alpha, rule) ** p


# -- Besov quasinorms ------------------------------------------------------


def _weighted_part(v_abs, N_or_t, spec: NormSpec) -> float:
    sp = spec.space
    # (1-|x|^2)^(p t) moves into the weight: exponent alpha + p t
    return _p_integral(v_abs, sp.p, sp.alpha + sp.p * N_or_t, sp.alpha, spec.rule)


def _is_axial(u: HarmonicExpansion, rule: BallRule) -> bool:
    if axial_rotations(rule) is None:
        return False
    z = np.asarray(rule.meta["focus"], dtype=float)
    z = z / np.linalg.norm(z)
    P = u.poles
    off = P - np.outer(P @ z, z)
    return bool(np.all(np.linalg.norm(off, axis=1) <= 1e-14 * (1.0 + np.linalg.norm(P, axis=1))))


def rule_values(u: HarmonicExpansion, rule: BallRule, order: int = 0):
    """(value, gradient, Hessian) of u at every node; unused orders are None.

    For n = 3 focused rules and expansions whose poles all lie on the focus
    axis, u is invariant under rotations about that axis, so one azimuthal
    slice is evaluated and the rest follow from grad u(Qx) = Q grad u(x),
    H(Qx) = Q H(x) Q^T.
    """
    if not _is_axial(u, rule):
        X = rule.nodes
        v = u.evaluate(X)
        g = u.gradient(X) if order >= 1 else None
        h = u.hessian(X) if order >= 2 else None
        return v, g, h
    nr, nt, m = rule.meta["layout"]
    X = rule.nodes.reshape(nr, nt, m, 3)[:, :, 0, :].reshape(-1, 3)
    Q = axial_rotations(rule)
    v = np.repeat(u.evaluate(X).reshape(nr, nt, 1), m, axis=2).reshape(-1)
    g = h = None
    if order >= 1:
        g0 = u.gradient(X).reshape(nr, nt, 3)
        g = np.einsum("jab,rtb->rtja", Q, g0).reshape(-1, 3)
    if order >= 2:
        h0 = u.hessian(X).reshape(nr, nt, 3, 3)
        h = np.einsum("jab,rtbc,jdc->rtjad", Q, h0, Q).reshape(-1, 3, 3)
    return v, g, h


def besov_quasinorm_p(u: HarmonicExpansion, spec: NormSpec) -> float:
    """The p-th power of the Besov quasinorm (additive over pieces)."""
    sp = spec.space
    if u.n != sp.n or spec.rule.n != sp.n:
        raise DomainError("dimension mismatch between function, space and rule")
    rule = spec.rule
    var = spec.variant
    p = sp.p
    if isinstance(var, DstVariant):
        v, _, _ = rule_values(dst_apply(u, var.d), rule)
        return _weighted_part(np.abs(v), var.d.t, spec)
    if isinstance(var, RadialVariant):
        head = abs(u.evaluate(np.zeros(sp.n))) ** p
        v, _, _ = rule_values(radial_power(u, var.N), rule)
        return head + _weighted_part(np.abs(v), var.N, spec)
    # partial variant
    N = var.N
    zero = np.zeros(sp.n)
    if N == 0:
        v, _, _ = rule_values(u, rule)
        return _weighted_part(np.abs(v), 0, spec)
    head = abs(u.evaluate(zero)) ** p
    if N >= 2:
        head += float(np.sum(np.abs(u.gradient(zero)) ** p))
    _, g, h = rule_values(u, rule, N)
    if N == 1:
        comps = [g[:, i] for i in range(sp.n)]
    else:
        comps = [h[:, i, j] for i in range(sp.n) for j in range(i, sp.n)]
    return head + sum(_weighted_part(np.abs(c), N, spec) for c in comps)


def besov_quasinorm(u: HarmonicExpansion, spec: NormSpec) -> float:
    return besov_quasinorm_p(u, spec) ** (1.0 / spec.space.p)


def isometry_quasinorms(u: HarmonicExpansion, space: SpaceParams, s: float, t: float, t1: float,
                        rule: BallRule) -> tuple[float, float, float]:
    """Both sides of the D^t_s isometry b^p_alpha -> b^p_{alpha+pt}.

    Returns (||I^{t+t1}_s u||_{L^p_alpha}, ||I^{t1}_{s+t} D^t_s u||_{L^p_{alpha+pt}},
    kappa) where kappa = (V_{alpha+pt} / V_alpha)^(1/p) is the constant that
    the normalization of the two measures introduces; the transported
    quasinorm on the target space is kappa times the second value.
    """
    target = SpaceParams(space.n, space.p, space.alpha + space.p * t)
    lhs = besov_quasinorm(u, NormSpec(space, DstVariant(DerivPair(s, t + t1)), rule))
    rhs = besov_quasinorm(dst_apply(u, DerivPair(s, t)), NormSpec(target, DstVariant(DerivPair(s + t, t1)), rule))
    kappa = (volume_const(space.n, target.alpha) / volume_const(space.n, space.alpha)) ** (1.0 / space.p)
    return lhs, rhs, kappa


def embedding_integral(u: HarmonicExpansion, space: SpaceParams, d: DerivPair, rule: BallRule) -> float:
    """int |I^t_s u| dnu_rho, the L^1 side of the embedding into b^1_rho."""
    vals = np.abs(dst_apply(u, d).evaluate(rule.nodes))
    e = space.rho + d.t
    return _p_integral(vals, 1.0, e, space.rho, rule)


# -- weighted sup norms and the pairing ------------------------------------


def bloch_norm(v: HarmonicExpansion, beta: float, d: DerivPair, grid: BallRule) -> float:
    """max over grid nodes of (1-|x|^2)^beta |I^t_s v(x)|."""
    if not beta + d.t > 0:
        raise DomainError(f"Bloch norm needs beta + t > 0, got {beta} + {d.t}")
    vals = np.abs(dst_apply(v, d).evaluate(grid.nodes))
    return float(np.max(grid.onem ** (beta + d.t) * vals))


def dual_pair(space: SpaceParams, beta: float, d: DerivPair) -> DerivPair:
    """(s', t') with I^{t'}_{s'} the operator applied to v in the pairing."""
    return DerivPair(d.t + space.rho + beta, d.s - space.rho - beta)


def check_dual_constraints(space: SpaceParams, beta: float, d: DerivPair) -> None:
    if not d.s > space.rho:
        raise DomainError(f"duality constraint s > rho violated: s={d.s}, rho={space.rho}")
    if not space.alpha + space.p * d.t > -1:
        raise DomainError(
            f"duality constraint alpha + p*t > -1 violated: {space.alpha} + {space.p}*{d.t}"
        )
    if not space.rho + beta > -1:
        raise DomainError(
            f"pairing quadrature needs rho + beta > -1 (finite measure), got {space.rho + beta}"
        )


def duality_pairing(u: HarmonicExpansion, v: HarmonicExpansion, space: SpaceParams, beta: float,
                    d: DerivPair, rule: BallRule) -> complex:
    """<u, v> = int I^t_s u conj(I^{t'}_{s'} v) dnu_{rho+beta}."""
    check_dual_constraints(space, beta, d)
    dp = dual_pair(space, beta, d)
    X = rule.nodes
    a = dst_apply(u, d).evaluate(X)
    b = np.conj(dst_apply(v, dp).evaluate(X))
    # the two weights combine to (1-|x|^2)^(s+t)
    e = d.s + d.t
    scale = volume_const(rule.n, e) / volume_const(rule.n, space.rho + beta)
    return complex(scale * np.sum(rule.weights_for(e) * a * b))


# -- projection ------------------------------------------------------------


def bergman_project_eval(f, s: float, x, rule: BallRule, spec: KernelSpec | SeriesKernel | None = None) -> complex:
    """Q_s f(x) = int R_s(x, y) f(y) dnu_s(y)."""
    if not s > -1:
        raise DomainError(f"Q_s needs s > -1, got {s}")
    x = np.asarray(x, dtype=float)
    if x @ x >= 1.0:
        raise DomainError("Q_s f(x) needs |x| < 1")
    kern = (spec if spec is not None else KernelSpec(rule.n, s))
    kern = kern if isinstance(kern, SeriesKernel) else kern.series()
    vals = _values(f, rule)
    try:
        R = kern(x[None, :], rule.nodes)
    except KernelConvergenceError as err:
        raise KernelConvergenceError(f"Q_s quadrature failed: {err}", err.tail_bound, err.degree, err.points) from err
    return complex(np.sum(rule.weights_for(s) * R * vals))


# -- integral probes -------------------------------------------------------


def probe_integral(kind: str, params: dict, x, rule: BallRule | None = None) -> float:
    """Quadrature values of the three model integrals.

    kernel_power:  int |R_alpha(x,y)|^p (1-|y|^2)^b dnu(y), params alpha, p, b
    bracket_power: int (1-|y|^2)^b / [x,y]^(n+b+s) dnu(y), params b, s
    segment:       int_0^1 (1-tau)^b / [tau x, y]^(1+b+c) dtau, params b, c, y
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    b = float(params["b"])
    if not b > -1:
        raise DomainError(f"probe integrals need b > -1, got {b}")
    if kind == "segment":
        c = float(params["c"])
        if not c > 0:
            raise DomainError(f"segment probe needs c > 0, got {c}")
        y = np.asarray(params["y"], dtype=float)
        tau, w = segment_rule(int(params.get("points", 16)), b)
        br = bracket(tau[:, None] * x[None, :], y[None, :])
        return float(np.sum(w / br ** (1.0 + b + c)))
    if rule is None:
        xn = np.linalg.norm(x)
        focus = x / xn if xn > 0 else np.eye(n)[0]
        rule = build_focused_rule(n, focus, jacobi_exponent=b, **params.get("rule", {}))
    Vb = volume_const(n, b)
    if kind == "bracket_power":
        s = float(params["s"])
        br = bracket(x[None, :], rule.nodes)
        return float(Vb * np.sum(rule.weights_for(b) / br ** (n + b + s)))
    if kind == "kernel_power":
        p = float(params["p"])
        spec = KernelSpec(n, float(params["alpha"]), tail_tol=params.get("tail_tol", 1e-13))
        # R(x, .) is the expansion with pole x; its degree comes from the
        # certificate at the outermost node, which dominates every node
        rmax = float(np.sqrt(np.max(1.0 - rule.onem)))
        xn = np.linalg.norm(x)
        if xn == 0.0:
            return float(Vb)
        K = int(kernel_eval(spec, x, x / xn * rmax).degree)
        v, _, _ = rule_values(kernel_truncate(spec, x, K), rule)
        return float(Vb * np.sum(rule.weights_for(b) * np.abs(v) ** p))
    raise DomainError(f"unknown probe kind {kind!r}")


def mean_value_probe(u: HarmonicExpansion, v: HarmonicExpansion | None, p: float, x, r: float,
                     rule: BallRule) -> float:
    """K_emp = |u(x) v(x)|^p r^n / int_{B(x,r)} |u v|^p dnu."""
    nodes, w = translated_rule(rule, x, r)
    x = np.asarray(x, dtype=float)
    fx = u.evaluate(x)
    fy = u.evaluate(nodes)
    if v is not None:
        fx = fx * v.evaluate(x)
        fy = fy * v.evaluate(nodes)
    return float(abs(fx) ** p * r ** u.n / np.sum(w * np.abs(fy) ** p))


def growth_ratio(u: HarmonicExpansion, quasinorm: float, space: SpaceParams, grid: BallRule) -> float:
    """max (1-|x|^2)^((n+alpha)/p) |u| / ||u|| for alpha > -n, else max |u| / ||u||."""
    vals = np.abs(u.evaluate(grid.nodes))
    if space.alpha > -space.n:
        vals = vals * grid.onem ** ((space.n + space.alpha) / space.p)
    return float(np.max(vals) / quasinorm)


def radial_profile(u: HarmonicExpansion, space: SpaceParams, radii, sphere_points: int = 256) -> np.ndarray:
    """max_{|x| = r} (1-|x|^2)^((n+alpha)/p) |u(x)| for each r."""
    dirs, _, _, _ = sphere_rule(space.n, sphere_points)
    out = []
    for r in radii:
        vals = np.abs(u.evaluate(r * dirs))
        out.append((1.0 - r * r) ** ((space.n + space.alpha) / space.p) * np.max(vals))
    return np.array(out)

