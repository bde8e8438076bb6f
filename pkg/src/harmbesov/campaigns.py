"""Verification campaigns: each check records measured values against a band.

A check never raises; domain errors inside a check become a failed record
carrying the diagnostic. Everything is deterministic in the config seed.
"""

from __future__ import annotations

import itertools
import json
import math
import platform
import time
import warnings
from dataclasses import asdict, dataclass, field, fields
from typing import Callable

import numpy as np

from . import __version__, _accel
from .atomic import AtomCoeffs, AtomLattice, analyze, build_lattice, seq_lp_norm, synthesize
from .expansion import HarmonicExpansion, MultiIndex, dilate, dst_apply, random_expansion
from .kernels import KernelSpec, kernel_deriv, kernel_eval, kernel_multiplied, kernel_truncate
from .norms import (
    DstVariant, NormSpec, PartialVariant, RadialVariant, besov_quasinorm, bergman_project_eval,
    bloch_norm, dual_pair, duality_pairing, embedding_integral, growth_ratio, isometry_quasinorms,
    mean_value_probe, probe_integral, radial_profile, space_weight_exponent,
)
from .numeric import (
    DerivPair, DomainError, SpaceParams, bracket, gamma_coeffs, stirling_ratio, volume_const,
)
from .quadrature import LEBEDEV_ORDERS, QuadratureWarning, build_ball_rule, build_focused_rule

CAMPAIGNS = ("kernel", "equivalence", "growth", "duality", "atoms", "probes")
ALPHA_GRID = (-3.0, -1.0, 0.0, 1.5)
FAMILY_RADII = (0.5, 0.7, 0.9, 0.95, 0.99)


class ConfigError(ValueError):
    """Invalid campaign configuration."""


@dataclass
class CampaignConfig:
    dim: int = 2
    p: float = 0.5
    alpha: float = 0.0
    beta: float | None = None
    s: float | None = None
    t: float | None = None
    degree: int = 8
    radial_nodes: int = 24
    sphere_nodes: int = 128
    seed: int = 0
    tol_scale: float = 1.0
    out: str | None = None
    format: str = "json"
    parallel: int = 1

    def __post_init__(self):
        self.validate()

    # -- validation --------------------------------------------------------

    def validate(self):
        if int(self.dim) != self.dim or self.dim < 2:
            raise ConfigError(f"dim: must be an integer >= 2, got {self.dim}")
        if not 0 < self.p <= 1:
            raise ConfigError(f"p: must lie in (0, 1], got {self.p}")
        if self.degree < 0:
            raise ConfigError(f"degree: must be >= 0, got {self.degree}")
        if self.radial_nodes < 1 or self.sphere_nodes < 1:
            raise ConfigError("radial-nodes / sphere-nodes: must be >= 1")
        if not self.tol_scale > 0:
            raise ConfigError("tol-scale: must be positive")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"format: must be json or csv, got {self.format}")
        if self.parallel < 1:
            raise ConfigError("parallel: must be >= 1")
        sp = self.space
        if self.t is not None and not sp.alpha + sp.p * self.t > -1:
            raise ConfigError(f"t: needs alpha + p*t > -1, got {sp.alpha} + {sp.p}*{self.t}")
        if self.s is not None and not self.s > sp.rho:
            raise ConfigError(f"s: needs s > rho = (n+alpha)/p - n = {sp.rho}, got {self.s}")
        if self.beta is not None and not sp.rho + self.beta > -1:
            raise ConfigError(f"beta: needs rho + beta > -1 for the pairing quadrature, got {sp.rho + self.beta}")

    # -- derived parameters ------------------------------------------------

    @property
    def space(self) -> SpaceParams:
        return SpaceParams(int(self.dim), float(self.p), float(self.alpha))

    @property
    def t_eff(self) -> float:
        """Smallest integer t >= 1 with alpha + p t > -1 unless given."""
        if self.t is not None:
            return float(self.t)
        sp = self.space
        return float(max(1, math.floor((-1.0 - sp.alpha) / sp.p) + 1))

    @property
    def s_eff(self) -> float:
        return float(self.s) if self.s is not None else self.space.rho + 1.0

    @property
    def beta_eff(self) -> float:
        if self.beta is not None:
            return float(self.beta)
        return float(max(0.0, -self.space.rho))

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name != "out"}

    @classmethod
    def from_mapping(cls, data: dict) -> "CampaignConfig":
        names = {f.name: f for f in fields(cls)}
        kwargs = {}
        for key, val in data.items():
            k = key.replace("-", "_")
            if k not in names:
                raise ConfigError(f"unknown config key {key!r}")
            if val is None:
                kwargs[k] = None
                continue
            if k in ("dim", "degree", "radial_nodes", "sphere_nodes", "seed", "parallel"):
                kwargs[k] = int(val)
            elif k in ("out", "format"):
                kwargs[k] = str(val)
            else:
                kwargs[k] = float(val)
        return cls(**kwargs)


@dataclass
class Check:
    name: str
    anchor: str
    params: dict
    measured: dict
    band: str
    passed: bool

    def record(self) -> dict:
        return {"name": self.name, "anchor": self.anchor, "params": self.params,
                "measured": self.measured, "band": self.band, "pass": bool(self.passed)}


@dataclass
class Report:
    campaign: str
    config: dict
    checks: list = field(default_factory=list)
    env: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def body(self) -> dict:
        """Everything except the timestamp."""
        env = {k: v for k, v in self.env.items() if k != "timestamp"}
        return {"campaign": self.campaign, "config": self.config,
                "checks": [c.record() for c in self.checks], "env": env}

    def to_json(self) -> str:
        out = self.body()
        out["env"] = dict(self.env)
        return json.dumps(_clean(out), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        import csv
        import io

        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "anchor", "params", "measured", "band", "pass"])
        for c in self.checks:
            r = _clean(c.record())
            w.writerow([r["name"], r["anchor"], json.dumps(r["params"], sort_keys=True),
                        json.dumps(r["measured"], sort_keys=True), r["band"], r["pass"]])
        return buf.getvalue()


def _clean(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isfinite(v):
            return float(f"{v:.12g}")
        return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
    if isinstance(obj, complex):
        return [_clean(obj.real), _clean(obj.imag)]
    return obj


# -- helpers ---------------------------------------------------------------


def _rng(cfg: CampaignConfig, salt: int) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, salt])


def _ball_points(rng, n, count, rmax):
    x = rng.standard_normal((count, n))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    return x * (rmax * rng.uniform(size=(count, 1)) ** (1.0 / n))


def _unit(rng, n, count):
    z = rng.standard_normal((count, n))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def _guard(name: str, anchor: str, params: dict, band: str, fn: Callable[[], tuple]) -> Check:
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", QuadratureWarning)
            measured, ok = fn()
        return Check(name, anchor, params, measured, band, bool(ok))
    except (DomainError, ArithmeticError, ValueError) as err:
        return Check(name, anchor, params, {"error": f"{type(err).__name__}: {err}"}, band, False)


def standard_rule(cfg: CampaignConfig, n: int, jac: float, exactness: int = 0):
    """Product rule at least as large as the config sizes and the requested exactness."""
    N = max(cfg.radial_nodes, (exactness + 2 + 3) // 4)
    if n == 2:
        M = max(cfg.sphere_nodes, exactness + 1)
    else:
        # sphere_nodes is a minimum node count for n = 3
        order = next((o for o in LEBEDEV_ORDERS if o >= exactness), LEBEDEV_ORDERS[-1])
        from .quadrature import _lebedev_sizes

        M = max(cfg.sphere_nodes, _lebedev_sizes()[list(LEBEDEV_ORDERS).index(order)])
    return build_ball_rule(n, N, M, jac, seed=cfg.seed)


def kernel_degree(n: int, c: float, r: float, tol: float = 1e-12) -> int:
    """Degree K after which gamma_k(c) Z_k(z,z) r^k < tol * max over k."""
    K = 64
    while True:
        g = gamma_coeffs(n, c, K) * r ** np.arange(K + 1) * _accel.zonal_diagonal(n, K)
        if g[-1] < tol * g.max() and g[-1] <= g[-2]:
            return int(np.flatnonzero(g >= tol * g.max())[-1]) + 1
        K *= 2


def dilated_kernel(n: int, c: float, zeta, r: float, tol: float = 1e-12) -> HarmonicExpansion:
    """dilate(kernel_truncate(R_c(., zeta)), r) with a negligible truncation."""
    K = kernel_degree(n, c, r, tol)
    return dilate(kernel_truncate(KernelSpec(n, c), zeta, K), r)


def family_c(space: SpaceParams) -> float:
    """c = (n+alpha+1)/p - n: the b^p_alpha quasinorm of R_c(., r zeta) grows like (1-r)^(-1/p)."""
    return (space.n + space.alpha + 1.0) / space.p - space.n


def admissible_variants(space: SpaceParams, c: float, t: float) -> list:
    """dst with (c, t) and (0, t); radial and partial N in {1, 2}, where admissible."""
    out = [DstVariant(DerivPair(c, t)), DstVariant(DerivPair(0.0, t))]
    for N in (1, 2):
        if space.alpha + space.p * N > -1:
            out.append(RadialVariant(N))
            out.append(PartialVariant(N))
    return out


def _variant_name(v) -> str:
    if isinstance(v, DstVariant):
        return f"dst(s={v.d.s:g},t={v.d.t:g})"
    return f"{'radial' if isinstance(v, RadialVariant) else 'partial'}(N={v.N})"


def _focused(n, zeta, e, per_panel=8, azimuth=16):
    return build_focused_rule(n, zeta, per_panel, per_panel, jacobi_exponent=e, azimuth=azimuth)


# -- kernel campaign -------------------------------------------------------


def check_coefficient_asymptotics(cfg: CampaignConfig, n: int) -> Check:
    def run():
        k = np.arange(500, 4001)
        out = {}
        for a in ALPHA_GRID:
            r = stirling_ratio(n, a, k)
            out[f"alpha={a:g}"] = float(r.max() / r.min())
        return out, all(v <= 1.05 for v in out.values())

    return _guard(f"coefficient_asymptotics_n{n}", "gamma_k(alpha) ~ k^(alpha+1) (Stirling)",
                  {"n": n, "alphas": list(ALPHA_GRID), "k": [500, 4000]}, "max/min <= 1.05", run)


def check_kernel_origin(cfg: CampaignConfig) -> Check:
    n = cfg.dim

    def run():
        rng = _rng(cfg, 11)
        X = _ball_points(rng, n, 50, 0.99)
        dev = 0.0
        for a in ALPHA_GRID + (cfg.alpha,):
            spec = KernelSpec(n, a)
            dev = max(dev, float(np.max(np.abs(kernel_eval(spec, X, np.zeros(n)).value - 1.0))))
            dev = max(dev, float(np.max(np.abs(kernel_eval(spec, np.zeros((50, n)), X).value - 1.0))))
        return {"max_abs_dev": dev}, dev <= 1e-14 * cfg.tol_scale

    return _guard("kernel_origin", "R_alpha(x,0) = R_alpha(0,y) = 1", {"n": n},
                  f"|R-1| <= {1e-14 * cfg.tol_scale:g}", run)


def check_kernel_symmetry(cfg: CampaignConfig) -> Check:
    n = cfg.dim

    def run():
        rng = _rng(cfg, 12)
        X = _ball_points(rng, n, 50, 0.95)
        Y = _ball_points(rng, n, 50, 0.95)
        dev = 0.0
        for a in ALPHA_GRID:
            spec = KernelSpec(n, a)
            r1 = kernel_eval(spec, X, Y).value
            r2 = kernel_eval(spec, Y, X).value
            dev = max(dev, float(np.max(np.abs(r1 - r2) / np.maximum(np.abs(r1), 1e-300))))
        return {"max_rel_dev": dev}, dev <= 1e-12 * cfg.tol_scale

    return _guard("kernel_symmetry", "R_alpha is symmetric in x and y", {"n": n},
                  f"rel <= {1e-12 * cfg.tol_scale:g}", run)


def check_kernel_closed_form(cfg: CampaignConfig) -> Check:
    def run():
        rng = _rng(cfg, 13)
        X = _ball_points(rng, 2, 50, 0.95)
        Y = _ball_points(rng, 2, 50, 0.95)
        z = X[:, 0] + 1j * X[:, 1]
        w = Y[:, 0] + 1j * Y[:, 1]
        oracle = 2.0 * np.real(1.0 / (1.0 - z * np.conj(w)) ** 2) - 1.0
        val = kernel_eval(KernelSpec(2, 0.0), X, Y).value
        dev = float(np.max(np.abs(val - oracle) / np.abs(oracle)))
        return {"max_rel_dev": dev}, dev <= 1e-12 * cfg.tol_scale

    return _guard("kernel_closed_form_n2", "harmonic Bergman kernel of the disc (alpha = 0)",
                  {"n": 2, "alpha": 0.0}, f"rel <= {1e-12 * cfg.tol_scale:g}", run)


def check_reproducing(cfg: CampaignConfig, n: int, alphas=(0.0, 1.0, 2.5)) -> Check:
    def run():
        out = {}
        ok = True
        for a in alphas:
            # a rule exact for the kernel components that matter at |x| <= 0.7
            E = kernel_degree(n, a, 0.7, 1e-13) + cfg.degree
            rule = standard_rule(cfg, n, a, E)
            rng = _rng(cfg, 20 + int(10 * a))
            u = random_expansion(n, cfg.degree, 2, int(rng.integers(2**31)))
            X = _ball_points(rng, n, 20, 0.7)
            umax = float(np.max(np.abs(u.evaluate(rule.nodes))))
            err = max(abs(bergman_project_eval(u, a, x, rule) - u.evaluate(x)) for x in X)
            out[f"alpha={a:g}"] = err / umax
            out[f"nodes_alpha={a:g}"] = rule.size
            ok &= err <= 1e-6 * cfg.tol_scale * umax
        return out, ok

    return _guard(f"reproducing_n{n}", "Q_alpha u = u for harmonic u (reproducing kernel of b^2_alpha)",
                  {"n": n, "alphas": list(alphas), "degree": cfg.degree, "points": 20, "max_abs_x": 0.7},
                  f"|Q u - u| <= {1e-6 * cfg.tol_scale:g} max|u|", run)


DST_PAIRS = ((0.0, 1.0), (-2.0, 3.0), (1.5, -1.0))


def check_dst_kernel(cfg: CampaignConfig, s: float, t: float) -> Check:
    n = cfg.dim

    def run():
        rng = _rng(cfg, 30 + int(10 * (s + 5)) + int(100 * (t + 5)))
        X = _ball_points(rng, n, 50, 0.975)
        Y = _ball_points(rng, n, 50, 0.975)
        scale = np.minimum(1.0, 0.95 / np.maximum(np.linalg.norm(X, axis=1) * np.linalg.norm(Y, axis=1), 1e-300))
        Y = Y * scale[:, None]  # enforce |x||y| <= 0.95
        lhs = kernel_multiplied(KernelSpec(n, s), DerivPair(s, t))(X, Y)
        rhs_val = kernel_eval(KernelSpec(n, s + t), X, Y)
        rhs = rhs_val.value
        dev_series = float(np.max(np.abs(lhs - rhs) / np.abs(rhs)))
        # independent route: multiply truncated coefficients and evaluate the expansion
        K = int(np.max(rhs_val.degree)) + 5
        dev_coeff = 0.0
        for i in range(len(X)):
            v = dst_apply(kernel_truncate(KernelSpec(n, s), Y[i], K), DerivPair(s, t))
            dev_coeff = max(dev_coeff, abs(v.evaluate(X[i]) - rhs[i]) / abs(rhs[i]))
        dev = max(dev_series, dev_coeff)
        return {"series_rel_dev": dev_series, "coefficient_route_rel_dev": dev_coeff}, dev <= 1e-8 * cfg.tol_scale

    return _guard(f"dst_kernel_s{s:g}_t{t:g}", "D^t_s R_s = R_{s+t}", {"n": n, "s": s, "t": t, "pairs": 50},
                  f"rel <= {1e-8 * cfg.tol_scale:g}", run)


def _coeff_dev(a: HarmonicExpansion, b: HarmonicExpansion) -> float:
    return float(np.max(np.abs(a.coeffs - b.coeffs)) / max(np.max(np.abs(b.coeffs)), 1e-300))


def check_dst_inverse(cfg: CampaignConfig) -> Check:
    n = cfg.dim

    def run():
        dev = 0.0
        for j, (s, t) in enumerate(((0.0, 1.0), (-2.0, 3.0), (1.5, -1.0), (-3.5, 2.25), (cfg.s_eff, cfg.t_eff))):
            u = random_expansion(n, 40, 2, cfg.seed * 100 + j)
            v = dst_apply(dst_apply(u, DerivPair(s, t)), DerivPair(s + t, -t))
            dev = max(dev, _coeff_dev(v, u))
        return {"max_rel_dev": dev}, dev <= 1e-12 * cfg.tol_scale

    return _guard("dst_inverse", "D^{-t}_{s+t} D^t_s = I", {"n": n, "degree": 40},
                  f"rel <= {1e-12 * cfg.tol_scale:g}", run)


def check_dst_additivity(cfg: CampaignConfig) -> Check:
    n = cfg.dim

    def run():
        dev = 0.0
        for j, (s, t, z) in enumerate(((0.0, 1.0, 2.0), (-2.0, 3.0, -1.5), (1.5, -1.0, 0.5), (-4.0, 1.0, 4.5))):
            u = random_expansion(n, 40, 2, cfg.seed * 100 + 50 + j)
            a = dst_apply(dst_apply(u, DerivPair(s, t)), DerivPair(s + t, z))
            b = dst_apply(u, DerivPair(s, z + t))
            dev = max(dev, _coeff_dev(a, b))
        return {"max_rel_dev": dev}, dev <= 1e-12 * cfg.tol_scale

    return _guard("dst_additivity", "D^z_{s+t} D^t_s = D^{z+t}_s", {"n": n, "degree": 40},
                  f"rel <= {1e-12 * cfg.tol_scale:g}", run)


def check_kernel_estimate(cfg: CampaignConfig) -> Check:
    n = cfg.dim

    def run():
        rng = _rng(cfg, 40)
        zeta = _unit(rng, n, 40)
        side = _unit(rng, n, 40)
        eps = np.geomspace(1.5e-3, 0.9, 40)
        out = {}
        ok = True
        for a, order in itertools.product((-1.0, 0.0, 1.5), (0, 1, 2)):
            if not a + order > -n:
                continue
            m = MultiIndex(tuple([order] + [0] * (n - 1)))
            X = zeta * (1.0 - eps)[:, None]
            # boundary point near the ray through x, off by an angle ~ eps
            Y = zeta + 0.3 * eps[:, None] * side
            Y /= np.linalg.norm(Y, axis=1, keepdims=True)
            br = bracket(X, Y)
            val = np.abs(kernel_deriv(KernelSpec(n, a), m, X, Y).value) * br ** (n + a + order)
            near = val[(br >= 1e-3) & (br <= 1e-2)]
            far = val[(br >= 0.5) & (br <= 1.0)]
            factor = float(near.max() / far.max()) if near.size and far.size else float("nan")
            out[f"alpha={a:g},|m|={order}"] = {"max": float(val.max()), "near_over_far": factor}
            ok &= bool(np.all(np.isfinite(val)))
        return out, ok

    return _guard("kernel_estimate_shadow", "|d^m R_alpha(x,y)| <~ 1/[x,y]^(n+alpha+|m|)", {"n": n},
                  "finite; near/far factor recorded", run)


def kernel_checks(cfg: CampaignConfig) -> list:
    out = [check_coefficient_asymptotics(cfg, 2), check_coefficient_asymptotics(cfg, 3),
           check_kernel_origin(cfg), check_kernel_symmetry(cfg), check_kernel_closed_form(cfg),
           check_reproducing(cfg, 2), check_reproducing(cfg, 3)]
    out += [check_dst_kernel(cfg, s, t) for s, t in DST_PAIRS]
    out += [check_dst_inverse(cfg), check_dst_additivity(cfg), check_kernel_estimate(cfg)]
    return out


# -- equivalence campaign --------------------------------------------------


def family_table(cfg: CampaignConfig, per_panel: int = 8, azimuth: int = 16):
    """Quasinorms of the dilated-kernel family for every admissible variant."""
    sp = cfg.space
    n = sp.n
    c = family_c(sp)
    variants = admissible_variants(sp, c, cfg.t_eff)
    # the family is rotation invariant and each rule is focused on its pole,
    # so one pole direction suffices
    zetas = _unit(_rng(cfg, 50), n, 1)
    T = np.zeros((len(FAMILY_RADII) * len(zetas), len(variants)))
    row = 0
    for zeta in zetas:
        rules = {}
        for r in FAMILY_RADII:
            u = dilated_kernel(n, c, zeta, r)
            for j, v in enumerate(variants):
                e = space_weight_exponent(sp, v)
                if e not in rules:
                    rules[e] = _focused(n, zeta, e, per_panel, azimuth)
                T[row, j] = besov_quasinorm(u, NormSpec(sp, v, rules[e]))
            row += 1
    return variants, T


def check_equivalence(cfg: CampaignConfig) -> list:
    sp = cfg.space
    params = {"n": sp.n, "p": sp.p, "alpha": sp.alpha, "c": family_c(sp), "radii": list(FAMILY_RADII)}
    state = {}

    def run_ratio():
        variants, T = family_table(cfg)
        _, T2 = family_table(cfg, per_panel=12, azimuth=32)
        state["T"], state["T2"], state["variants"] = T, T2, variants
        worst = 0.0
        spreads = {}
        for i, j in itertools.combinations(range(len(variants)), 2):
            q = T[:, i] / T[:, j]
            spread = float(q.max() / q.min())
            spreads[f"{_variant_name(variants[i])}/{_variant_name(variants[j])}"] = spread
            worst = max(worst, spread)
        return {"worst_spread": worst, "spreads": spreads, "growth_first_variant":
                float(T[:, 0].max() / T[:, 0].min())}, worst <= 10.0

    def run_refine():
        if "T" not in state:
            raise DomainError("equivalence table unavailable")
        T, T2, variants = state["T"], state["T2"], state["variants"]
        worst = 0.0
        for i, j in itertools.combinations(range(len(variants)), 2):
            q1 = T[:, i] / T[:, j]
            q2 = T2[:, i] / T2[:, j]
            worst = max(worst, float(np.max(np.abs(q2 / q1 - 1.0))))
        return {"max_ratio_change": worst}, worst <= 0.05

    a = _guard("quasinorm_equivalence", "equivalent quasinorms on b^p_alpha", params,
               "max/min of every variant ratio <= 10", run_ratio)
    b = _guard("quasinorm_refinement", "equivalent quasinorms on b^p_alpha", params,
               "ratios change <= 5% when nodes double", run_refine)
    return [a, b]


def check_isometry(cfg: CampaignConfig) -> Check:
    sp = cfg.space
    s = cfg.s_eff
    t = 1.0
    t1 = cfg.t_eff

    def run():
        e = sp.alpha + sp.p * (t + t1)
        rule = standard_rule(cfg, sp.n, e, 2 * cfg.degree + 2)
        worst = 0.0
        worst_raw = 0.0
        for j in range(20):
            u = random_expansion(sp.n, cfg.degree, 2, cfg.seed * 1000 + 300 + j)
            lhs, rhs, kappa = isometry_quasinorms(u, sp, s, t, t1, rule)
            worst = max(worst, abs(lhs - kappa * rhs) / lhs)
            worst_raw = max(worst_raw, abs(lhs / rhs - kappa) / kappa)
        kappa = (volume_const(sp.n, sp.alpha + sp.p * t) / volume_const(sp.n, sp.alpha)) ** (1 / sp.p)
        return ({"max_rel_dev": worst, "raw_ratio_vs_kappa": worst_raw, "kappa": kappa},
                worst <= 1e-8 * cfg.tol_scale)

    return _guard("dst_isometry", "D^t_s: b^p_alpha -> b^p_{alpha+pt} is an isometry",
                  {"n": sp.n, "p": sp.p, "alpha": sp.alpha, "s": s, "t": t, "t1": t1, "functions": 20},
                  f"rel <= {1e-8 * cfg.tol_scale:g} (target quasinorm transported by kappa)", run)


def check_embedding(cfg: CampaignConfig) -> Check:
    sp = cfg.space

    def run():
        c = family_c(sp)
        d = DerivPair(c, cfg.t_eff)
        de = DerivPair(c, max(1.0, cfg.t_eff))
        zeta = _unit(_rng(cfg, 60), sp.n, 1)[0]
        e = sp.alpha + sp.p * d.t
        rule = _focused(sp.n, zeta, e)
        rule1 = _focused(sp.n, zeta, sp.rho + de.t)
        consts = []
        for r in FAMILY_RADII:
            u = dilated_kernel(sp.n, c, zeta, r)
            consts.append(embedding_integral(u, sp, de, rule1) / besov_quasinorm(u, NormSpec(sp, DstVariant(d), rule)))
        consts = np.array(consts)
        return {"constants": consts, "max": float(consts.max())}, bool(np.all(np.isfinite(consts)))

    return _guard("embedding_b1_rho", "b^p_alpha embeds continuously in b^1_rho, rho = (n+alpha)/p - n",
                  {"n": sp.n, "p": sp.p, "alpha": sp.alpha, "rho": sp.rho}, "finite constant", run)


def equivalence_checks(cfg):
    return check_equivalence(cfg) + [check_isometry(cfg), check_embedding(cfg)]


# -- growth campaign -------------------------------------------------------


def _growth_values(cfg, sp: SpaceParams, per_panel: int, azimuth: int):
    c = family_c(sp)
    t = float(max(1, math.floor((-1.0 - sp.alpha) / sp.p) + 1))
    d = DerivPair(c, t)
    e = sp.alpha + sp.p * t
    out = []
    for zeta in _unit(_rng(cfg, 70), sp.n, 1):
        rule = _focused(sp.n, zeta, e, per_panel, azimuth)
        for r in FAMILY_RADII:
            u = dilated_kernel(sp.n, c, zeta, r)
            out.append(growth_ratio(u, besov_quasinorm(u, NormSpec(sp, DstVariant(d), rule)), sp, rule))
    return np.array(out)


def check_growth(cfg: CampaignConfig, alpha: float | None = None) -> Check:
    sp = cfg.space if alpha is None else SpaceParams(cfg.dim, cfg.p, alpha)
    branch = "alpha > -n" if sp.alpha > -sp.n else "alpha <= -n"
    weight = "(1-|x|^2)^((n+alpha)/p) |u|" if sp.alpha > -sp.n else "|u|"

    def run():
        g1 = _growth_values(cfg, sp, 8, 16)
        g2 = _growth_values(cfg, sp, 12, 32)
        change = float(np.max(np.abs(g2 / g1 - 1.0)))
        return ({"normalized_sup": g1, "max": float(g1.max()), "refinement_change": change},
                bool(np.all(np.isfinite(g1))) and change <= 0.10)

    name = "boundary_growth" if alpha is None else f"boundary_growth_alpha{alpha:g}"
    return _guard(name, f"pointwise growth estimate for b^p_alpha ({branch})",
                  {"n": sp.n, "p": sp.p, "alpha": sp.alpha, "sup_of": weight},
                  "finite; changes <= 10% under refinement", run)


def check_vanishing(cfg: CampaignConfig) -> Check:
    sp = cfg.space

    def run():
        if not sp.alpha > -sp.n:
            return {"skipped": "needs alpha > -n"}, True
        c = family_c(sp)
        zeta = _unit(_rng(cfg, 71), sp.n, 1)[0]
        u = dilated_kernel(sp.n, c, zeta, 0.95)
        radii = np.linspace(0.05, 0.99, 95)
        prof = radial_profile(u, sp, radii, 512 if sp.n == 2 else 2000)
        return ({"interior_max": float(prof.max()), "at_0.99": float(prof[-1]),
                 "argmax_r": float(radii[int(np.argmax(prof))])}, bool(prof[-1] < prof.max()))

    return _guard("vanishing_at_boundary", "(1-|x|^2)^((n+alpha)/p) u(x) -> 0 as |x| -> 1",
                  {"n": sp.n, "p": sp.p, "alpha": sp.alpha, "dilation": 0.95},
                  "profile at r=0.99 below its interior maximum", run)


def growth_checks(cfg):
    low = -3.0 if cfg.dim <= 3 else -float(cfg.dim)
    return [check_growth(cfg), check_growth(cfg, low), check_vanishing(cfg)]


# -- duality campaign ------------------------------------------------------


def _dual_setup(cfg: CampaignConfig):
    sp = cfg.space
    t = cfg.t_eff
    s = cfg.s_eff
    beta = cfg.beta_eff
    return sp, beta, DerivPair(s, t)


def check_duality(cfg: CampaignConfig) -> Check:
    sp, beta, d = _dual_setup(cfg)

    def run():
        dp = dual_pair(sp, beta, d)
        e_u = sp.alpha + sp.p * d.t
        deg = 2 * cfg.degree + 2

        def constant(scale):
            rn = standard_rule(CampaignConfig(**{**cfg.to_dict(), "radial_nodes": cfg.radial_nodes * scale,
                                                   "sphere_nodes": cfg.sphere_nodes * scale}),
                               sp.n, d.s + d.t, deg)
            rnorm = standard_rule(CampaignConfig(**{**cfg.to_dict(), "radial_nodes": cfg.radial_nodes * scale,
                                                      "sphere_nodes": cfg.sphere_nodes * scale}),
                                  sp.n, e_u, deg)
            best = 0.0
            for j in range(50):
                u = random_expansion(sp.n, cfg.degree, 2, cfg.seed * 1000 + 500 + j)
                v = random_expansion(sp.n, cfg.degree, 2, cfg.seed * 1000 + 600 + j)
                val = abs(duality_pairing(u, v, sp, beta, d, rn))
                nu = besov_quasinorm(u, NormSpec(sp, DstVariant(d), rnorm))
                nv = bloch_norm(v, beta, dp, rnorm)
                best = max(best, val / (nu * nv))
            return best

        c1 = constant(1)
        c2 = constant(2)
        change = abs(c2 / c1 - 1.0)
        return ({"constant": c1, "constant_refined": c2, "relative_change": change,
                 "dual_pair": {"s'": dp.s, "t'": dp.t}}, math.isfinite(c1) and change <= 0.20)

    return _guard("duality_constant", "pairing bounds b^p_alpha against b^infty_beta",
                  {"n": sp.n, "p": sp.p, "alpha": sp.alpha, "beta": beta, "s": d.s, "t": d.t,
                   "rho": sp.rho, "pairs": 50}, "finite; stable within 20% under refinement", run)


def check_duality_constraints(cfg: CampaignConfig) -> list:
    sp, beta, d = _dual_setup(cfg)
    u = HarmonicExpansion.constant(sp.n)
    rule = build_ball_rule(sp.n, 4, 8)

    def expect(d_bad, must_contain):
        def run():
            try:
                duality_pairing(u, u, sp, beta, d_bad, rule)
            except DomainError as err:
                return {"error": str(err)}, must_contain in str(err)
            return {"error": None}, False
        return run

    bad_s = DerivPair(sp.rho - 0.5, d.t)
    t_bad = (-1.0 - sp.alpha) / sp.p - 0.5
    bad_t = DerivPair(d.s, t_bad)
    return [
        _guard("duality_constraint_s", "pairing needs s > rho", {"s": bad_s.s, "rho": sp.rho},
               "DomainError naming s > rho", expect(bad_s, "s > rho")),
        _guard("duality_constraint_t", "pairing needs alpha + p t > -1", {"t": bad_t.t},
               "DomainError naming alpha + p*t > -1", expect(bad_t, "alpha + p*t > -1")),
    ]


def check_duality_oracle(cfg: CampaignConfig) -> Check:
    sp, beta, d = _dual_setup(cfg)

    def run():
        one = HarmonicExpansion.constant(sp.n)
        rule = standard_rule(cfg, sp.n, d.s + d.t)
        val = duality_pairing(one, one, sp, beta, d, rule)
        oracle = volume_const(sp.n, d.s + d.t) / volume_const(sp.n, sp.rho + beta)
        dev = abs(val - oracle) / oracle
        return {"value": val.real, "oracle": oracle, "rel_dev": dev}, dev <= 1e-12 * cfg.tol_scale

    return _guard("duality_constants", "<1, 1> = V_{s+t} / V_{rho+beta}",
                  {"s": d.s, "t": d.t, "beta": beta}, f"rel <= {1e-12 * cfg.tol_scale:g}", run)


def duality_checks(cfg):
    return [check_duality(cfg), *check_duality_constraints(cfg), check_duality_oracle(cfg)]


# -- probes campaign -------------------------------------------------------

PROBE_RADII = (0.8, 0.85, 0.9, 0.95, 0.98, 0.99, 0.995)
KERNEL_POWER_CASES = ((2, 2.0, 1.0, 0.0), (2, 3.0, 0.8, 0.5), (3, 1.0, 1.0, 0.0))  # n, alpha, p, b
BRACKET_CASES = ((2, 0.0, 1.0), (2, 0.5, 2.0), (3, 1.0, 1.5))  # n, b, s
BRACKET_BOUNDED = ((2, 0.0, -1.0), (3, 0.5, -1.0))
KERNEL_POWER_BOUNDED = ((2, 0.0, 1.0, 2.0), (3, 0.0, 1.0, 2.0))


def _probe_series(kind, params, n):
    vals = []
    for r in PROBE_RADII:
        x = np.zeros(n)
        x[0] = r
        vals.append(probe_integral(kind, params, x))
    vals = np.array(vals)
    X = np.log(1.0 / (1.0 - np.array(PROBE_RADII) ** 2))
    return vals, float(np.polyfit(X, np.log(vals), 1)[0])


def check_kernel_power(cfg, n, alpha, p, b) -> Check:
    c = p * (n + alpha) - (n + b)

    def run():
        vals, slope = _probe_series("kernel_power", {"alpha": alpha, "p": p, "b": b}, n)
        if c > 0:
            return {"slope": slope, "predicted": c}, abs(slope - c) <= 0.15
        ratio = float(vals.max() / vals.min())
        return {"max_over_min": ratio, "predicted": c}, ratio <= 1.5

    band = "|slope - c| <= 0.15" if c > 0 else "max/min <= 1.5"
    return _guard(f"kernel_power_n{n}_a{alpha:g}_p{p:g}_b{b:g}",
                  "int |R_alpha(x,y)|^p (1-|y|^2)^b dnu(y) ~ (1-|x|^2)^(-c), c = p(n+alpha)-(n+b)",
                  {"n": n, "alpha": alpha, "p": p, "b": b, "c": c, "radii": list(PROBE_RADII)}, band, run)


def check_bracket_power(cfg, n, b, s) -> Check:
    def run():
        vals, slope = _probe_series("bracket_power", {"b": b, "s": s}, n)
        if s > 0:
            return {"slope": slope, "predicted": s}, abs(slope - s) <= 0.15
        ratio = float(vals.max() / vals.min())
        return {"max_over_min": ratio}, ratio <= 1.5

    band = "|slope - s| <= 0.15" if s > 0 else "max/min <= 1.5"
    return _guard(f"bracket_power_n{n}_b{b:g}_s{s:g}",
                  "int (1-|y|^2)^b / [x,y]^(n+b+s) dnu(y): bounded if s<0, (1-|x|^2)^(-s) if s>0",
                  {"n": n, "b": b, "s": s, "radii": list(PROBE_RADII)}, band, run)


def check_segment(cfg: CampaignConfig) -> Check:
    n = cfg.dim

    def run():
        rng = _rng(cfg, 80)
        out = []
        for b, c in ((0.0, 1.0), (0.5, 0.5), (-0.5, 2.0)):
            zeta = _unit(rng, n, 1)[0]
            prods = []
            for r in PROBE_RADII:
                x = r * zeta
                val = probe_integral("segment", {"b": b, "c": c, "y": zeta}, x)
                prods.append(val * bracket(x, zeta) ** c)
            prods = np.array(prods)
            out.append(float(prods.max() / prods.min()))
        return {"max_over_min": out}, all(math.isfinite(v) for v in out)

    return _guard("segment_bound", "int_0^1 (1-tau)^b / [tau x, y]^(1+b+c) dtau <~ 1/[x,y]^c",
                  {"n": n}, "I [x,y]^c bounded above and below (recorded)", run)


MEAN_VALUE_SAMPLES = 200


def _ball_sample(rng, n):
    while True:
        x = _ball_points(rng, n, 1, 0.9)[0]
        rmax = 1.0 - np.linalg.norm(x)
        r = rng.uniform(0.02, 0.98) * rmax
        if r > 1e-3:
            return x, r


def check_mean_value(cfg: CampaignConfig) -> Check:
    n = cfg.dim

    def run():
        rng = _rng(cfg, 90)
        rule = standard_rule(cfg, n, 0.0, cfg.degree + 2)
        dev = 0.0
        for _ in range(MEAN_VALUE_SAMPLES):
            w = random_expansion(n, cfg.degree, 1, int(rng.integers(2**31)))
            # real, positive harmonic u: |u| = u, so the mean-value property is exact
            w = HarmonicExpansion(n, w.poles, w.coeffs.real)
            bound = float(np.sum(np.abs(w.coeffs) * _accel.zonal_diagonal(n, w.max_degree)[None, :]))
            u = w + HarmonicExpansion.constant(n, 1.5 * bound)
            x, r = _ball_sample(rng, n)
            dev = max(dev, abs(mean_value_probe(u, None, 1.0, x, r, rule) - 1.0))
        return {"max_abs_dev_from_1": dev, "samples": MEAN_VALUE_SAMPLES}, dev <= 1e-8 * cfg.tol_scale

    return _guard("mean_value_p1", "|u(x)| <= (K/r^n) int_{B(x,r)} |u| dnu with K = 1 (mean-value property)",
                  {"n": n, "p": 1.0}, f"|K_emp - 1| <= {1e-8 * cfg.tol_scale:g}", run)


def check_subharmonic(cfg: CampaignConfig) -> Check:
    n = cfg.dim

    def run():
        rng = _rng(cfg, 91)
        rule = standard_rule(cfg, n, 0.0, 2 * cfg.degree + 2)
        ks = []
        for _ in range(MEAN_VALUE_SAMPLES):
            u = random_expansion(n, cfg.degree, 1, int(rng.integers(2**31)))
            v = random_expansion(n, cfg.degree, 1, int(rng.integers(2**31)))
            x, r = _ball_sample(rng, n)
            ks.append(mean_value_probe(u, v, 0.5, x, r, rule))
        ks = np.array(ks)
        return ({"max_K": float(ks.max()), "median_K": float(np.median(ks)), "samples": len(ks)},
                bool(np.all(np.isfinite(ks))))

    return _guard("subharmonic_p0.5", "|u(x)v(x)|^p <= (K/r^n) int_{B(x,r)} |uv|^p dnu", {"n": n, "p": 0.5},
                  "K_emp finite (recorded)", run)


def probe_checks(cfg):
    out = [check_kernel_power(cfg, *c) for c in KERNEL_POWER_CASES]
    out += [check_kernel_power(cfg, *c) for c in KERNEL_POWER_BOUNDED]
    out += [check_bracket_power(cfg, *c) for c in BRACKET_CASES + BRACKET_BOUNDED]
    out += [check_segment(cfg), check_mean_value(cfg), check_subharmonic(cfg)]
    return out


# -- atoms campaign --------------------------------------------------------

ATOM_DELTA = 0.25
ATOM_RMAX = 0.85


def _atom_space(cfg):
    # lattices are built in n = 2 (ring counts grow like delta^-(n-1) per ring)
    return SpaceParams(2, cfg.p, cfg.alpha)


def _atom_rule(cfg):
    return build_ball_rule(2, max(cfg.radial_nodes, 30), max(cfg.sphere_nodes, 128), 0.0)


def check_atom_single(cfg: CampaignConfig) -> Check:
    sp = _atom_space(cfg)
    s = sp.rho + 1.0

    def run():
        lat = build_lattice(2, 0.5, 0.85)
        rng = _rng(cfg, 100)
        m = int(rng.integers(lat.size))
        lam = np.zeros(lat.size, dtype=complex)
        lam[m] = complex(*rng.standard_normal(2))
        u = synthesize(lat, AtomCoeffs(lam), s, sp)
        rep = analyze(u, lat, s, sp, ridge=0.0, rule=_atom_rule(cfg))
        err = float(np.max(np.abs(rep.coeffs.lambdas - lam)) / abs(lam[m]))
        return ({"lambda_rel_err": err, "residual": rep.residual, "condition": rep.condition, "atoms": lat.size},
                err <= 1e-6 * cfg.tol_scale and rep.residual <= 1e-8 * cfg.tol_scale)

    return _guard("atom_single_recovery", "atomic decomposition: target in the span of atoms",
                  {"s": s, "delta": 0.5, "r_max": 0.85, "ridge": 0.0},
                  "lambda rel err <= 1e-6, residual <= 1e-8", run)


def check_atom_fit(cfg: CampaignConfig) -> Check:
    sp = _atom_space(cfg)
    s = sp.rho + 1.0

    def run():
        lat = build_lattice(2, ATOM_DELTA, ATOM_RMAX)
        rule = _atom_rule(cfg)
        res, consts = [], []
        normrule = build_ball_rule(2, 24, 128, sp.alpha + sp.p * cfg.t_eff)
        for j in range(3):
            u = random_expansion(2, 5, 2, cfg.seed * 1000 + 700 + j)
            rep = analyze(u, lat, s, sp, rule=rule)
            res.append(rep.residual)
            nu = besov_quasinorm(u, NormSpec(sp, DstVariant(DerivPair(s, cfg.t_eff)), normrule))
            consts.append(rep.lp_norm / nu)
        return {"residuals": res, "lp_over_norm": consts, "atoms": lat.size}, max(res) <= 1e-3

    return _guard("atom_polynomial_fit", "every u in b^p_alpha is an atom sum",
                  {"s": s, "delta": ATOM_DELTA, "r_max": ATOM_RMAX, "degree": 5},
                  "relative residual <= 1e-3", run)


def synthesis_constant(cfg, lat: AtomLattice, s: float, sp: SpaceParams) -> float:
    """sup ||sum lambda_m atom_m|| / ||lambda||_p, estimated by one atom per ring.

    For p <= 1 the quasinorm is p-subadditive, so the supremum over lambda is
    the largest single-atom quasinorm; atoms on one ring differ by a rotation.
    """
    d = DerivPair(s, cfg.t_eff)
    e = sp.alpha + sp.p * d.t
    best = 0.0
    start = 0
    for count in lat.counts:
        lam = np.zeros(lat.size, dtype=complex)
        lam[start] = 1.0
        pos = lat.points[start]
        start += count
        u = _prune(synthesize(lat, AtomCoeffs(lam), s, sp).to_expansion())
        r = np.linalg.norm(pos)
        zeta = pos / r if r > 0 else np.eye(2)[0]
        best = max(best, besov_quasinorm(u, NormSpec(sp, DstVariant(d), _focused(2, zeta, e))))
    return best


def _prune(u: HarmonicExpansion) -> HarmonicExpansion:
    keep = np.flatnonzero(np.any(u.coeffs != 0, axis=1))
    return HarmonicExpansion(u.n, u.poles[keep], u.coeffs[keep])


def check_atom_synthesis(cfg: CampaignConfig) -> Check:
    sp = _atom_space(cfg)
    s = sp.rho + 1.0

    def run():
        c1 = synthesis_constant(cfg, build_lattice(2, ATOM_DELTA, ATOM_RMAX), s, sp)
        c2 = synthesis_constant(cfg, build_lattice(2, ATOM_DELTA / 2, ATOM_RMAX), s, sp)
        change = abs(c2 / c1 - 1.0)
        return {"constant": c1, "constant_refined": c2, "relative_change": change}, change <= 0.20

    return _guard("atom_synthesis_constant", "||sum lambda_m atom_m|| <~ ||lambda||_p",
                  {"s": s, "delta": [ATOM_DELTA, ATOM_DELTA / 2], "r_max": ATOM_RMAX},
                  "stable within 20% under lattice refinement", run)


def check_lattice(cfg: CampaignConfig) -> Check:
    def run():
        out = {}
        ok = True
        for n, delta in ((2, ATOM_DELTA), (2, ATOM_DELTA / 2), (3, 0.5)):
            lat = build_lattice(n, delta, ATOM_RMAX if n == 2 else 0.7)
            sep = lat.min_separation()
            out[f"n={n},delta={delta:g}"] = {"points": lat.size, "min_separation": sep}
            ok &= sep >= lat.separation and bool(np.all(np.linalg.norm(lat.points, axis=1) < 1))
        return out, ok

    return _guard("lattice_separation", "separated sequence (x_m) in B", {}, "separation >= delta/2", run)


def check_atom_pushthrough(cfg: CampaignConfig) -> Check:
    sp = _atom_space(cfg)
    s = sp.rho + 1.0

    def run():
        lat = build_lattice(2, 0.5, 0.8)
        rng = _rng(cfg, 120)
        lam = AtomCoeffs(rng.standard_normal(lat.size) + 1j * rng.standard_normal(lat.size))
        usum = synthesize(lat, lam, s, sp)
        d = DerivPair(s, cfg.t_eff)
        X = _ball_points(rng, 2, 40, 0.9)
        pushed = usum.dst_apply(d).evaluate(X)
        direct = dst_apply(usum.to_expansion(), d).evaluate(X)
        dev = float(np.max(np.abs(pushed - direct)) / np.max(np.abs(direct)))
        return {"max_rel_dev": dev}, dev <= 1e-10 * cfg.tol_scale

    return _guard("atom_dst_pushthrough", "D^t_s passes through the atom series (R_s -> R_{s+t})",
                  {"s": s, "t": cfg.t_eff}, f"rel <= {1e-10 * cfg.tol_scale:g}", run)


def check_atom_nested(cfg: CampaignConfig) -> Check:
    sp = _atom_space(cfg)
    s = sp.rho + 1.0

    def run():
        coarse = build_lattice(2, 0.6, 0.85)
        fine = AtomLattice(2, np.vstack([coarse.points, build_lattice(2, 0.45, 0.85).points[1:]]),
                           (), (), 0.45, 0.85)
        rule = _atom_rule(cfg)
        u = random_expansion(2, 5, 2, cfg.seed * 1000 + 800)
        r1 = analyze(u, coarse, s, sp, ridge=0.0, rule=rule).residual
        r2 = analyze(u, fine, s, sp, ridge=0.0, rule=rule).residual
        return {"coarse": r1, "nested_fine": r2}, r2 <= r1 * (1 + 1e-9)

    return _guard("atom_nested_refinement", "plumbing", {"s": s, "ridge": 0.0, "lattices": "delta 0.6 plus 0.45"},
                  "residual does not increase", run)


def check_atom_tail_guard(cfg: CampaignConfig) -> Check:
    sp = _atom_space(cfg)
    s = sp.rho + 1.0

    def run():
        lat = build_lattice(2, ATOM_DELTA, ATOM_RMAX)
        rng = _rng(cfg, 130)
        lam = rng.standard_normal(lat.size) + 1j * rng.standard_normal(lat.size)
        u = synthesize(lat, AtomCoeffs(lam), s, sp)
        X = _ball_points(rng, 2, 30, 0.5)
        G = u.design(X)
        worst = 0.0
        for M in range(0, lat.size, max(1, lat.size // 8)):
            tail = np.abs(G[:, M:] @ u.coeffs[M:])
            bound = np.sum(np.abs(u.coeffs[M:])) * np.max(np.abs(G[:, M:]))
            worst = max(worst, float(np.max(tail / bound)))
        return {"max_tail_over_bound": worst}, worst <= 1.0

    return _guard("atom_compact_convergence", "the atom series converges absolutely and uniformly on compacts",
                  {"s": s, "max_abs_x": 0.5}, "tail <= sum |lambda_m w_m| max |R_s|", run)


def atom_checks(cfg):
    return [check_atom_single(cfg), check_atom_fit(cfg), check_atom_synthesis(cfg), check_lattice(cfg),
            check_atom_pushthrough(cfg), check_atom_nested(cfg), check_atom_tail_guard(cfg)]


# -- driver ----------------------------------------------------------------

SUITES = {
    "kernel": kernel_checks,
    "equivalence": equivalence_checks,
    "growth": growth_checks,
    "duality": duality_checks,
    "atoms": atom_checks,
    "probes": probe_checks,
}


def env_stamp(cfg: CampaignConfig) -> dict:
    return {
        "version": __version__,
        "backend": _accel.backend(),
        "python": platform.python_version(),
        "numpy": np.__version__,
        "seed": cfg.seed,
        "radial_nodes": cfg.radial_nodes,
        "sphere_nodes": cfg.sphere_nodes,
        "threads": cfg.parallel,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }


def run_campaign(config: CampaignConfig, which: str = "all") -> Report:
    if which != "all" and which not in SUITES:
        raise ConfigError(f"unknown campaign {which!r}; choose from {', '.join(CAMPAIGNS)} or all")
    _accel.set_threads(config.parallel)
    names = CAMPAIGNS if which == "all" else (which,)
    checks = []
    for name in names:
        checks.extend(SUITES[name](config))
    if which == "all":
        checks.append(check_determinism(config))
    return Report(which, _clean(config.to_dict()), checks, env_stamp(config))


def check_determinism(cfg: CampaignConfig) -> Check:
    def run():
        a = [c.record() for c in duality_checks(cfg)]
        b = [c.record() for c in duality_checks(cfg)]
        same = json.dumps(_clean(a), sort_keys=True) == json.dumps(_clean(b), sort_keys=True)
        return {"identical": same}, same

    return _guard("determinism", "plumbing", {"seed": cfg.seed}, "identical report bodies", run)
