"""Product quadrature on the unit ball.

Integrals against the normalized measure are split as

    int_B f dnu = (n/2) int_0^1 u^(n/2-1) int_S f(sqrt(u) z) dsigma(z) du,

with u = |x|^2. The radial factor is Gauss-Jacobi in u, so a weight
(1-|x|^2)^a with a the rule's Jacobi exponent is integrated exactly. Every
rule stores 1-|x|^2 per node (computed without cancellation) and its weights
form a probability measure: sum_i w_i g(x_i) ~ V_a^-1 int g (1-|x|^2)^a dnu.

Peaked integrands (functions with a pole just outside the ball) use graded
rules: geometric panels in 1-u and in the angle from a focus direction.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import lebedev_rule
from scipy.special import roots_jacobi, roots_legendre
from scipy.stats import norm, qmc

from .numeric import DomainError, volume_const

LEBEDEV_ORDERS = (3, 5, 7, 9, 11, 13, 15, 17, 19, 21, 23, 25, 27, 29, 31, 35,
                  41, 47, 53, 59, 65, 71, 77, 83, 89, 95, 101, 107, 113, 119, 125, 131)


class QuadratureWarning(UserWarning):
    """A weight is not absorbed by the rule, or a fallback rule is in use."""


@dataclass(frozen=True, eq=False)
class BallRule:
    n: int
    nodes: np.ndarray
    weights: np.ndarray
    onem: np.ndarray  # 1 - |x|^2 at each node
    radial_degree: int
    sphere_degree: int
    jacobi_exponent: float = 0.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for a in (self.nodes, self.weights, self.onem):
            a.setflags(write=False)

    @property
    def size(self) -> int:
        return self.weights.shape[0]

    @property
    def exactness(self) -> int:
        return min(self.radial_degree, self.sphere_degree)

    def weights_for(self, alpha: float) -> np.ndarray:
        """Weights of the normalized measure dnu_alpha at this rule's nodes."""
        jac = self.jacobi_exponent
        if alpha == jac:
            return self.weights
        if alpha < jac:
            warnings.warn(
                f"weight exponent {alpha} below the rule's Jacobi exponent {jac}; "
                "the boundary singularity is sampled, not integrated exactly",
                QuadratureWarning, stacklevel=3,
            )
        return self.weights * (volume_const(self.n, jac) / volume_const(self.n, alpha)) * self.onem ** (alpha - jac)

    def integrate(self, values, alpha: float | None = None):
        """sum_i w_i f(x_i) against dnu_alpha (alpha defaults to the Jacobi exponent)."""
        w = self.weights if alpha is None else self.weights_for(alpha)
        return np.sum(w * np.asarray(values))


# -- one-dimensional rules -------------------------------------------------


@lru_cache(maxsize=256)
def _gj(N: int, a: float, b: float):
    # nodes/weights on [-1, 1] for (1-t)^a (1+t)^b
    t, w = roots_jacobi(N, a, b)
    return t, w


@lru_cache(maxsize=256)
def _gl(N: int):
    return roots_legendre(N)


def radial_rule(n: int, N: int, jac: float):
    """(u, 1-u, weights) for (n/2) u^(n/2-1) (1-u)^jac du / V_jac on [0, 1]."""
    if N < 1:
        raise DomainError("need at least one radial node")
    if jac <= -1:
        raise DomainError(f"Jacobi exponent must exceed -1, got {jac}")
    t, w = _gj(N, jac, n / 2.0 - 1.0)
    u = (1.0 + t) / 2.0
    return u, (1.0 - t) / 2.0, w / np.sum(w)


def _log_panels(lo: float, hi: float, per_panel: int, ratio: float):
    """GL nodes in s = log(v) over [lo, hi]; returns v and dv-weights."""
    t, w = _gl(per_panel)
    edges = np.arange(np.log(lo), np.log(hi), -np.log(ratio))
    edges = np.append(edges, np.log(hi))
    if len(edges) > 2 and edges[-1] - edges[-2] < 0.25 * -np.log(ratio):
        edges = np.delete(edges, -2)
    v_all, w_all = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        sv = a + (b - a) * (1.0 + t) / 2.0
        v = np.exp(sv)
        v_all.append(v)
        w_all.append(w * (b - a) / 2.0 * v)
    return np.concatenate(v_all), np.concatenate(w_all)


def graded_radial_rule(n: int, per_panel: int, jac: float, eps: float = 1e-7, ratio: float = 0.25):
    """Radial rule graded geometrically toward u = 1.

    Pieces: u in [0, 1/2] (Gauss-Jacobi for u^(n/2-1)), 1-u in [eps, 1/2]
    (Gauss-Legendre in log(1-u), where the integrand is analytic), and
    1-u in [0, eps] (Gauss-Jacobi for (1-u)^jac).
    """
    h = n / 2.0
    t, w = _gj(per_panel, 0.0, h - 1.0)
    u0 = 0.25 * (1.0 + t)
    om0 = 1.0 - u0
    w0 = w * 0.25 ** h * om0 ** jac
    om1, w1 = _log_panels(eps, 0.5, per_panel, ratio)
    u1 = 1.0 - om1
    w1 = w1 * u1 ** (h - 1.0) * om1 ** jac
    t, w = _gj(per_panel, jac, 0.0)
    om2 = eps * (1.0 - t) / 2.0
    u2 = 1.0 - om2
    w2 = w * (eps / 2.0) ** (jac + 1.0) * u2 ** (h - 1.0)
    u = np.concatenate([u0, u1, u2])
    om = np.concatenate([om0, om1, om2])
    wt = np.concatenate([w0, w1, w2])
    # exact mass is V_jac / h; renormalizing removes the residual panel error
    return u, om, wt / np.sum(wt)


def segment_rule(N: int, b: float, grade: bool = True, eps: float = 1e-9):
    """Nodes/weights on [0, 1] for the weight (1 - tau)^b (unnormalized).

    With ``grade`` the interval is split geometrically toward tau = 1 so
    integrands peaked there are resolved.
    """
    if b <= -1:
        raise DomainError(f"segment weight exponent must exceed -1, got {b}")
    if not grade:
        t, w = _gj(N, b, 0.0)
        return (1.0 + t) / 2.0, w * 0.5 ** (b + 1.0)
    tau_all, w_all = [], []
    hi = 1.0
    while True:
        lo = hi * 0.25
        if lo < eps:
            lo = 0.0
        # panel 1-tau in [lo, hi]
        if lo == 0.0:
            t, w = _gj(N, b, 0.0)
            om = hi * (1.0 - t) / 2.0
            wt = w * (hi / 2.0) ** (b + 1.0)
        else:
            t, w = _gl(N)
            om = hi - (hi - lo) * (1.0 + t) / 2.0
            wt = w * (hi - lo) / 2.0 * om ** b
        tau_all.append(1.0 - om)
        w_all.append(wt)
        if lo == 0.0:
            break
        hi = lo
    return np.concatenate(tau_all), np.concatenate(w_all)


# -- sphere rules ----------------------------------------------------------


def sphere_rule(n: int, points: int, seed: int = 0):
    """(directions, weights, exact degree, metadata) on S^(n-1), weights summing to 1."""
    if points < 1:
        raise DomainError("need at least one sphere node")
    if n == 2:
        phi = 2.0 * np.pi * np.arange(points) / points
        dirs = np.stack([np.cos(phi), np.sin(phi)], axis=1)
        return dirs, np.full(points, 1.0 / points), points - 1, {"sphere": f"equispaced-{points}"}
    if n == 3:
        order = next((o for o, m in zip(LEBEDEV_ORDERS, _lebedev_sizes()) if m >= points), LEBEDEV_ORDERS[-1])
        x, w = lebedev_rule(order)
        return x.T.copy(), w / np.sum(w), order, {"sphere": f"lebedev-{order}"}
    warnings.warn(f"no product sphere design for n={n}; using scrambled Sobol points",
                  QuadratureWarning, stacklevel=2)
    m = 1 << max(int(math.ceil(math.log2(points))), 1)
    z = qmc.Sobol(d=n, scramble=True, seed=seed).random(m)
    g = norm.ppf(np.clip(z, 1e-12, 1 - 1e-12))
    dirs = g / np.linalg.norm(g, axis=1, keepdims=True)
    return dirs, np.full(m, 1.0 / m), 0, {"sphere": f"qmc-{m}", "fallback": "qmc"}


@lru_cache(maxsize=1)
def _lebedev_sizes():
    return (6, 14, 26, 38, 50, 74, 86, 110, 146, 170, 194, 230, 266, 302, 350, 434,
            590, 770, 974, 1202, 1454, 1730, 2030, 2354, 2702, 3074, 3470, 3890,
            4334, 4802, 5294, 5810)


def _frame(zeta):
    """Orthogonal matrix whose last column is the unit vector zeta."""
    zeta = np.asarray(zeta, dtype=float)
    zeta = zeta / np.linalg.norm(zeta)
    n = zeta.shape[0]
    e = np.zeros(n)
    e[-1] = 1.0
    v = zeta - e
    if np.linalg.norm(v) < 1e-14:
        return np.eye(n)
    v /= np.linalg.norm(v)
    return np.eye(n) - 2.0 * np.outer(v, v)


def focused_sphere_rule(n: int, zeta, per_panel: int = 8, h0: float = 1e-3,
                        ratio: float = 0.25, azimuth: int = 16):
    """Sphere rule graded geometrically in the angle theta from zeta."""
    if n not in (2, 3):
        raise DomainError("focused sphere rules are available for n = 2, 3")
    t, w = _gl(per_panel)
    th0 = h0 * (1.0 + t) / 2.0
    w0 = w * h0 / 2.0
    th1, w1 = _log_panels(h0, np.pi, per_panel, ratio)
    th = np.concatenate([th0, th1])
    wth = np.concatenate([w0, w1])
    R = _frame(zeta)
    if n == 2:
        ang = np.concatenate([th, -th])
        wts = np.concatenate([wth, wth]) / (2.0 * np.pi)
        local = np.stack([np.sin(ang), np.cos(ang)], axis=1)
    else:
        phi = 2.0 * np.pi * (np.arange(azimuth) + 0.5) / azimuth
        T, P = np.meshgrid(th, phi, indexing="ij")
        WT = np.broadcast_to((wth * np.sin(th))[:, None], T.shape) / (4.0 * np.pi) * (2.0 * np.pi / azimuth)
        local = np.stack([np.sin(T) * np.cos(P), np.sin(T) * np.sin(P), np.cos(T)], axis=-1).reshape(-1, 3)
        wts = WT.reshape(-1)
    dirs = local @ R.T
    return dirs, wts / np.sum(wts)


# -- ball rules ------------------------------------------------------------


def _product(n, u, om, wr, dirs, ws):
    r = np.sqrt(u)
    nodes = (r[:, None, None] * dirs[None, :, :]).reshape(-1, n)
    weights = (wr[:, None] * ws[None, :]).reshape(-1)
    onem = np.repeat(om, dirs.shape[0])
    return nodes, weights, onem


def build_ball_rule(n: int, radial_points: int, sphere_points: int, jacobi_exponent: float = 0.0,
                    seed: int = 0) -> BallRule:
    """Gauss-Jacobi (in |x|^2) times a sphere design."""
    if n < 2:
        raise DomainError("n must be >= 2")
    u, om, wr = radial_rule(n, radial_points, jacobi_exponent)
    dirs, ws, sdeg, meta = sphere_rule(n, sphere_points, seed)
    nodes, weights, onem = _product(n, u, om, wr, dirs, ws)
    meta = dict(meta, radial=f"gauss-jacobi-{radial_points}", kind="product")
    # Gauss-Jacobi with N nodes is exact to degree 2N-1 in u = |x|^2
    return BallRule(n, nodes, weights, onem, 4 * radial_points - 2, sdeg, float(jacobi_exponent), meta)


def build_focused_rule(n: int, focus, radial_per_panel: int = 8, angular_per_panel: int = 8,
                       jacobi_exponent: float = 0.0, eps: float = 1e-7, h0: float = 1e-3,
                       azimuth: int = 16) -> BallRule:
    """Rule graded toward the boundary point ``focus`` (a unit vector)."""
    u, om, wr = graded_radial_rule(n, radial_per_panel, jacobi_exponent, eps)
    dirs, ws = focused_sphere_rule(n, focus, angular_per_panel, h0, azimuth=azimuth)
    nodes, weights, onem = _product(n, u, om, wr, dirs, ws)
    meta = {"kind": "focused", "focus": [float(v) for v in np.asarray(focus)], "azimuth": azimuth,
            "layout": (len(u), dirs.shape[0] // (azimuth if n == 3 else 1), azimuth if n == 3 else 1),
            "radial": f"graded-{radial_per_panel}", "sphere": f"graded-{angular_per_panel}"}
    return BallRule(n, nodes, weights, onem, 2 * radial_per_panel - 1, 2 * angular_per_panel - 1,
                    float(jacobi_exponent), meta)


def axial_rotations(rule: BallRule) -> np.ndarray | None:
    """For n = 3 focused rules: matrices Q_j with node(i, j) = Q_j node(i, 0).

    Node (radial, theta, j) is node (radial, theta, 0) rotated by the j-th
    azimuth about the focus axis. Returns None for other rules.
    """
    if rule.meta.get("kind") != "focused" or rule.n != 3:
        return None
    m = rule.meta["azimuth"]
    F = _frame(rule.meta["focus"])
    ang = 2.0 * np.pi * np.arange(m) / m
    Q = np.zeros((m, 3, 3))
    Q[:, 0, 0] = np.cos(ang)
    Q[:, 0, 1] = -np.sin(ang)
    Q[:, 1, 0] = np.sin(ang)
    Q[:, 1, 1] = np.cos(ang)
    Q[:, 2, 2] = 1.0
    return np.einsum("ab,jbc,dc->jad", F, Q, F)


def refine(rule: BallRule) -> BallRule:
    """The same family with doubled node counts in each direction."""
    meta = rule.meta
    if meta.get("kind") == "focused":
        rp = int(meta["radial"].split("-")[1])
        ap = int(meta["sphere"].split("-")[1])
        return build_focused_rule(rule.n, meta["focus"], 2 * rp, 2 * ap, rule.jacobi_exponent,
                                  azimuth=2 * meta.get("azimuth", 16))
    N = int(meta["radial"].split("-")[-1])
    M = int(meta["sphere"].split("-")[-1])
    if rule.n == 3:
        M = _lebedev_sizes()[list(LEBEDEV_ORDERS).index(M)]
    return build_ball_rule(rule.n, 2 * N, 2 * M, rule.jacobi_exponent)


def translated_rule(rule: BallRule, center, radius: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and dnu-weights of the ball B(center, radius): total mass radius^n."""
    if rule.jacobi_exponent != 0.0:
        raise DomainError("translated rules need an unweighted (Jacobi exponent 0) base rule")
    center = np.asarray(center, dtype=float)
    if np.linalg.norm(center) + radius >= 1.0:
        raise DomainError("the ball B(x, r) must lie inside the unit ball")
    return center[None, :] + radius * rule.nodes, rule.weights * radius ** rule.n
