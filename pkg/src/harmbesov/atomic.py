"""Ring lattices, kernel atom sums and desk-scale least-squares analysis."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _accel
from .expansion import HarmonicExpansion
from .kernels import NEAR_DIAGONAL, KernelConvergenceError, KernelSpec, SeriesKernel
from .numeric import DerivPair, DomainError, SpaceParams
from .quadrature import BallRule


class ConditioningError(ArithmeticError):
    """Normal equations are too ill-conditioned even after the ridge."""

    def __init__(self, message, condition):
        super().__init__(message)
        self.condition = condition


@dataclass(frozen=True, eq=False)
class AtomLattice:
    n: int
    points: np.ndarray
    radii: tuple
    counts: tuple
    delta: float
    r_max: float

    @property
    def size(self) -> int:
        return self.points.shape[0]

    @property
    def separation(self) -> float:
        """The guaranteed constant delta' = delta / 2."""
        return self.delta / 2.0

    def min_separation(self) -> float:
        """min over pairs of |x_i - x_j| / min(1-|x_i|, 1-|x_j|)."""
        P = self.points
        if len(P) < 2:
            return math.inf
        out = math.inf
        d = 1.0 - np.linalg.norm(P, axis=1)
        for i in range(len(P) - 1):
            dist = np.linalg.norm(P[i + 1:] - P[i], axis=1)
            out = min(out, float(np.min(dist / np.minimum(d[i], d[i + 1:]))))
        return out

    def to_text(self) -> str:
        lines = [f"# atom-lattice n={self.n} delta={self.delta:.17g} r_max={self.r_max:.17g}"]
        lines += [" ".join(f"{v:.17g}" for v in x) for x in self.points]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "AtomLattice":
        header = {}
        pts = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for tok in line[1:].split():
                    if "=" in tok:
                        k, v = tok.split("=", 1)
                        header[k] = v
                continue
            pts.append([float(v) for v in line.split()])
        n = int(header["n"])
        lat = build_lattice(n, float(header["delta"]), float(header["r_max"]))
        P = np.array(pts).reshape(-1, n)
        if P.shape != lat.points.shape or not np.allclose(P, lat.points, rtol=0, atol=1e-15):
            return cls(n, P, (), (), float(header["delta"]), float(header["r_max"]))
        return lat


@dataclass(frozen=True, eq=False)
class AtomCoeffs:
    lambdas: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=np.complex128).reshape(-1)
        object.__setattr__(self, "lambdas", lam)

    def __len__(self):
        return self.lambdas.shape[0]

    def to_text(self) -> str:
        lines = ["# atom-coeffs"]
        lines += [f"{m} {c.real:.17g} {c.imag:.17g}" for m, c in enumerate(self.lambdas)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "AtomCoeffs":
        rows = [line.split() for line in text.splitlines() if line.strip() and not line.startswith("#")]
        lam = np.zeros(len(rows), dtype=np.complex128)
        for m, re, im in rows:
            lam[int(m)] = complex(float(re), float(im))
        return cls(lam)


def _ring_points(n: int, r: float, count: int, offset: float) -> np.ndarray:
    if n == 2:
        phi = 2.0 * np.pi * (np.arange(count) + offset) / count
        return r * np.stack([np.cos(phi), np.sin(phi)], axis=1)
    # Fibonacci sphere, optionally rotated about the polar axis
    i = np.arange(count) + 0.5
    z = 1.0 - 2.0 * i / count
    rho = np.sqrt(np.maximum(1.0 - z * z, 0.0))
    phi = np.pi * (3.0 - math.sqrt(5.0)) * np.arange(count) + 2.0 * np.pi * offset
    return r * np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=1)


def build_lattice(n: int, delta: float, r_max: float) -> AtomLattice:
    """Origin plus rings with 1 - r_{i+1} = (1 - r_i)(1 - delta), r_i <= r_max."""
    if not 0 < delta < 1:
        raise DomainError(f"delta must lie in (0, 1), got {delta}")
    if not 0 < r_max < 1:
        raise DomainError(f"r_max must lie in (0, 1), got {r_max}")
    if n not in (2, 3):
        raise DomainError("ring lattices are implemented for n = 2, 3")
    pts = [np.zeros((1, n))]
    radii = [0.0]
    counts = [1]
    r = delta
    ring = 0
    while r <= r_max:
        gap = delta * (1.0 - r)
        if n == 2:
            m = math.ceil(2.0 * math.pi * r / gap)
        else:
            m = math.ceil(4.0 * math.pi * r * r / (gap * gap))
        m = max(m, 2)
        pts.append(_ring_points(n, r, m, 0.5 * (ring % 2)))
        radii.append(r)
        counts.append(m)
        r = 1.0 - (1.0 - r) * (1.0 - delta)
        ring += 1
    return AtomLattice(n, np.vstack(pts), tuple(radii), tuple(counts), float(delta), float(r_max))


def _check_s(s: float, space: SpaceParams):
    if not s > space.rho:
        raise DomainError(f"atoms need s > (n+alpha)/p - n = {space.rho}, got s={s}")


class AtomSum:
    """u(x) = sum_m lambda_m (1-|x_m|^2)^(n+s-(n+alpha)/p) R_s(x, x_m).

    ``kernel`` may be any series kernel in the first variable; pushing D^t_s
    through the sum replaces it by D^t_s R_s = R_{s+t}.
    """

    def __init__(self, lattice: AtomLattice, lam: AtomCoeffs, s: float, space: SpaceParams,
                 kernel: SeriesKernel | None = None):
        self.lattice = lattice
        self.lam = lam
        self.s = float(s)
        self.space = space
        self.kernel = kernel if kernel is not None else KernelSpec(space.n, s).series()
        onem = 1.0 - np.sum(lattice.points ** 2, axis=1)
        self.atom_weights = onem ** (space.n + s - (space.n + space.alpha) / space.p)
        self.coeffs = lam.lambdas * self.atom_weights

    @property
    def n(self):
        return self.lattice.n

    def dst_apply(self, d: DerivPair) -> "AtomSum":
        return AtomSum(self.lattice, self.lam, self.s, self.space, self.kernel.multiplied(d))

    def design(self, X) -> np.ndarray:
        """Matrix of R(x_i, x_m) (unweighted kernel atoms)."""
        X = np.asarray(X, dtype=float).reshape(-1, self.n)
        P = self.lattice.points
        XX = np.repeat(X, P.shape[0], axis=0)
        PP = np.tile(P, (X.shape[0], 1))
        seq = self.kernel.sequence
        val, _, _, tails, kused, status = _accel.kernel_sums(
            self.n, XX, PP, seq.num, seq.den, 0, self.kernel.tail_tol, self.kernel.K_cap, NEAR_DIAGONAL)
        if np.any(status != 0):
            i = int(np.flatnonzero(status)[0])
            raise KernelConvergenceError(f"atom kernel failed at x={XX[i]}, x_m={PP[i]}",
                                         float(tails[i]), int(kused[i]), (XX[i], PP[i]))
        return val.reshape(X.shape[0], P.shape[0])

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        X = x.reshape(-1, self.n)
        out = self.design(X) @ self.coeffs
        return out.reshape(x.shape[:-1]) if x.ndim > 1 else complex(out[0])

    __call__ = evaluate

    def truncation_degree(self, tol: float = 1e-16) -> int:
        """Degree after which sum_k c_k Z_k(x, x_m) is below tol for all |x| < 1."""
        rmax = float(np.max(np.linalg.norm(self.lattice.points, axis=1)))
        if rmax == 0.0:
            return 0
        Kc = 64
        while True:
            c = self.kernel.sequence.values(Kc) * _accel.zonal_diagonal(self.n, Kc)
            k = np.arange(Kc + 1)
            terms = c * rmax ** k
            if terms[-1] < tol * np.max(terms) and np.all(np.diff(terms[-16:]) <= 0):
                idx = np.flatnonzero(terms >= tol * np.max(terms))
                return int(idx[-1]) + 1
            Kc *= 2
            if Kc > 200_000:
                raise DomainError("atom lattice too close to the boundary to truncate")

    def to_expansion(self, K: int | None = None) -> HarmonicExpansion:
        """Finite expansion sum_m coeff_m sum_{k<=K} c_k Z_k(., x_m)."""
        if K is None:
            K = self.truncation_degree()
        c = self.kernel.sequence.values(K)
        return HarmonicExpansion(self.n, self.lattice.points, self.coeffs[:, None] * c[None, :])


def synthesize(lattice: AtomLattice, lam: AtomCoeffs, s: float, space: SpaceParams) -> AtomSum:
    _check_s(s, space)
    if len(lam) != lattice.size:
        raise ValueError("one coefficient per lattice point is required")
    if lattice.n != space.n:
        raise DomainError("lattice and space dimensions differ")
    return AtomSum(lattice, lam, s, space)


@dataclass(frozen=True)
class AnalysisReport:
    coeffs: AtomCoeffs
    residual: float  # relative quadrature L2 residual
    lp_norm: float
    condition: float
    ridge: float


def analyze(u, lattice: AtomLattice, s: float, space: SpaceParams, ridge: float | None = None,
            rule: BallRule | None = None, max_condition: float = 1e14) -> AnalysisReport:
    """Ridge least squares for lambda on the rule's nodes."""
    _check_s(s, space)
    if rule is None:
        raise DomainError("analyze needs a quadrature rule")
    if ridge is not None and ridge < 0:
        raise DomainError("ridge must be >= 0")
    X = rule.nodes
    probe = AtomSum(lattice, AtomCoeffs(np.ones(lattice.size)), s, space)
    A = probe.design(X) * probe.atom_weights[None, :]
    b = np.asarray(u(X) if callable(u) else u, dtype=np.complex128)
    sw = np.sqrt(rule.weights)
    Aw = A * sw[:, None]
    bw = b * sw
    sv = np.linalg.svd(Aw, compute_uv=False)
    if ridge is None:
        ridge = 1e-10 * float(np.sum(sv ** 2))
    cond = math.sqrt((sv[0] ** 2 + ridge) / (sv[-1] ** 2 + ridge)) if sv[-1] > 0 or ridge > 0 else math.inf
    if cond > max_condition:
        raise ConditioningError(f"normal equations have condition number {cond:.3e}", cond)
    m = lattice.size
    if ridge > 0:
        Aa = np.vstack([Aw, math.sqrt(ridge) * np.eye(m)])
        ba = np.concatenate([bw, np.zeros(m)])
    else:
        Aa, ba = Aw, bw
    lam, *_ = np.linalg.lstsq(Aa, ba, rcond=None)
    res = np.linalg.norm(Aw @ lam - bw) / max(np.linalg.norm(bw), 1e-300)
    coeffs = AtomCoeffs(lam)
    return AnalysisReport(coeffs, float(res), seq_lp_norm(coeffs, space.p), float(cond), float(ridge))


def seq_lp_norm(lam: AtomCoeffs, p: float) -> float:
    """(sum_m |lambda_m|^p)^(1/p)."""
    if not p > 0:
        raise DomainError("p must be positive")
    a = np.abs(lam.lambdas)
    if a.size == 0:
        return 0.0
    return float(np.sum(a ** p) ** (1.0 / p))
