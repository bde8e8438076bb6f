"""Finite harmonic expansions u = sum_p sum_k C[p, k] Z_k(., y_p).

Each pole y_p carries a dense vector of degree coefficients, so a degree-k
coefficient multiplier (R^N, D^t_s, dilation) is a column scaling and the
degree-k homogeneous part of u is sum_p C[p, k] Z_k(., y_p).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _accel
from .numeric import DerivPair, DomainError, multiplier_sequence


@dataclass(frozen=True)
class MultiIndex:
    """Multi-index m = (m_1, ..., m_n) with |m| <= 2."""

    components: tuple

    def __post_init__(self):
        comps = tuple(int(c) for c in self.components)
        if any(c < 0 for c in comps):
            raise DomainError(f"multi-index entries must be >= 0: {comps}")
        object.__setattr__(self, "components", comps)

    @property
    def order(self) -> int:
        return sum(self.components)

    @classmethod
    def all_of_order(cls, n: int, order: int) -> list["MultiIndex"]:
        out = []
        if order == 0:
            return [cls((0,) * n)]
        if order == 1:
            for i in range(n):
                c = [0] * n
                c[i] = 1
                out.append(cls(tuple(c)))
            return out
        if order == 2:
            for i in range(n):
                for j in range(i, n):
                    c = [0] * n
                    c[i] += 1
                    c[j] += 1
                    out.append(cls(tuple(c)))
            return out
        raise DomainError(f"derivative order {order} > 2 is unsupported")


class HarmonicExpansion:
    """u(x) = sum_p sum_k coeffs[p, k] Z_k(x, poles[p]) in dimension n."""

    def __init__(self, n: int, poles, coeffs):
        poles = np.asarray(poles, dtype=np.float64).reshape(-1, n)
        coeffs = np.asarray(coeffs, dtype=np.complex128)
        if coeffs.ndim == 1:
            coeffs = coeffs[None, :]
        if coeffs.shape[0] != poles.shape[0]:
            raise ValueError("one coefficient row per pole is required")
        if coeffs.shape[1] == 0:
            coeffs = np.zeros((poles.shape[0], 1), dtype=np.complex128)
        self.n = int(n)
        self.poles = poles
        self.coeffs = coeffs
        self.poles.setflags(write=False)
        self.coeffs.setflags(write=False)

    # -- construction -----------------------------------------------------

    @classmethod
    def constant(cls, n: int, c: complex = 1.0) -> "HarmonicExpansion":
        return cls(n, np.zeros((1, n)), np.array([[c]]))

    @classmethod
    def zero(cls, n: int) -> "HarmonicExpansion":
        return cls.constant(n, 0.0)

    @classmethod
    def from_terms(cls, n: int, terms: Iterable[tuple]) -> "HarmonicExpansion":
        """Build from (k, pole, coeff) triples; equal poles share a row."""
        rows: dict = {}
        order = []
        for k, pole, c in terms:
            key = tuple(float(v) for v in pole)
            if key not in rows:
                rows[key] = {}
                order.append(key)
            rows[key][int(k)] = rows[key].get(int(k), 0) + complex(c)
        if not order:
            return cls.zero(n)
        K = max(max(r) for r in rows.values())
        C = np.zeros((len(order), K + 1), dtype=np.complex128)
        for i, key in enumerate(order):
            for k, c in rows[key].items():
                C[i, k] = c
        return cls(n, np.array(order), C)

    @property
    def max_degree(self) -> int:
        return self.coeffs.shape[1] - 1

    def terms(self):
        """Nonzero (k, pole, coeff) triples."""
        for i, pole in enumerate(self.poles):
            for k in np.flatnonzero(self.coeffs[i]):
                yield int(k), pole.copy(), complex(self.coeffs[i, k])

    def degree_scaled(self, factors: Sequence[float]) -> "HarmonicExpansion":
        """Multiply the degree-k part by factors[k]."""
        f = np.asarray(factors)[: self.coeffs.shape[1]]
        return HarmonicExpansion(self.n, self.poles, self.coeffs * f[None, :])

    # -- algebra ----------------------------------------------------------

    def __add__(self, other: "HarmonicExpansion") -> "HarmonicExpansion":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        K = max(self.max_degree, other.max_degree)
        C = np.zeros((self.poles.shape[0] + other.poles.shape[0], K + 1), dtype=np.complex128)
        C[: self.poles.shape[0], : self.coeffs.shape[1]] = self.coeffs
        C[self.poles.shape[0]:, : other.coeffs.shape[1]] = other.coeffs
        return HarmonicExpansion(self.n, np.vstack([self.poles, other.poles]), C)

    def __mul__(self, c: complex) -> "HarmonicExpansion":
        return HarmonicExpansion(self.n, self.poles, self.coeffs * c)

    __rmul__ = __mul__

    def __sub__(self, other):
        return self + (-1.0) * other

    def conj(self) -> "HarmonicExpansion":
        # Z_k is real, so conjugation acts on coefficients only
        return HarmonicExpansion(self.n, self.poles, self.coeffs.conj())

    # -- evaluation -------------------------------------------------------

    def _sums(self, x, order):
        x = np.asarray(x, dtype=np.float64)
        X = x.reshape(-1, self.n)
        v, g, h = _accel.expansion_sums(self.n, X, self.poles, self.coeffs, order)
        return x.shape[:-1], v, g, h

    def evaluate(self, x):
        """u(x) for a point (n,) or an array of points (..., n)."""
        lead, v, _, _ = self._sums(x, 0)
        return v.reshape(lead) if lead else complex(v[0])

    __call__ = evaluate

    def gradient(self, x):
        lead, _, g, _ = self._sums(x, 1)
        return g.reshape(lead + (self.n,)) if lead else g[0]

    def hessian(self, x):
        lead, _, _, h = self._sums(x, 2)
        return h.reshape(lead + (self.n, self.n)) if lead else h[0]

    def dst_apply(self, d: DerivPair) -> "HarmonicExpansion":
        return dst_apply(self, d)

    def __repr__(self):
        return f"HarmonicExpansion(n={self.n}, poles={self.poles.shape[0]}, degree<={self.max_degree})"

    # -- text records -----------------------------------------------------

    def to_text(self) -> str:
        """One line per term: ``k pole_1 .. pole_n re(c) im(c)``."""
        lines = [f"# harmonic-expansion n={self.n}"]
        for k, pole, c in self.terms():
            coords = " ".join(f"{v:.17g}" for v in pole)
            lines.append(f"{k} {coords} {c.real:.17g} {c.imag:.17g}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, n: int | None = None) -> "HarmonicExpansion":
        terms = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for tok in line[1:].split():
                    if tok.startswith("n="):
                        n = int(tok[2:])
                continue
            fields = line.split()
            dim = len(fields) - 3
            if n is None:
                n = dim
            elif dim != n:
                raise ValueError(f"record has {dim} pole coordinates, expected {n}")
            k = int(fields[0])
            pole = [float(v) for v in fields[1:1 + dim]]
            terms.append((k, pole, complex(float(fields[-2]), float(fields[-1]))))
        if n is None:
            raise ValueError("cannot infer the dimension of an empty record")
        return cls.from_terms(n, terms)


def evaluate(u: HarmonicExpansion, x):
    return u.evaluate(x)


def partial_deriv(u: HarmonicExpansion, m: MultiIndex, x):
    """Exact partial derivative d^m u at x (|m| <= 2)."""
    if not isinstance(m, MultiIndex):
        m = MultiIndex(tuple(m))
    if len(m.components) != u.n:
        raise DomainError(f"multi-index {m.components} does not match n={u.n}")
    if m.order > 2:
        raise DomainError(f"derivative order |m|={m.order} > 2 is unsupported")
    if m.order == 0:
        return u.evaluate(x)
    idx = [i for i, c in enumerate(m.components) for _ in range(c)]
    if m.order == 1:
        return u.gradient(x)[..., idx[0]]
    return u.hessian(x)[..., idx[0], idx[1]]


def radial_power(u: HarmonicExpansion, N: int) -> HarmonicExpansion:
    """R^N u = sum_k k^N u_k."""
    if N < 0:
        raise DomainError(f"N must be >= 0, got {N}")
    k = np.arange(u.max_degree + 1, dtype=np.float64)
    return u.degree_scaled(k ** N if N > 0 else np.ones_like(k))


def dst_factors(n: int, d: DerivPair, K: int) -> np.ndarray:
    """gamma_k(s+t) / gamma_k(s) for k = 0..K."""
    return multiplier_sequence(n, d.s, d.t).values(K)


def dst_apply(u: HarmonicExpansion, d: DerivPair) -> HarmonicExpansion:
    """D^t_s u: degree-k part multiplied by gamma_k(s+t) / gamma_k(s)."""
    if d.t == 0:
        return u
    return u.degree_scaled(dst_factors(u.n, d, u.max_degree))


def its_field(u: HarmonicExpansion, d: DerivPair):
    """The map x -> (1 - |x|^2)^t D^t_s u(x), defined on the open ball."""
    v = dst_apply(u, d)

    def field(x):
        x = np.asarray(x, dtype=np.float64)
        r2 = np.sum(x * x, axis=-1)
        if np.any(r2 >= 1.0):
            raise DomainError("I^t_s u is only defined for |x| < 1")
        return (1.0 - r2) ** d.t * v.evaluate(x)

    field.expansion = v
    field.t = d.t
    return field


def dilate(u: HarmonicExpansion, r: float) -> HarmonicExpansion:
    """u_r(x) = u(r x)."""
    if not 0 < r <= 1:
        raise DomainError(f"dilation radius must lie in (0, 1], got {r}")
    return u.degree_scaled(r ** np.arange(u.max_degree + 1, dtype=np.float64))


def random_expansion(n: int, max_degree: int, terms_per_degree: int, seed: int) -> HarmonicExpansion:
    """Poles uniform on S, coefficients standard complex Gaussian."""
    if max_degree < 0:
        raise DomainError("max_degree must be >= 0")
    rng = np.random.default_rng(seed)
    npole = (max_degree + 1) * terms_per_degree
    poles = rng.standard_normal((npole, n))
    poles /= np.linalg.norm(poles, axis=1, keepdims=True)
    C = np.zeros((npole, max_degree + 1), dtype=np.complex128)
    vals = (rng.standard_normal(npole) + 1j * rng.standard_normal(npole)) / np.sqrt(2.0)
    for i in range(npole):
        C[i, i // terms_per_degree] = vals[i]
    return HarmonicExpansion(n, poles, C)
