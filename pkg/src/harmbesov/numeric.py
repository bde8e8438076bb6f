"""Scalar special functions and parameter bookkeeping.

Pochhammer symbols, the kernel coefficients gamma_k(alpha), the weighted
volume constants V_alpha and the bracket [x, y].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, gammasgn

#: Hard cap on the degree of any coefficient sequence.
K_CAP_DEFAULT = 100_000


class DomainError(ValueError):
    """A parameter or point lies outside the domain of an operation."""


def _is_pole(z: float) -> bool:
    return z <= 0 and float(z).is_integer()


def pochhammer(a: float, b: float) -> float:
    """Return (a)_b = Gamma(a + b) / Gamma(a).

    Integer ``b >= 0`` is evaluated as the finite product a(a+1)...(a+b-1);
    otherwise log-gamma differences with explicit sign tracking are used.
    """
    if _is_pole(a):
        raise DomainError(f"pochhammer: a={a!r} is a pole of the gamma function")
    if _is_pole(a + b):
        raise DomainError(f"pochhammer: a+b={a + b!r} is a pole of the gamma function")
    if float(b).is_integer() and b >= 0:
        out = 1.0
        for j in range(int(b)):
            out *= a + j
        return out
    sign = gammasgn(a + b) * gammasgn(a)
    return float(sign * math.exp(gammaln(a + b) - gammaln(a)))


@dataclass(frozen=True)
class SpaceParams:
    """The triple (n, p, alpha) of a Besov space b^p_alpha."""

    n: int
    p: float
    alpha: float
    rho: float = field(init=False)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"dimension n must be an integer >= 2, got {self.n!r}")
        if not 0 < self.p <= 1:
            raise DomainError(f"exponent p must lie in (0, 1], got {self.p!r}")
        object.__setattr__(self, "rho", (self.n + self.alpha) / self.p - self.n)


@dataclass(frozen=True)
class DerivPair:
    """Parameters (s, t) of the radial multiplier D^t_s."""

    s: float
    t: float


class CoeffSequence:
    """Positive sequence c_k = prod_i (num_i)_k / (den_i)_k with c_0 = 1.

    Every sequence the package needs (gamma_k(alpha), the multiplier ratios
    gamma_k(s+t)/gamma_k(s), and products of these) has this form, and all
    shifts are positive, so c_{k+1} = c_k * prod_i (num_i + k) / (den_i + k).
    """

    def __init__(self, pairs=()):
        num = sorted(float(a) for a, _ in pairs)
        den = sorted(float(b) for _, b in pairs)
        # cancel shifts common to numerator and denominator
        for v in list(num):
            if v in den:
                num.remove(v)
                den.remove(v)
        if any(v <= 0 for v in num + den):
            raise DomainError(f"coefficient shifts must be positive: {num}, {den}")
        self.num = np.array(num, dtype=np.float64)
        self.den = np.array(den, dtype=np.float64)

    @property
    def pairs(self):
        return tuple(zip(self.num.tolist(), self.den.tolist()))

    def __mul__(self, other: "CoeffSequence") -> "CoeffSequence":
        return _from_lists(
            list(self.num) + list(other.num), list(self.den) + list(other.den)
        )

    def inverse(self) -> "CoeffSequence":
        return _from_lists(list(self.den), list(self.num))

    def values(self, K: int) -> np.ndarray:
        """Return c_0, ..., c_K."""
        k = np.arange(K, dtype=np.float64)
        ratio = np.ones(K)
        for a in self.num:
            ratio *= a + k
        for b in self.den:
            ratio /= b + k
        out = np.empty(K + 1)
        out[0] = 1.0
        out[1:] = np.cumprod(ratio)
        return out

    def __eq__(self, other):
        return (
            isinstance(other, CoeffSequence)
            and np.array_equal(self.num, other.num)
            and np.array_equal(self.den, other.den)
        )

    def __hash__(self):
        return hash((tuple(self.num), tuple(self.den)))

    def __repr__(self):
        return f"CoeffSequence(num={self.num.tolist()}, den={self.den.tolist()})"


def _from_lists(num, den) -> CoeffSequence:
    # pad so that zip pairs every shift; padding with a common shift cancels
    m = max(len(num), len(den))
    pad = 1.0
    num = list(num) + [pad] * (m - len(num))
    den = list(den) + [pad] * (m - len(den))
    return CoeffSequence(list(zip(num, den)))


def gamma_sequence(n: int, alpha: float) -> CoeffSequence:
    """Coefficient sequence k -> gamma_k(alpha) in dimension n."""
    h = n / 2.0
    # branch boundary alpha = -(1 + n/2) goes to the second branch
    if alpha > -(1.0 + h):
        return CoeffSequence([(1.0 + h + alpha, h)])
    return CoeffSequence([(1.0, 1.0 - (h + alpha)), (1.0, h)])


def multiplier_sequence(n: int, s: float, t: float) -> CoeffSequence:
    """Coefficient sequence of D^t_s, k -> gamma_k(s+t) / gamma_k(s)."""
    return gamma_sequence(n, s + t) * gamma_sequence(n, s).inverse()


def gamma_coeff(n: int, alpha: float, k: int) -> float:
    """gamma_k(alpha) from its Pochhammer definition (two branches)."""
    if k < 0:
        raise DomainError(f"degree k must be >= 0, got {k}")
    h = n / 2.0
    if alpha > -(1.0 + h):
        return pochhammer(1.0 + h + alpha, k) / pochhammer(h, k)
    return pochhammer(1.0, k) ** 2 / (pochhammer(1.0 - (h + alpha), k) * pochhammer(h, k))


def gamma_coeffs(n: int, alpha: float, K: int) -> np.ndarray:
    """gamma_0(alpha), ..., gamma_K(alpha) by the one-step recurrence."""
    if K > K_CAP_DEFAULT:
        raise DomainError(f"degree {K} exceeds the cap {K_CAP_DEFAULT}")
    return gamma_sequence(n, alpha).values(K)


def stirling_ratio(n: int, alpha: float, k) -> np.ndarray | float:
    """gamma_k(alpha) / k^(alpha+1); tends to a positive constant as k grows."""
    k_arr = np.atleast_1d(np.asarray(k))
    if np.any(k_arr < 1):
        raise DomainError("stirling_ratio needs k >= 1")
    seq = gamma_sequence(n, alpha)
    # log-gamma form of the Pochhammer ratios, stable for large k
    kf = k_arr.astype(np.float64)
    logv = np.zeros_like(kf)
    for a in seq.num:
        logv += gammaln(a + kf) - gammaln(a)
    for b in seq.den:
        logv -= gammaln(b + kf) - gammaln(b)
    out = np.exp(logv - (alpha + 1.0) * np.log(kf))
    return out if np.ndim(k) else float(out[0])


def volume_const(n: int, alpha: float) -> float:
    """V_alpha: total mass of (1-|x|^2)^alpha dnu for alpha > -1, else 1."""
    if alpha <= -1:
        return 1.0
    h = n / 2.0
    return float(math.exp(gammaln(h + 1.0) + gammaln(alpha + 1.0) - gammaln(h + alpha + 1.0)))


def bracket(x, y) -> np.ndarray | float:
    """[x, y] = sqrt(1 - 2 x.y + |x|^2 |y|^2), broadcasting over leading axes."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    xy = np.sum(x * y, axis=-1)
    val = 1.0 - 2.0 * xy + np.sum(x * x, axis=-1) * np.sum(y * y, axis=-1)
    out = np.sqrt(np.maximum(val, 0.0))
    return float(out) if out.ndim == 0 else out
