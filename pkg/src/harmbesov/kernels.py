"""Extended reproducing kernels R_alpha(x, y) = sum_k gamma_k(alpha) Z_k(x, y).

Series are summed adaptively. After degree K the remaining terms are bounded
by the majorant c_j Z_j(z,z) (2j)^o |x|^(j-o) |y|^j (o the derivative order;
the factor (2j)^o is a Bernstein bound for derivatives of a homogeneous
harmonic of degree j). Its successive ratios are at most
|x||y| prod_i max((a_i + j)/(b_i + j), 1) ((j+1)/j)^o, a quantity that only
decreases in j, so the tail is certified by a geometric series.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _accel
from .expansion import HarmonicExpansion, MultiIndex
from .numeric import K_CAP_DEFAULT, CoeffSequence, DerivPair, DomainError, gamma_sequence

#: |x||y| above which the certified series is refused.
NEAR_DIAGONAL = 0.999


class KernelConvergenceError(ArithmeticError):
    """The requested tail tolerance was not reached."""

    def __init__(self, message, tail_bound=None, degree=None, points=None):
        super().__init__(message)
        self.tail_bound = tail_bound
        self.degree = degree
        self.points = points


@dataclass(frozen=True)
class KernelValue:
    value: np.ndarray | float
    tail_bound: np.ndarray | float
    degree: np.ndarray | int


@dataclass(frozen=True)
class KernelSpec:
    """R_alpha in dimension n, summed to fixed degree K or adaptively."""

    n: int
    alpha: float
    K: int | None = None
    tail_tol: float = 1e-14
    K_cap: int = K_CAP_DEFAULT

    def __post_init__(self):
        if self.n < 2:
            raise DomainError(f"n must be >= 2, got {self.n}")
        if not self.tail_tol > 0:
            raise DomainError("tail_tol must be positive")
        if self.K_cap < 1:
            raise DomainError("K_cap must be >= 1")
        if self.K is not None and self.K < 0:
            raise DomainError("fixed truncation K must be >= 0")

    @property
    def sequence(self) -> CoeffSequence:
        return gamma_sequence(self.n, self.alpha)

    def series(self) -> "SeriesKernel":
        return SeriesKernel(self.n, self.sequence, self.K, self.tail_tol, self.K_cap)


class SeriesKernel:
    """Generic zonal series sum_k c_k Z_k(x, y) for a CoeffSequence c."""

    def __init__(self, n, sequence: CoeffSequence, K=None, tail_tol=1e-14, K_cap=K_CAP_DEFAULT):
        self.n = int(n)
        self.sequence = sequence
        self.K = K
        self.tail_tol = float(tail_tol)
        self.K_cap = int(K_cap)

    def multiplied(self, d: DerivPair) -> "SeriesKernel":
        """Apply D^t_s in the first variable (a coefficient product)."""
        seq = gamma_sequence(self.n, d.s + d.t) * gamma_sequence(self.n, d.s).inverse() * self.sequence
        return SeriesKernel(self.n, seq, self.K, self.tail_tol, self.K_cap)

    def _sum(self, x, y, order, strict=True):
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if x.shape[-1] != self.n or y.shape[-1] != self.n:
            raise DomainError(f"points must have {self.n} coordinates")
        shape = np.broadcast_shapes(x.shape, y.shape)
        X = np.broadcast_to(x, shape).reshape(-1, self.n)
        Y = np.broadcast_to(y, shape).reshape(-1, self.n)
        if np.any(np.einsum("ij,ij->i", X, X) >= 1.0):
            raise DomainError("kernel evaluation needs |x| < 1")
        kfix = -1 if self.K is None else int(self.K)
        val, grad, hess, tails, kused, status = _accel.kernel_sums(
            self.n, X, Y, self.sequence.num, self.sequence.den, order,
            self.tail_tol, self.K_cap, NEAR_DIAGONAL, kfix,
        )
        if strict and np.any(status != 0):
            bad = int(np.flatnonzero(status)[0])
            why = ("|x||y| exceeds the near-diagonal limit" if status[bad] == 2
                   else f"tail tolerance {self.tail_tol:g} not met by degree {int(kused[bad])}")
            raise KernelConvergenceError(
                f"kernel series did not converge at x={X[bad]}, y={Y[bad]}: {why}",
                tail_bound=float(tails[bad]), degree=int(kused[bad]), points=(X[bad], Y[bad]),
            )
        lead = shape[:-1]
        return lead, val, grad, hess, tails, kused

    def evaluate(self, x, y) -> KernelValue:
        lead, val, _, _, tails, kused = self._sum(x, y, 0)
        if not lead:
            return KernelValue(float(val[0]), float(tails[0]), int(kused[0]))
        return KernelValue(val.reshape(lead), tails.reshape(lead), kused.reshape(lead))

    def __call__(self, x, y):
        return self.evaluate(x, y).value

    def derivative(self, m: MultiIndex, x, y) -> KernelValue:
        if not isinstance(m, MultiIndex):
            m = MultiIndex(tuple(m))
        if len(m.components) != self.n:
            raise DomainError("multi-index length must equal n")
        if m.order > 2:
            raise DomainError(f"derivative order |m|={m.order} > 2 is unsupported")
        if m.order == 0:
            return self.evaluate(x, y)
        lead, _, grad, hess, tails, kused = self._sum(x, y, m.order)
        idx = [i for i, c in enumerate(m.components) for _ in range(c)]
        v = grad[:, idx[0]] if m.order == 1 else hess[:, idx[0], idx[1]]
        if not lead:
            return KernelValue(float(v[0]), float(tails[0]), int(kused[0]))
        return KernelValue(v.reshape(lead), tails.reshape(lead), kused.reshape(lead))

    def gradient(self, x, y):
        lead, _, grad, _, _, _ = self._sum(x, y, 1)
        return grad.reshape(lead + (self.n,)) if lead else grad[0]

    def hessian(self, x, y):
        lead, _, _, hess, _, _ = self._sum(x, y, 2)
        return hess.reshape(lead + (self.n, self.n)) if lead else hess[0]

    def truncate(self, y, K: int) -> HarmonicExpansion:
        if K < 0:
            raise DomainError("K must be >= 0")
        return HarmonicExpansion(self.n, np.asarray(y, dtype=float)[None, :],
                                 self.sequence.values(K)[None, :])


def _series(spec) -> SeriesKernel:
    return spec if isinstance(spec, SeriesKernel) else spec.series()


def kernel_eval(spec: KernelSpec, x, y) -> KernelValue:
    """R_alpha(x, y) with its certified tail bound."""
    return _series(spec).evaluate(x, y)


def kernel_deriv(spec: KernelSpec, m: MultiIndex, x, y) -> KernelValue:
    """d^m_x R_alpha(x, y), differentiated term by term."""
    return _series(spec).derivative(m, x, y)


def kernel_multiplied(spec: KernelSpec, d: DerivPair) -> SeriesKernel:
    """D^t_s R_c as a series kernel (coefficients gamma_k(s+t)/gamma_k(s) gamma_k(c))."""
    return _series(spec).multiplied(d)


def kernel_truncate(spec: KernelSpec, y, K: int) -> HarmonicExpansion:
    """The partial sum sum_{k <= K} gamma_k(alpha) Z_k(., y)."""
    return _series(spec).truncate(y, K)
