"""Zonal harmonics Z_k(x, y) extended homogeneously to R^n x R^n.

For n >= 3, Z_k(x, y) = (k + lam)/lam * |x|^k |y|^k C^lam_k(x.y / (|x||y|)) with
lam = (n-2)/2; for n = 2 the Chebyshev limit Z_k = 2 |x|^k |y|^k T_k(...)
(k >= 1). This normalization is the unique one for which Z_k(., y) reproduces
degree-k spherical harmonics against the normalized surface measure.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _accel
from .numeric import DomainError

MAX_TABLE_DEGREE = 2000


@dataclass(frozen=True)
class ZonalCoeffTable:
    """Z_k(x, y) = sum_j coeffs[j] (x.y)^(k-2j) (|x|^2 |y|^2)^j."""

    n: int
    k: int
    coeffs: tuple

    def polynomial_value(self, x, y):
        """Evaluate the monomial form directly (fine for small k only)."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        a = np.sum(x * y, axis=-1)
        q = np.sum(x * x, axis=-1) * np.sum(y * y, axis=-1)
        out = np.zeros(np.broadcast(a, q).shape)
        for j, c in enumerate(self.coeffs):
            out = out + c * a ** (self.k - 2 * j) * q ** j
        return out


_lock = threading.Lock()


@lru_cache(maxsize=None)
def _coeff_rows(n: int, k: int) -> tuple:
    # un-normalized P_k coefficients, built from P_{k-1} and P_{k-2}
    if k == 0:
        return (1.0,)
    A, B, _ = _accel._rec_consts(n, k)
    prev = _coeff_rows(n, k - 1)
    if k == 1:
        return (A * prev[0],)
    prev2 = _coeff_rows(n, k - 2)
    out = []
    for j in range(k // 2 + 1):
        c = A * prev[j] if j < len(prev) else 0.0
        if j >= 1:
            c -= B * prev2[j - 1]
        out.append(c)
    return tuple(out)


def zonal_coeffs(n: int, k: int) -> ZonalCoeffTable:
    """Homogenized Gegenbauer coefficient table of Z_k in dimension n."""
    if n < 2 or k < 0:
        raise DomainError(f"zonal_coeffs needs n >= 2 and k >= 0, got n={n}, k={k}")
    if k > MAX_TABLE_DEGREE:
        raise DomainError(f"degree {k} exceeds the table cap {MAX_TABLE_DEGREE}")
    with _lock:
        # warm the cache bottom-up so recursion depth stays small
        for j in range(0, k + 1, 200):
            _coeff_rows(n, j)
            if j + 1 <= k:
                _coeff_rows(n, j + 1)
        rows = _coeff_rows(n, k)
    _, _, N = _accel._rec_consts(n, k)
    return ZonalCoeffTable(n, k, tuple(N * c for c in rows))


def _pairs(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    shape = np.broadcast_shapes(x.shape, y.shape)
    X = np.broadcast_to(x, shape).reshape(-1, shape[-1])
    Y = np.broadcast_to(y, shape).reshape(-1, shape[-1])
    return X, Y, shape[:-1]


def zonal_eval(table: ZonalCoeffTable, x, y):
    """Z_k(x, y), evaluated by the stable three-term recurrence."""
    X, Y, lead = _pairs(x, y)
    vals = _accel.zonal_table(table.n, X, Y, table.k, 0)[:, table.k, 0]
    return vals.reshape(lead) if lead else float(vals[0])


def zonal_derivs(table: ZonalCoeffTable, x, y, order: int = 1):
    """x-gradient (order 1) or x-Hessian (order 2) of Z_k(x, y)."""
    if order not in (1, 2):
        raise DomainError(f"order must be 1 or 2, got {order}")
    X, Y, lead = _pairs(x, y)
    t = _accel.zonal_table(table.n, X, Y, table.k, order)[:, table.k, :]
    qy = np.sum(Y * Y, axis=1)
    if order == 1:
        out = t[:, 1, None] * Y + 2.0 * (t[:, 2] * qy)[:, None] * X
    else:
        dim = X.shape[1]
        out = (
            t[:, 3, None, None] * Y[:, :, None] * Y[:, None, :]
            + 2.0 * (qy * t[:, 4])[:, None, None] * (Y[:, :, None] * X[:, None, :] + X[:, :, None] * Y[:, None, :])
            + 4.0 * (qy * qy * t[:, 5])[:, None, None] * X[:, :, None] * X[:, None, :]
            + 2.0 * (qy * t[:, 2])[:, None, None] * np.eye(dim)[None]
        )
    return out.reshape(lead + out.shape[1:]) if lead else out[0]


def zonal_diagonal(n: int, k):
    """Z_k(z, z) for |z| = 1 (the dimension of H_k)."""
    k = np.asarray(k)
    diag = _accel.zonal_diagonal(n, int(np.max(k)))
    return diag[k]
