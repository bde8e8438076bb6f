"""Hot loops: zonal-harmonic series summed at many points.

Two interchangeable backends implement the same three entry points:

* ``zonal_table(n, X, Y, K, order)`` -- Z_k(x_i, y_i) (and the derivative
  sums in the homogenized variables) for every k <= K, one pair per row.
* ``expansion_sums(n, X, poles, C, order)`` -- sum_p sum_k C[p,k] Z_k(x, y_p)
  and its x-gradient / x-Hessian.
* ``kernel_sums(n, X, Y, num, den, order, tol, kcap, bmax, kfix)``
  -- the adaptive series sum_k c_k Z_k(x, y) with a tail certificate.

The numba backend loops point by point and stops each series as soon as its
tail is negligible. The numpy backend vectorizes over points and loops over
degrees. Set ``HARMBESOV_NO_NUMBA=1`` to force the numpy backend.

Zonal harmonics are generated by the homogenized three-term recurrence in
a = x.y and q = |x|^2 |y|^2,

    P_k = A_k a P_{k-1} - B_k q P_{k-2},   Z_k = N_k P_k,

with Gegenbauer constants (lambda = (n-2)/2) for n >= 3 and the Chebyshev
limit for n = 2.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

USE_NUMBA = os.environ.get("HARMBESOV_NO_NUMBA", "0") in ("", "0", "false", "False")

try:
    if not USE_NUMBA:
        raise ImportError
    from numba import njit
except ImportError:  # pragma: no cover - exercised via env flag
    USE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


_THREADS = 1


def set_threads(nthreads: int) -> None:
    """Split point sets across ``nthreads`` workers (numba backend only)."""
    global _THREADS
    _THREADS = max(1, int(nthreads))


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


# ----------------------------------------------------------------------------
# recurrence constants


@njit(cache=True, nogil=True)
def _rec_consts(n, k):
    """(A_k, B_k, N_k) for the homogenized zonal recurrence."""
    if n == 2:
        if k == 0:
            return 0.0, 0.0, 1.0
        if k == 1:
            return 1.0, 0.0, 2.0
        return 2.0, 1.0, 2.0
    lam = (n - 2) / 2.0
    if k == 0:
        return 0.0, 0.0, 1.0
    A = 2.0 * (k + lam - 1.0) / k
    B = (k + 2.0 * lam - 2.0) / k
    return A, B, (k + lam) / lam


def dim_sequence(n: int):
    """Shifts and scale describing Z_k(z, z) for |z| = 1, i.e. dim H_k.

    For n >= 3: Z_k(z,z) = (lam+1)_k (2 lam)_k / ((lam)_k (1)_k).
    For n = 2 it is 2 for k >= 1, which the scale factor covers.
    """
    if n == 2:
        return np.zeros(0), np.zeros(0), 2.0
    lam = (n - 2) / 2.0
    num = np.array([lam + 1.0, 2.0 * lam])
    den = np.array([lam, 1.0])
    return num, den, 1.0


def zonal_diagonal(n: int, K: int) -> np.ndarray:
    """Z_k(z, z) for |z| = 1 and k = 0..K."""
    num, den, scale = dim_sequence(n)
    k = np.arange(K, dtype=np.float64)
    ratio = np.ones(K)
    for a in num:
        ratio *= a + k
    for b in den:
        ratio /= b + k
    out = np.empty(K + 1)
    out[0] = 1.0
    out[1:] = np.cumprod(ratio) * scale
    return out


# ----------------------------------------------------------------------------
# numba backend


@njit(cache=True, nogil=True)
def _nb_zonal_table(n, X, Y, K, order, out):
    # out[i, k, j]: j = 0 value, 1 d/da, 2 d/dq, 3 d2/da2, 4 d2/dadq, 5 d2/dq2
    npts = X.shape[0]
    dim = X.shape[1]
    for i in range(npts):
        a = 0.0
        qx = 0.0
        qy = 0.0
        for d in range(dim):
            a += X[i, d] * Y[i, d]
            qx += X[i, d] * X[i, d]
            qy += Y[i, d] * Y[i, d]
        q = qx * qy
        p0 = 1.0
        p0a = 0.0
        p0q = 0.0
        p0aa = 0.0
        p0aq = 0.0
        p0qq = 0.0
        out[i, 0, 0] = 1.0
        if K == 0:
            continue
        A, B, N = _rec_consts(n, 1)
        p1 = A * a
        p1a = A
        p1q = 0.0
        p1aa = 0.0
        p1aq = 0.0
        p1qq = 0.0
        out[i, 1, 0] = N * p1
        if order >= 1:
            out[i, 1, 1] = N * p1a
        for k in range(2, K + 1):
            A, B, N = _rec_consts(n, k)
            p2 = A * a * p1 - B * q * p0
            if order >= 1:
                p2a = A * (p1 + a * p1a) - B * q * p0a
                p2q = A * a * p1q - B * (p0 + q * p0q)
                if order >= 2:
                    p2aa = A * (2.0 * p1a + a * p1aa) - B * q * p0aa
                    p2aq = A * (p1q + a * p1aq) - B * (p0a + q * p0aq)
                    p2qq = A * a * p1qq - B * (2.0 * p0q + q * p0qq)
                    p0aa, p1aa = p1aa, p2aa
                    p0aq, p1aq = p1aq, p2aq
                    p0qq, p1qq = p1qq, p2qq
                    out[i, k, 3] = N * p2aa
                    out[i, k, 4] = N * p2aq
                    out[i, k, 5] = N * p2qq
                p0a, p1a = p1a, p2a
                p0q, p1q = p1q, p2q
                out[i, k, 1] = N * p2a
                out[i, k, 2] = N * p2q
            p0, p1 = p1, p2
            out[i, k, 0] = N * p2


@njit(cache=True, nogil=True)
def _nb_expansion(n, X, P, Cr, Ci, Aabs, M, order, rtol, val, grad, hess):
    npts = X.shape[0]
    dim = X.shape[1]
    npole = P.shape[0]
    K = Cr.shape[1] - 1
    for i in range(npts):
        qx = 0.0
        for d in range(dim):
            qx += X[i, d] * X[i, d]
        xn = math.sqrt(qx)
        vr = 0.0
        vi = 0.0
        for pp in range(npole):
            a = 0.0
            qy = 0.0
            for d in range(dim):
                a += X[i, d] * P[pp, d]
                qy += P[pp, d] * P[pp, d]
            q = qx * qy
            b = math.sqrt(q)
            yn = math.sqrt(qy)
            # sums of C_k N_k d^j P_k, real and imaginary parts
            s0r = Cr[pp, 0]
            s0i = Ci[pp, 0]
            sar = 0.0
            sai = 0.0
            sqr = 0.0
            sqi = 0.0
            saar = 0.0
            saai = 0.0
            saqr = 0.0
            saqi = 0.0
            sqqr = 0.0
            sqqi = 0.0
            scale = Aabs[pp, 0]
            if K >= 1:
                p0 = 1.0
                p0a = 0.0
                p0q = 0.0
                p0aa = 0.0
                p0aq = 0.0
                p0qq = 0.0
                A, B, N = _rec_consts(n, 1)
                p1 = A * a
                p1a = A
                p1q = 0.0
                p1aa = 0.0
                p1aq = 0.0
                p1qq = 0.0
                s0r += Cr[pp, 1] * N * p1
                s0i += Ci[pp, 1] * N * p1
                sar += Cr[pp, 1] * N * p1a
                sai += Ci[pp, 1] * N * p1a
                bk = b
                scale += Aabs[pp, 1] * bk
                for k in range(2, K + 1):
                    # degrees >= k contribute at most M[k] b^k / (1-b), M the
                    # suffix max of |C_j| Z_j(z,z); derivatives gain (2K|y|/b)^o
                    if b < 1.0 and k > order + 1:
                        tail = M[pp, k] * bk * b / (1.0 - b)
                        if order >= 1:
                            tail *= (2.0 * K * yn) ** order / max(b, 1e-150) ** order
                        if tail <= rtol * scale:
                            break
                    A, B, N = _rec_consts(n, k)
                    p2 = A * a * p1 - B * q * p0
                    cr = Cr[pp, k] * N
                    ci = Ci[pp, k] * N
                    s0r += cr * p2
                    s0i += ci * p2
                    if order >= 1:
                        p2a = A * (p1 + a * p1a) - B * q * p0a
                        p2q = A * a * p1q - B * (p0 + q * p0q)
                        if order >= 2:
                            p2aa = A * (2.0 * p1a + a * p1aa) - B * q * p0aa
                            p2aq = A * (p1q + a * p1aq) - B * (p0a + q * p0aq)
                            p2qq = A * a * p1qq - B * (2.0 * p0q + q * p0qq)
                            saar += cr * p2aa
                            saai += ci * p2aa
                            saqr += cr * p2aq
                            saqi += ci * p2aq
                            sqqr += cr * p2qq
                            sqqi += ci * p2qq
                            p0aa, p1aa = p1aa, p2aa
                            p0aq, p1aq = p1aq, p2aq
                            p0qq, p1qq = p1qq, p2qq
                        sar += cr * p2a
                        sai += ci * p2a
                        sqr += cr * p2q
                        sqi += ci * p2q
                        p0a, p1a = p1a, p2a
                        p0q, p1q = p1q, p2q
                    p0, p1 = p1, p2
                    bk *= b
                    scale += Aabs[pp, k] * bk
            vr += s0r
            vi += s0i
            if order >= 1:
                # grad Z = F_a y + 2 F_q |y|^2 x
                for d in range(dim):
                    grad[i, d, 0] += sar * P[pp, d] + 2.0 * sqr * qy * X[i, d]
                    grad[i, d, 1] += sai * P[pp, d] + 2.0 * sqi * qy * X[i, d]
            if order >= 2:
                for d in range(dim):
                    for e in range(dim):
                        yd = P[pp, d]
                        ye = P[pp, e]
                        xd = X[i, d]
                        xe = X[i, e]
                        hr = (saar * yd * ye + 2.0 * qy * saqr * (yd * xe + xd * ye)
                              + 4.0 * qy * qy * sqqr * xd * xe)
                        hi = (saai * yd * ye + 2.0 * qy * saqi * (yd * xe + xd * ye)
                              + 4.0 * qy * qy * sqqi * xd * xe)
                        if d == e:
                            hr += 2.0 * qy * sqr
                            hi += 2.0 * qy * sqi
                        hess[i, d, e, 0] += hr
                        hess[i, d, e, 1] += hi
        val[i, 0] = vr
        val[i, 1] = vi


@njit(cache=True, nogil=True)
def _nb_kernel(n, X, Y, num, den, dnum, dden, dscale, order, tol, kcap, bmax, kfix,
               val, grad, hess, tails, kused, status):
    npts = X.shape[0]
    dim = X.shape[1]
    for i in range(npts):
        a = 0.0
        qx = 0.0
        qy = 0.0
        for d in range(dim):
            a += X[i, d] * Y[i, d]
            qx += X[i, d] * X[i, d]
            qy += Y[i, d] * Y[i, d]
        q = qx * qy
        b = math.sqrt(q)
        xn = math.sqrt(qx)
        yn = math.sqrt(qy)
        if kfix < 0 and b > bmax:
            status[i] = 2
            tails[i] = np.inf
            continue
        s0 = 1.0
        sa = 0.0
        sq = 0.0
        saa = 0.0
        saq = 0.0
        sqq = 0.0
        c = 1.0   # c_k
        dk = 1.0  # Z_k(z,z) without the n = 2 scale
        p0 = 1.0
        p0a = 0.0
        p0q = 0.0
        p0aa = 0.0
        p0aq = 0.0
        p0qq = 0.0
        p1 = 0.0
        p1a = 0.0
        p1q = 0.0
        p1aa = 0.0
        p1aq = 0.0
        p1qq = 0.0
        k = 0
        tail = np.inf
        st = 1
        kmax = kcap if kfix < 0 else kfix
        bj = b  # b^(k+1)
        while True:
            # c_{k+1}, D_{k+1} and the sup of the majorant ratio beyond k+1
            j = k + 1.0
            cn = c
            ratio = b
            for m in range(num.shape[0]):
                cn *= (num[m] + k) / (den[m] + k)
                f = (num[m] + j) / (den[m] + j)
                if f > 1.0:
                    ratio *= f
            dn = dk
            for m in range(dnum.shape[0]):
                dn *= (dnum[m] + k) / (dden[m] + k)
                f = (dnum[m] + j) / (dden[m] + j)
                if f > 1.0:
                    ratio *= f
            if order >= 1:
                ratio *= ((j + 1.0) / j) ** order
            # stopping test on the certified tail
            if k >= order:
                if ratio < 1.0:
                    if b > 0.0:
                        tj = cn * dn * dscale * bj
                        if order >= 1:
                            tj *= (2.0 * j / xn) ** order
                    else:
                        tj = 0.0
                    tail = tj / (1.0 - ratio)
                else:
                    tail = np.inf
                if order == 0:
                    scale = abs(s0)
                elif order == 1:
                    scale = abs(sa) * yn + 2.0 * abs(sq) * qy * xn
                else:
                    scale = (abs(saa) * qy + 4.0 * qy * abs(saq) * xn * yn
                             + 4.0 * qy * qy * abs(sqq) * qx + 2.0 * qy * abs(sq))
                if kfix < 0 and tail <= tol * scale:
                    st = 0
                    break
            if k >= kmax:
                st = 0 if kfix >= 0 else 1
                break
            # advance to degree k+1
            k += 1
            c = cn
            dk = dn
            bj *= b
            A, B, N = _rec_consts(n, k)
            w = c * N
            if k == 1:
                p1 = A * a
                p1a = A
                s0 += w * p1
                sa += w * p1a
                continue
            p2 = A * a * p1 - B * q * p0
            s0 += w * p2
            if order >= 1:
                p2a = A * (p1 + a * p1a) - B * q * p0a
                p2q = A * a * p1q - B * (p0 + q * p0q)
                sa += w * p2a
                sq += w * p2q
                if order >= 2:
                    p2aa = A * (2.0 * p1a + a * p1aa) - B * q * p0aa
                    p2aq = A * (p1q + a * p1aq) - B * (p0a + q * p0aq)
                    p2qq = A * a * p1qq - B * (2.0 * p0q + q * p0qq)
                    saa += w * p2aa
                    saq += w * p2aq
                    sqq += w * p2qq
                    p0aa, p1aa = p1aa, p2aa
                    p0aq, p1aq = p1aq, p2aq
                    p0qq, p1qq = p1qq, p2qq
                p0a, p1a = p1a, p2a
                p0q, p1q = p1q, p2q
            p0, p1 = p1, p2
        val[i] = s0
        tails[i] = tail
        kused[i] = k
        status[i] = st
        if order >= 1:
            for d in range(dim):
                grad[i, d] = sa * Y[i, d] + 2.0 * sq * qy * X[i, d]
        if order >= 2:
            for d in range(dim):
                for e in range(dim):
                    h = (saa * Y[i, d] * Y[i, e]
                         + 2.0 * qy * saq * (Y[i, d] * X[i, e] + X[i, d] * Y[i, e])
                         + 4.0 * qy * qy * sqq * X[i, d] * X[i, e])
                    if d == e:
                        h += 2.0 * qy * sq
                    hess[i, d, e] = h


# ----------------------------------------------------------------------------
# numpy backend


def _np_zonal_table(n, X, Y, K, order):
    a = np.einsum("ij,ij->i", X, Y)
    qx = np.einsum("ij,ij->i", X, X)
    qy = np.einsum("ij,ij->i", Y, Y)
    q = qx * qy
    npts = X.shape[0]
    out = np.zeros((npts, K + 1, 6))
    out[:, 0, 0] = 1.0
    if K == 0:
        return out
    zero = np.zeros(npts)
    p0 = [np.ones(npts), zero, zero, zero, zero, zero]
    A, B, N = _rec_consts(n, 1)
    p1 = [A * a, np.full(npts, A), zero, zero, zero, zero]
    for j in range(6):
        out[:, 1, j] = N * p1[j]
    for k in range(2, K + 1):
        A, B, N = _rec_consts(n, k)
        p2 = [
            A * a * p1[0] - B * q * p0[0],
            A * (p1[0] + a * p1[1]) - B * q * p0[1],
            A * a * p1[2] - B * (p0[0] + q * p0[2]),
            A * (2.0 * p1[1] + a * p1[3]) - B * q * p0[3],
            A * (p1[2] + a * p1[4]) - B * (p0[1] + q * p0[4]),
            A * a * p1[5] - B * (2.0 * p0[2] + q * p0[5]),
        ]
        for j in range(6 if order >= 2 else (3 if order == 1 else 1)):
            out[:, k, j] = N * p2[j]
        p0, p1 = p1, p2
    return out


def _np_expansion(n, X, P, C, order):
    npts, dim = X.shape
    val = np.zeros(npts, dtype=complex)
    grad = np.zeros((npts, dim), dtype=complex)
    hess = np.zeros((npts, dim, dim), dtype=complex)
    K = C.shape[1] - 1
    qx = np.einsum("ij,ij->i", X, X)
    for pp in range(P.shape[0]):
        y = P[pp]
        qy = float(y @ y)
        Y = np.broadcast_to(y, X.shape)
        table = _np_zonal_table(n, X, np.ascontiguousarray(Y), K, order)
        sums = np.einsum("ikj,k->ij", table, C[pp])
        val += sums[:, 0]
        if order >= 1:
            grad += sums[:, 1, None] * y[None, :] + 2.0 * qy * sums[:, 2, None] * X
        if order >= 2:
            yy = np.outer(y, y)
            hess += (
                sums[:, 3, None, None] * yy[None]
                + 2.0 * qy * sums[:, 4, None, None]
                * (y[None, :, None] * X[:, None, :] + X[:, :, None] * y[None, None, :])
                + 4.0 * qy * qy * sums[:, 5, None, None] * X[:, :, None] * X[:, None, :]
                + 2.0 * qy * sums[:, 2, None, None] * np.eye(dim)[None]
            )
    return val, grad if order >= 1 else None, hess if order >= 2 else None


def _np_kernel(n, X, Y, num, den, dnum, dden, dscale, order, tol, kcap, bmax, kfix):
    npts, dim = X.shape
    a = np.einsum("ij,ij->i", X, Y)
    qx = np.einsum("ij,ij->i", X, X)
    qy = np.einsum("ij,ij->i", Y, Y)
    q = qx * qy
    b = np.sqrt(q)
    xn = np.sqrt(qx)
    yn = np.sqrt(qy)
    status = np.zeros(npts, dtype=np.int64)
    tails = np.full(npts, np.inf)
    kused = np.zeros(npts, dtype=np.int64)
    active = np.ones(npts, dtype=bool)
    if kfix < 0:
        bad = b > bmax
        status[bad] = 2
        active[bad] = False
    s = [np.ones(npts)] + [np.zeros(npts) for _ in range(5)]
    zero = np.zeros(npts)
    p0 = [np.ones(npts), zero, zero, zero, zero, zero]
    p1 = [zero] * 6
    c = 1.0
    dk = 1.0
    k = 0
    kmax = kcap if kfix < 0 else kfix
    while True:
        j = k + 1.0
        cn = c * np.prod((num + k) / (den + k)) if num.size else c
        dn = dk * np.prod((dnum + k) / (dden + k)) if dnum.size else dk
        ratio = np.prod(np.maximum((num + j) / (den + j), 1.0)) if num.size else 1.0
        if dnum.size:
            ratio *= np.prod(np.maximum((dnum + j) / (dden + j), 1.0))
        if order >= 1:
            ratio *= ((j + 1.0) / j) ** order
        ratio = b * ratio
        if k >= order:
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                tj = cn * dn * dscale * (2.0 * j) ** order * yn ** j
                tj = np.where(xn > 0.0, tj * xn ** (j - order), 0.0)
                tail = np.where(ratio < 1.0, tj / (1.0 - ratio), np.inf)
            if order == 0:
                scale = np.abs(s[0])
            elif order == 1:
                scale = np.abs(s[1]) * yn + 2.0 * np.abs(s[2]) * qy * xn
            else:
                scale = (np.abs(s[3]) * qy + 4.0 * qy * np.abs(s[4]) * xn * yn
                         + 4.0 * qy * qy * np.abs(s[5]) * qx + 2.0 * qy * np.abs(s[2]))
            tails = np.where(active, tail, tails)
            kused = np.where(active, k, kused)
            if kfix < 0:
                done = active & (tail <= tol * scale)
                active &= ~done
        if k >= kmax or not active.any():
            break
        k += 1
        c = cn
        dk = dn
        A, B, N = _rec_consts(n, k)
        if k == 1:
            p2 = [A * a, np.full(npts, A), zero, zero, zero, zero]
        else:
            p2 = [
                A * a * p1[0] - B * q * p0[0],
                A * (p1[0] + a * p1[1]) - B * q * p0[1],
                A * a * p1[2] - B * (p0[0] + q * p0[2]),
                A * (2.0 * p1[1] + a * p1[3]) - B * q * p0[3],
                A * (p1[2] + a * p1[4]) - B * (p0[1] + q * p0[4]),
                A * a * p1[5] - B * (2.0 * p0[2] + q * p0[5]),
            ]
            p0 = p1
        p1 = p2
        w = np.where(active, c * N, 0.0)
        for m in range(6):
            s[m] = s[m] + w * p2[m]
    if kfix < 0:
        status[active] = 1
    grad = s[1][:, None] * Y + 2.0 * (s[2] * qy)[:, None] * X
    hess = (
        s[3][:, None, None] * Y[:, :, None] * Y[:, None, :]
        + 2.0 * (qy * s[4])[:, None, None] * (Y[:, :, None] * X[:, None, :] + X[:, :, None] * Y[:, None, :])
        + 4.0 * (qy * qy * s[5])[:, None, None] * X[:, :, None] * X[:, None, :]
        + 2.0 * (qy * s[2])[:, None, None] * np.eye(dim)[None]
    )
    return s[0], grad, hess, tails, kused, status


# ----------------------------------------------------------------------------
# dispatch


def _chunks(npts):
    if _THREADS <= 1 or npts < 2 * _THREADS:
        return [slice(0, npts)]
    edges = np.linspace(0, npts, _THREADS + 1).astype(int)
    return [slice(edges[i], edges[i + 1]) for i in range(_THREADS)]


def _run(fn, npts):
    parts = _chunks(npts)
    if len(parts) == 1:
        fn(parts[0])
        return
    with ThreadPoolExecutor(max_workers=len(parts)) as pool:
        list(pool.map(fn, parts))


def zonal_table(n, X, Y, K, order=0, use_numba=None):
    """Array of shape (N, K+1, 6) with Z_k and its (a, q)-derivatives."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    Y = np.ascontiguousarray(Y, dtype=np.float64)
    if use_numba is None:
        use_numba = USE_NUMBA
    if not use_numba:
        return _np_zonal_table(n, X, Y, K, order)
    out = np.zeros((X.shape[0], K + 1, 6))
    _nb_zonal_table(n, X, Y, K, order, out)
    return out


def expansion_sums(n, X, poles, C, order=0, rtol=1e-17, use_numba=None):
    """Value, gradient and Hessian of sum_p sum_k C[p,k] Z_k(x, poles[p]).

    The numba path truncates each pole's series once the remaining degrees
    are below ``rtol`` times the running majorant; the result is the finite
    sum to rounding accuracy.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    P = np.ascontiguousarray(poles, dtype=np.float64)
    C = np.ascontiguousarray(C, dtype=np.complex128)
    if use_numba is None:
        use_numba = USE_NUMBA
    if not use_numba:
        return _np_expansion(n, X, P, C, order)
    npts, dim = X.shape
    val = np.zeros((npts, 2))
    grad = np.zeros((npts, dim, 2)) if order >= 1 else np.zeros((0, dim, 2))
    hess = np.zeros((npts, dim, dim, 2)) if order >= 2 else np.zeros((0, dim, dim, 2))
    Cr = np.ascontiguousarray(C.real)
    Ci = np.ascontiguousarray(C.imag)
    Aabs = np.abs(C) * zonal_diagonal(n, C.shape[1] - 1)[None, :]
    M = np.zeros((C.shape[0], C.shape[1] + 1))
    M[:, :-1] = np.maximum.accumulate(Aabs[:, ::-1], axis=1)[:, ::-1]

    def work(sl):
        _nb_expansion(n, X[sl], P, Cr, Ci, Aabs, M, order, rtol, val[sl],
                      grad[sl] if order >= 1 else grad,
                      hess[sl] if order >= 2 else hess)

    _run(work, npts)
    value = val[:, 0] + 1j * val[:, 1]
    g = grad[..., 0] + 1j * grad[..., 1] if order >= 1 else None
    h = hess[..., 0] + 1j * hess[..., 1] if order >= 2 else None
    return value, g, h


def kernel_sums(n, X, Y, num, den, order=0, tol=1e-14, kcap=100_000, bmax=0.999,
                kfix=-1, use_numba=None):
    """Adaptive sum_k c_k Z_k(x_i, y_i) with certified tails.

    Returns (value, grad, hess, tail, K, status); status 0 converged,
    1 degree cap reached, 2 |x||y| above ``bmax``. With ``kfix >= 0`` exactly
    that many degrees are summed and the tail certificate is reported.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    Y = np.ascontiguousarray(Y, dtype=np.float64)
    num = np.ascontiguousarray(num, dtype=np.float64)
    den = np.ascontiguousarray(den, dtype=np.float64)
    dnum, dden, dscale = dim_sequence(n)
    if use_numba is None:
        use_numba = USE_NUMBA
    if not use_numba:
        return _np_kernel(n, X, Y, num, den, dnum, dden, dscale, order, tol, kcap, bmax, kfix)
    npts, dim = X.shape
    val = np.zeros(npts)
    grad = np.zeros((npts, dim))
    hess = np.zeros((npts, dim, dim)) if order >= 2 else np.zeros((npts, 0, 0))
    tails = np.zeros(npts)
    kused = np.zeros(npts, dtype=np.int64)
    status = np.zeros(npts, dtype=np.int64)
    if order < 2:
        hess_full = np.zeros((npts, dim, dim))
    else:
        hess_full = hess

    def work(sl):
        _nb_kernel(n, X[sl], Y[sl], num, den, dnum, dden, dscale, order, tol, kcap,
                   bmax, kfix, val[sl], grad[sl], hess_full[sl], tails[sl], kused[sl],
                   status[sl])

    _run(work, npts)
    return val, grad, hess_full, tails, kused, status
