"""Compiled kernels: Householder reduction to tridiagonal form and implicit QL."""
import math

import numpy as np
from numba import njit

EPS = np.finfo(np.float64).eps


@njit(cache=True)
def householder_tridiagonal(a, want_q):
    """Reduce symmetric ``a`` to ``T = Q^T a Q``.

    Returns ``(d, e, qt)`` with ``d`` the diagonal, ``e[i] = T[i+1, i]`` and
    ``qt = Q^T`` (empty when ``want_q`` is false).
    """
    n = a.shape[0]
    a = a.copy()
    if want_q:
        q = np.eye(n)
    else:
        q = np.empty((0, 0))
    d = np.empty(n)
    e = np.zeros(max(n, 1))
    v = np.zeros(n)
    p = np.zeros(n)
    for k in range(n - 2):
        s = 0.0
        for i in range(k + 1, n):
            s += a[i, k] * a[i, k]
        if s == 0.0:
            e[k] = 0.0
            continue
        xnorm = math.sqrt(s)
        x0 = a[k + 1, k]
        alpha = -xnorm if x0 >= 0.0 else xnorm
        for i in range(k + 1, n):
            v[i] = a[i, k]
        v[k + 1] -= alpha
        vn2 = 0.0
        for i in range(k + 1, n):
            vn2 += v[i] * v[i]
        if vn2 == 0.0:
            e[k] = x0
            continue
        vn = math.sqrt(vn2)
        for i in range(k + 1, n):
            v[i] /= vn
        for i in range(k + 1, n):
            acc = 0.0
            for j in range(k + 1, n):
                acc += a[i, j] * v[j]
            p[i] = acc
        kk = 0.0
        for i in range(k + 1, n):
            kk += v[i] * p[i]
        for i in range(k + 1, n):
            p[i] -= kk * v[i]
        for i in range(k + 1, n):
            vi2 = 2.0 * v[i]
            pi2 = 2.0 * p[i]
            for j in range(k + 1, n):
                a[i, j] -= vi2 * p[j] + pi2 * v[j]
        e[k] = alpha
        if want_q:
            for r in range(n):
                acc = 0.0
                for j in range(k + 1, n):
                    acc += q[r, j] * v[j]
                acc *= 2.0
                for j in range(k + 1, n):
                    q[r, j] -= acc * v[j]
    if n >= 2:
        e[n - 2] = a[n - 1, n - 2]
    e[n - 1] = 0.0
    for i in range(n):
        d[i] = a[i, i]
    if want_q:
        return d, e, q.T.copy()
    return d, e, q


@njit(cache=True)
def tql_implicit(d, e, zt, max_sweeps):
    """Implicit-shift QL on the tridiagonal ``(d, e)``, in place.

    ``e[i]`` couples ``i`` and ``i + 1``; ``e[n-1]`` must be 0.  Each rotation
    of columns ``i, i+1`` is applied to rows ``i, i+1`` of ``zt`` (which holds
    the transposed basis).  Returns 0 on success, otherwise ``1 + index`` of
    the eigenvalue being iterated when the sweep budget ran out.
    """
    n = d.size
    r_cols = zt.shape[1]
    sweeps = 0
    for l in range(n):
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= EPS * dd:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                return l + 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                for k in range(r_cols):
                    f2 = zt[i + 1, k]
                    zt[i + 1, k] = s * zt[i, k] + c * f2
                    zt[i, k] = c * zt[i, k] - s * f2
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return 0
