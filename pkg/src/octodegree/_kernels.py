"""Compiled per-node linear algebra for the quadrature hot path.

numpy's batched ``det``/``solve``/``inv`` pay a LAPACK call per 8x8 matrix;
these loops do the same work inline.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _lu_inplace(a, perm):
    """Partial-pivot LU of a square matrix in place; returns the determinant."""
    n = a.shape[0]
    det = 1.0
    for i in range(n):
        perm[i] = i
    for k in range(n):
        p = k
        big = abs(a[k, k])
        for r in range(k + 1, n):
            if abs(a[r, k]) > big:
                big = abs(a[r, k])
                p = r
        if p != k:
            for c in range(n):
                tmp = a[k, c]
                a[k, c] = a[p, c]
                a[p, c] = tmp
            tmp_i = perm[k]
            perm[k] = perm[p]
            perm[p] = tmp_i
            det = -det
        piv = a[k, k]
        det *= piv
        if piv == 0.0:
            continue
        for r in range(k + 1, n):
            f = a[r, k] / piv
            a[r, k] = f
            for c in range(k + 1, n):
                a[r, c] -= f * a[k, c]
    return det


@njit(cache=True)
def _hadamard(a, rows, cols):
    """Product of the column norms: an upper bound for ``|det|``."""
    bound = 1.0
    for c in range(cols):
        acc = 0.0
        for r in range(rows):
            acc += a[r, c] * a[r, c]
        bound *= np.sqrt(acc)
    return bound


@njit(cache=True)
def _minor_det(m, skip_row, skip_col, out, perm):
    """Determinant of ``m`` without one row and column; ``out``/``perm`` are scratch."""
    n = m.shape[0]
    rr = 0
    for r in range(n):
        if r == skip_row:
            continue
        cc = 0
        for c in range(n):
            if c == skip_col:
                continue
            out[rr, cc] = m[r, c]
            cc += 1
        rr += 1
    return _lu_inplace(out, perm)


@njit(cache=True)
def surface_elements(tangents, normals):
    """Signed maximal minors of each 8x7 tangent matrix.

    ``normals`` must be transversal to the tangents; it is appended as an 8th
    column so one LU of ``M = [T | v]`` yields all minors as
    ``-det(M) M^{-T} e_8``. Falls back to explicit minors when ``M`` is
    numerically singular relative to its Hadamard bound.
    """
    m_count = tangents.shape[0]
    out = np.empty((m_count, 8))
    a = np.empty((8, 8))
    perm = np.empty(8, dtype=np.int64)
    sub = np.empty((7, 7))
    sub_perm = np.empty(7, dtype=np.int64)
    y = np.empty(8)
    for idx in range(m_count):
        # a = M^T so that solving a y = e_8 gives M^{-T} e_8
        for r in range(8):
            for c in range(7):
                a[c, r] = tangents[idx, r, c]
            a[7, r] = normals[idx, r]
        bound = _hadamard(a.T, 8, 8)
        det = _lu_inplace(a, perm)
        if abs(det) <= 1e-10 * bound or det == 0.0:
            t = tangents[idx]
            for i in range(8):
                sign = 1.0 if i % 2 == 0 else -1.0
                rr = 0
                for r in range(8):
                    if r == i:
                        continue
                    for c in range(7):
                        sub[rr, c] = t[r, c]
                    rr += 1
                out[idx, i] = sign * _lu_inplace(sub, sub_perm)
            continue
        # forward: L z = P e_8 ; backward: U y = z
        for r in range(8):
            y[r] = 1.0 if perm[r] == 7 else 0.0
        for r in range(8):
            for c in range(r):
                y[r] -= a[r, c] * y[c]
        for r in range(7, -1, -1):
            for c in range(r + 1, 8):
                y[r] -= a[r, c] * y[c]
            y[r] /= a[r, r]
        for r in range(8):
            out[idx, r] = -det * y[r]
    return out


@njit(cache=True)
def _lu_complete(a, prow, pcol):
    """Complete-pivot LU in place (``a[prow][:, pcol] = L U``); returns the permutation sign."""
    n = a.shape[0]
    sign = 1.0
    for i in range(n):
        prow[i] = i
        pcol[i] = i
    for k in range(n):
        pr, pc = k, k
        big = abs(a[k, k])
        for r in range(k, n):
            for c in range(k, n):
                if abs(a[r, c]) > big:
                    big = abs(a[r, c])
                    pr, pc = r, c
        if pr != k:
            for c in range(n):
                tmp = a[k, c]
                a[k, c] = a[pr, c]
                a[pr, c] = tmp
            ti = prow[k]
            prow[k] = prow[pr]
            prow[pr] = ti
            sign = -sign
        if pc != k:
            for r in range(n):
                tmp = a[r, k]
                a[r, k] = a[r, pc]
                a[r, pc] = tmp
            ti = pcol[k]
            pcol[k] = pcol[pc]
            pcol[pc] = ti
            sign = -sign
        piv = a[k, k]
        if piv == 0.0:
            break
        for r in range(k + 1, n):
            f = a[r, k] / piv
            a[r, k] = f
            for c in range(k + 1, n):
                a[r, c] -= f * a[k, c]
    return sign


@njit(cache=True)
def adjugates(mats):
    """Transposed cofactor matrix of each square matrix in a stack.

    With ``P A Q = L U`` from complete pivoting the smallest pivot ``t`` sits
    last, and ``adj(U) = [[t d U11^-1, -d U11^-1 u], [0, d]]`` with
    ``d = det U11`` never divides by it. So near-singular and singular input
    needs no special case.
    """
    count, n = mats.shape[0], mats.shape[1]
    m = n - 1
    out = np.zeros_like(mats)
    a = np.empty((n, n))
    prow = np.empty(n, dtype=np.int64)
    pcol = np.empty(n, dtype=np.int64)
    w = np.empty((m, m))
    adj_u = np.empty((n, n))
    linv = np.empty((n, n))
    x = np.empty((n, n))
    for idx in range(count):
        for r in range(n):
            for c in range(n):
                a[r, c] = mats[idx, r, c]
        sign = _lu_complete(a, prow, pcol)
        if n == 1:
            out[idx, 0, 0] = 1.0
            continue
        if a[m - 1, m - 1] == 0.0:
            continue  # rank <= n - 2: the adjugate vanishes
        d = 1.0
        for k in range(m):
            d *= a[k, k]
        t = a[m, m]
        # w = U11^{-1}, column by column
        for j in range(m):
            for r in range(m - 1, -1, -1):
                acc = 1.0 if r == j else 0.0
                for c in range(r + 1, m):
                    acc -= a[r, c] * w[c, j]
                w[r, j] = acc / a[r, r]
        for r in range(n):
            for c in range(n):
                adj_u[r, c] = 0.0
        for r in range(m):
            for c in range(m):
                adj_u[r, c] = t * d * w[r, c]
            acc = 0.0
            for c in range(m):
                acc += w[r, c] * a[c, m]
            adj_u[r, m] = -d * acc
        adj_u[m, m] = d
        # inverse of the unit lower factor
        for j in range(n):
            for r in range(n):
                if r < j:
                    linv[r, j] = 0.0
                elif r == j:
                    linv[r, j] = 1.0
                else:
                    acc = 0.0
                    for c in range(j, r):
                        acc -= a[r, c] * linv[c, j]
                    linv[r, j] = acc
        for r in range(n):
            for c in range(n):
                acc = 0.0
                for k in range(r, n):
                    acc += adj_u[r, k] * linv[k, c]
                x[r, c] = acc
        for j in range(n):
            for i in range(n):
                out[idx, pcol[j], prow[i]] = sign * x[j, i]
    return out


@njit(cache=True)
def adjugate_times(mats, vecs):
    """``adj(A) v`` for each matrix/vector pair without forming ``adj(A)``.

    Same block formula as :func:`adjugates`, applied to one vector, so the
    cost is a single factorization plus two triangular solves.
    """
    count, n = mats.shape[0], mats.shape[1]
    m = n - 1
    out = np.zeros((count, n))
    a = np.empty((n, n))
    prow = np.empty(n, dtype=np.int64)
    pcol = np.empty(n, dtype=np.int64)
    z = np.empty(n)
    y = np.empty(m)
    for idx in range(count):
        for r in range(n):
            for c in range(n):
                a[r, c] = mats[idx, r, c]
        sign = _lu_complete(a, prow, pcol)
        if n == 1:
            out[idx, 0] = vecs[idx, 0]
            continue
        if a[m - 1, m - 1] == 0.0:
            continue
        # z = L^{-1} P v
        for r in range(n):
            acc = vecs[idx, prow[r]]
            for c in range(r):
                acc -= a[r, c] * z[c]
            z[r] = acc
        d = 1.0
        for k in range(m):
            d *= a[k, k]
        t = a[m, m]
        # y = U11^{-1} (t z[:m] - u z[m])
        for r in range(m - 1, -1, -1):
            acc = t * z[r] - a[r, m] * z[m]
            for c in range(r + 1, m):
                acc -= a[r, c] * y[c]
            y[r] = acc / a[r, r]
        for j in range(m):
            out[idx, pcol[j]] = sign * d * y[j]
        out[idx, pcol[m]] = sign * d * z[m]
    return out


@njit(cache=True)
def hyperspherical(angles):
    """Unit vectors ``u`` (m, d+1) on S^d and derivatives ``du`` (m, d+1, d)."""
    count, d = angles.shape
    u = np.empty((count, d + 1))
    du = np.zeros((count, d + 1, d))
    s = np.empty(d)
    c = np.empty(d)
    for idx in range(count):
        for j in range(d):
            s[j] = np.sin(angles[idx, j])
            c[j] = np.cos(angles[idx, j])
        prefix = 1.0
        for k in range(d + 1):
            last = k == d
            factor = 1.0 if last else c[k]
            u[idx, k] = prefix * factor
            # d/dt_j of sin(t_0)..sin(t_{k-1}) * factor, for j < k
            for j in range(k):
                p = factor
                for i in range(k):
                    p *= c[i] if i == j else s[i]
                du[idx, k, j] = p
            if not last:
                du[idx, k, k] = -prefix * s[k]
                prefix *= s[k]
    return u, du


@njit(cache=True)
def excluded_products_jacobian(x, signs):
    """``J[i, j] = signs[i] * prod_{k != i, j} x_k`` for ``i != j`` and 0 on the diagonal."""
    count, n = x.shape
    out = np.zeros((count, n, n))
    for idx in range(count):
        for i in range(n):
            for j in range(i + 1, n):
                p = 1.0
                for k in range(n):
                    if k != i and k != j:
                        p *= x[idx, k]
                out[idx, i, j] = signs[i] * p
                out[idx, j, i] = signs[j] * p
    return out


@njit(cache=True)
def project_shaped(v, dv, shape):
    """``w = B v / |B v|`` and ``dw = (I - w w^T) B dv / |B v|`` per row."""
    count, n = v.shape
    d = dv.shape[2]
    w = np.empty((count, n))
    dw = np.empty((count, n, d))
    bv = np.empty(n)
    bdv = np.empty((n, d))
    proj = np.empty(d)
    for idx in range(count):
        length = 0.0
        for r in range(n):
            acc = 0.0
            for c in range(n):
                acc += shape[r, c] * v[idx, c]
            bv[r] = acc
            length += acc * acc
        length = np.sqrt(length)
        for r in range(n):
            w[idx, r] = bv[r] / length
        for j in range(d):
            proj[j] = 0.0
        for r in range(n):
            for j in range(d):
                acc = 0.0
                for c in range(n):
                    acc += shape[r, c] * dv[idx, c, j]
                bdv[r, j] = acc
                proj[j] += w[idx, r] * acc
        for r in range(n):
            for j in range(d):
                dw[idx, r, j] = (bdv[r, j] - w[idx, r] * proj[j]) / length
    return w, dw
