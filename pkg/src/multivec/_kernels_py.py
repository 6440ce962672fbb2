"""Numpy implementations of the hot inner loops.

These are the fallback for ``multivec._kernels`` and the reference the
compiled versions are tested against. Arithmetic order is kept identical
to the compiled loops where the result feeds a discrete choice.
"""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.linalg.blas import daxpy, ddot

BASIC, AT_LOWER, AT_UPPER, FREE, FIXED = 0, 1, 2, 3, 4


def price(d, weights, status, tol, bland):
    """Pick the entering column from current reduced costs ``d``.

    Returns ``(j, d_j)`` with ``j = -1`` when no nonbasic column has an
    improving reduced cost. Devex rule (largest ``d_j**2 / w_j``, lowest
    index on ties) unless ``bland`` is set, in which case the lowest
    eligible index.
    """
    eligible = ((status == AT_LOWER) & (d < -tol)) | ((status == AT_UPPER) & (d > tol)) | (
        (status == FREE) & (np.abs(d) > tol)
    )
    cand = np.flatnonzero(eligible)
    if cand.size == 0:
        return -1, 0.0
    if bland:
        j = int(cand[0])
    else:
        dc = d[cand]
        j = int(cand[np.argmax(dc * dc / weights[cand])])
    return j, float(d[j])


def devex_update(d, weights, alpha_r, status, q, leaving, alpha_rq):
    """Update reduced costs and devex weights after pivoting ``q`` into the basis.

    ``alpha_r`` is the pivot row over all columns and ``alpha_rq`` its
    entry in column ``q``. Must be called before statuses are changed.
    """
    theta = d[q] / alpha_rq
    wq = weights[q]
    # zero entries of the pivot row leave both d and the weights unchanged
    touch = (status != BASIC) & (alpha_r != 0.0)
    touch[q] = False
    idx = np.flatnonzero(touch)
    a = alpha_r[idx]
    d[idx] -= theta * a
    r = a / alpha_rq
    weights[idx] = np.maximum(weights[idx], r * r * wq)
    d[q] = 0.0
    d[leaving] = -theta
    weights[leaving] = max(wq / (alpha_rq * alpha_rq), 1.0)


def ratio_test(xb, lb, ub, alpha, direction, tol_piv, harris_tol, bland, basis):
    """Bounded-variable ratio test.

    Basic values move as ``xb - direction * theta * alpha``. Returns
    ``(p, theta, to_upper)``; ``p = -1`` means no basic variable blocks.
    """
    moving = np.flatnonzero(alpha != 0.0)
    delta = -direction * alpha[moving]
    dec = delta < -tol_piv
    inc = delta > tol_piv
    lbm, ubm, xbm = lb[moving], ub[moving], xb[moving]
    dec_ok = dec & np.isfinite(lbm)
    inc_ok = inc & np.isfinite(ubm)
    sel = np.flatnonzero(dec_ok | inc_ok)
    if sel.size == 0:
        return -1, np.inf, False
    dist = np.where(dec_ok[sel], xbm[sel] - lbm[sel], ubm[sel] - xbm[sel])
    rate = np.abs(delta[sel])
    blocking = moving[sel]
    ratios = np.maximum(dist, 0.0) / rate
    if bland or harris_tol <= 0.0:
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + 1e-12)
        if bland:
            k = int(ties[np.argmin(basis[blocking[ties]])])
        else:
            k = int(ties[np.argmax(rate[ties])])
    else:
        theta_max = ((np.maximum(dist, 0.0) + harris_tol) / rate).min()
        cand = np.flatnonzero(ratios <= theta_max)
        k = int(cand[np.argmax(rate[cand])])
    theta = float(max(dist[k], 0.0) / rate[k])
    return int(blocking[k]), theta, bool(delta[sel[k]] > 0)


def ftran_etas(eta_pos, eta_cols, count, w):
    """Apply ``count`` product-form eta updates to ``w`` in place."""
    for k in range(count):
        p = eta_pos[k]
        col = eta_cols[k]
        wp = w[p] / col[p]
        if wp != 0.0:
            w = daxpy(col, w, a=-wp)
        w[p] = wp
    return w


def btran_etas(eta_pos, eta_cols, count, v):
    """Apply transposed eta updates (newest first) to ``v`` in place."""
    for k in range(count - 1, -1, -1):
        p = eta_pos[k]
        col = eta_cols[k]
        vp = v[p]
        s = ddot(col, v) - col[p] * vp
        v[p] = (vp - s) / col[p]
    return v


def pam_swap(D, medoids, nearest_pos, nearest_dist, second_dist):
    """Best k-medoids swap (removal position, candidate, cost change).

    ``D`` is the symmetric dissimilarity matrix, ``medoids`` the current
    medoid point indices, ``nearest_pos`` each point's nearest medoid as a
    position into ``medoids``. Candidates are scanned in ascending index,
    positions in ascending order; the first strict minimum wins.
    """
    n = D.shape[0]
    k = len(medoids)
    shared = np.zeros(n)
    corr = np.zeros((k, n))
    for j in range(n):
        row = D[j]
        dj = nearest_dist[j]
        gain = np.minimum(row - dj, 0.0)
        shared += gain
        corr[nearest_pos[j]] += np.minimum(row, second_dist[j]) - dj - gain
    delta = shared[None, :] + corr
    is_medoid = np.zeros(n, dtype=bool)
    is_medoid[medoids] = True
    delta[:, is_medoid] = np.inf
    # scan order h-major, i-minor
    flat = delta.T.ravel()
    idx = int(np.argmin(flat))
    h, i = divmod(idx, k)
    return i, h, float(flat[idx])


def _triangles(Lp, Li, Lx, Up, Ui, Ux, Ud):
    n = len(Ud)
    L = sp.csc_matrix((Lx, Li, Lp), shape=(n, n))
    U = sp.csc_matrix((Ux, Ui, Up), shape=(n, n))
    return sp.tril(L, -1, format="csr") + sp.identity(n, format="csr"), sp.triu(U, 1, format="csr") + sp.diags(Ud)


def lu_ftran(Lp, Li, Lx, Up, Ui, Ux, Ud, perm_r, perm_c, b):
    """Solve ``B x = b`` given SuperLU factors ``Pr B Pc = L U``.

    ``L`` and ``U`` are passed as CSC arrays; entries of ``L`` on or above
    the diagonal and of ``U`` on or below it are ignored, ``Ud`` holds the
    diagonal of ``U``.
    """
    L, U = _triangles(Lp, Li, Lx, Up, Ui, Ux, Ud)
    y = np.empty(len(b))
    y[perm_r] = b
    y = spla.spsolve_triangular(L, y, lower=True, unit_diagonal=True)
    y = spla.spsolve_triangular(U.tocsr(), y, lower=False)
    return y[perm_c]


def lu_btran(Lp, Li, Lx, Up, Ui, Ux, Ud, perm_r, perm_c, c):
    """Solve ``B.T x = c`` with the same factors as :func:`lu_ftran`."""
    L, U = _triangles(Lp, Li, Lx, Up, Ui, Ux, Ud)
    w = np.empty(len(c))
    w[perm_c] = c
    w = spla.spsolve_triangular(U.T.tocsr(), w, lower=True)
    w = spla.spsolve_triangular(L.T.tocsr(), w, lower=False, unit_diagonal=True)
    return w[perm_r]


def singleton_pivots(Bp, Bi, Rp, Rj):
    """Peel row and column singletons off a square sparse matrix.

    ``Bp, Bi`` are the CSC pattern and ``Rp, Rj`` the CSR pattern. Column
    singletons are taken first, each from a FIFO queue in discovery order.
    Returns ``(piv_row, piv_col, s)``: the first ``s`` entries are the
    singleton pivots in elimination order, the rest the remaining nucleus
    rows and columns in ascending index.
    """
    m = len(Bp) - 1
    cc = np.diff(Bp).astype(np.int64)
    rc = np.diff(Rp).astype(np.int64)
    row_alive = np.ones(m, dtype=bool)
    col_alive = np.ones(m, dtype=bool)
    colq = [int(j) for j in np.flatnonzero(cc == 1)]
    rowq = [int(i) for i in np.flatnonzero(rc == 1)]
    ch = rh = 0
    prow, pcol = [], []
    while ch < len(colq) or rh < len(rowq):
        while ch < len(colq):
            j = colq[ch]
            ch += 1
            if not col_alive[j] or cc[j] != 1:
                continue
            i = next(int(r) for r in Bi[Bp[j]:Bp[j + 1]] if row_alive[r])
            prow.append(i)
            pcol.append(j)
            col_alive[j] = row_alive[i] = False
            for c in Rj[Rp[i]:Rp[i + 1]]:
                if col_alive[c]:
                    cc[c] -= 1
                    if cc[c] == 1:
                        colq.append(int(c))
        while rh < len(rowq):
            i = rowq[rh]
            rh += 1
            if not row_alive[i] or rc[i] != 1:
                continue
            j = next(int(c) for c in Rj[Rp[i]:Rp[i + 1]] if col_alive[c])
            prow.append(i)
            pcol.append(j)
            col_alive[j] = row_alive[i] = False
            for r in Bi[Bp[j]:Bp[j + 1]]:
                if row_alive[r]:
                    rc[r] -= 1
                    if rc[r] == 1:
                        rowq.append(int(r))
            if ch < len(colq):
                break
    s = len(prow)
    piv_row = np.array(prow + np.flatnonzero(row_alive).tolist(), dtype=np.int32)
    piv_col = np.array(pcol + np.flatnonzero(col_alive).tolist(), dtype=np.int32)
    return piv_row, piv_col, s


def tri_lower(piv_row, s, Lp, Li, Lx, y):
    """Forward pass over singleton pivots: ``y[Li] -= Lx * y[piv_row[k]]``, in place."""
    for k in range(s):
        yk = y[piv_row[k]]
        if yk != 0.0:
            lo, hi = Lp[k], Lp[k + 1]
            y[Li[lo:hi]] -= Lx[lo:hi] * yk


def tri_upper(piv_row, piv_col, piv, s, Up, Uj, Ux, y, x):
    """Back substitution over singleton pivots into ``x`` (nucleus entries already set)."""
    for k in range(s - 1, -1, -1):
        lo, hi = Up[k], Up[k + 1]
        acc = y[piv_row[k]]
        for e in range(lo, hi):
            acc -= Ux[e] * x[Uj[e]]
        x[piv_col[k]] = acc / piv[k]


def tri_upper_t(piv_row, piv_col, piv, s, Up, Uj, Ux, c, y):
    """Transposed forward pass; consumes ``c`` in place and writes pivot rows of ``y``."""
    for k in range(s):
        wk = c[piv_col[k]] / piv[k]
        y[piv_row[k]] = wk
        if wk != 0.0:
            lo, hi = Up[k], Up[k + 1]
            c[Uj[lo:hi]] -= Ux[lo:hi] * wk


def tri_lower_t(piv_row, s, Lp, Li, Lx, y):
    """Transposed back substitution over singleton pivots, in place."""
    for k in range(s - 1, -1, -1):
        lo, hi = Lp[k], Lp[k + 1]
        acc = y[piv_row[k]]
        for e in range(lo, hi):
            acc -= Lx[e] * y[Li[e]]
        y[piv_row[k]] = acc
