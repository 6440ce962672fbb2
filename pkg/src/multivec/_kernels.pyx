# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops for the simplex solver and k-medoids reduction.

Semantics match ``multivec._kernels_py`` exactly; see that module for the
contract of each function.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, INFINITY, isfinite

cnp.import_array()

DEF BASIC = 0
DEF AT_LOWER = 1
DEF AT_UPPER = 2
DEF FREE = 3


def price(const double[::1] d, const double[::1] weights, const cnp.int8_t[::1] status,
          double tol, bint bland):
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t j, best_j = -1
    cdef double dj, score, best = -1.0
    cdef cnp.int8_t st
    cdef int eligible
    for j in range(n):
        st = status[j]
        dj = d[j]
        # bitwise so the status test does not branch (basic and nonbasic
        # columns interleave unpredictably)
        eligible = (((st == AT_LOWER) & (dj < -tol)) | ((st == AT_UPPER) & (dj > tol))
                    | ((st == FREE) & (fabs(dj) > tol)))
        if eligible:
            if bland:
                return j, dj
            score = dj * dj / weights[j]
            if score > best:
                best = score
                best_j = j
    if best_j < 0:
        return -1, 0.0
    return best_j, d[best_j]


def devex_update(double[::1] d, double[::1] weights, const double[::1] alpha_r, const cnp.int8_t[::1] status,
                 Py_ssize_t q, Py_ssize_t leaving, double alpha_rq):
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t j
    cdef double theta = d[q] / alpha_rq
    cdef double wq = weights[q]
    cdef double r, cand
    for j in range(n):
        if status[j] == BASIC or j == q:
            continue
        d[j] -= theta * alpha_r[j]
        r = alpha_r[j] / alpha_rq
        cand = r * r * wq
        if cand > weights[j]:
            weights[j] = cand
    d[q] = 0.0
    d[leaving] = -theta
    cand = wq / (alpha_rq * alpha_rq)
    weights[leaving] = cand if cand > 1.0 else 1.0


def ratio_test(const double[::1] xb, const double[::1] lb, const double[::1] ub, const double[::1] alpha,
               double direction, double tol_piv, double harris_tol, bint bland, const cnp.int64_t[::1] basis):
    cdef Py_ssize_t m = xb.shape[0]
    cdef Py_ssize_t i, p = -1
    cdef double delta, dist, rate, ratio, best = INFINITY, theta_max = INFINITY, best_rate = -1.0
    cdef bint exact = bland or harris_tol <= 0.0
    # pass 1: minimum ratio (exact) or Harris bound (relaxed)
    for i in range(m):
        delta = -direction * alpha[i]
        if delta < -tol_piv and isfinite(lb[i]):
            dist = xb[i] - lb[i]
        elif delta > tol_piv and isfinite(ub[i]):
            dist = ub[i] - xb[i]
        else:
            continue
        if dist < 0.0:
            dist = 0.0
        rate = fabs(delta)
        if exact:
            ratio = dist / rate
            if ratio < best:
                best = ratio
        else:
            ratio = (dist + harris_tol) / rate
            if ratio < theta_max:
                theta_max = ratio
    if exact:
        if best == INFINITY:
            return -1, INFINITY, False
        theta_max = best + 1e-12
    elif theta_max == INFINITY:
        return -1, INFINITY, False
    # pass 2: pick among candidates within the bound
    for i in range(m):
        delta = -direction * alpha[i]
        if delta < -tol_piv and isfinite(lb[i]):
            dist = xb[i] - lb[i]
        elif delta > tol_piv and isfinite(ub[i]):
            dist = ub[i] - xb[i]
        else:
            continue
        if dist < 0.0:
            dist = 0.0
        rate = fabs(delta)
        if dist / rate <= theta_max:
            if bland:
                if p < 0 or basis[i] < basis[p]:
                    p = i
            elif rate > best_rate:
                best_rate = rate
                p = i
    delta = -direction * alpha[p]
    if delta > 0:
        dist = ub[p] - xb[p]
    else:
        dist = xb[p] - lb[p]
    if dist < 0.0:
        dist = 0.0
    return p, dist / fabs(delta), delta > 0


def ftran_etas(const cnp.int64_t[::1] eta_pos, const double[:, ::1] eta_cols, Py_ssize_t count, double[::1] w):
    cdef Py_ssize_t m = w.shape[0]
    cdef Py_ssize_t k, i, p
    cdef double wp
    for k in range(count):
        p = eta_pos[k]
        wp = w[p] / eta_cols[k, p]
        if wp != 0.0:
            for i in range(m):
                w[i] -= eta_cols[k, i] * wp
        w[p] = wp
    return np.asarray(w)


def btran_etas(const cnp.int64_t[::1] eta_pos, const double[:, ::1] eta_cols, Py_ssize_t count, double[::1] v):
    cdef Py_ssize_t m = v.shape[0]
    cdef Py_ssize_t k, i, p, m4 = m - m % 4
    cdef double s0, s1, s2, s3, vp
    cdef const double* col
    for k in range(count - 1, -1, -1):
        p = eta_pos[k]
        vp = v[p]
        col = &eta_cols[k, 0]
        # four partial sums so the loop pipelines
        s0 = s1 = s2 = s3 = 0.0
        for i in range(0, m4, 4):
            s0 += col[i] * v[i]
            s1 += col[i + 1] * v[i + 1]
            s2 += col[i + 2] * v[i + 2]
            s3 += col[i + 3] * v[i + 3]
        for i in range(m4, m):
            s0 += col[i] * v[i]
        s0 = (s0 + s1) + (s2 + s3) - col[p] * vp
        v[p] = (vp - s0) / col[p]
    return np.asarray(v)


def pam_swap(const double[:, ::1] D, const cnp.int64_t[::1] medoids, const cnp.int64_t[::1] nearest_pos,
             const double[::1] nearest_dist, const double[::1] second_dist):
    cdef Py_ssize_t n = D.shape[0]
    cdef Py_ssize_t k = medoids.shape[0]
    cdef Py_ssize_t i, h, j
    cdef double dj, ej, djh, gain, near
    cdef double[::1] shared = np.zeros(n)
    cdef double[:, ::1] corr = np.zeros((k, n))
    cdef cnp.uint8_t[::1] is_medoid = np.zeros(n, dtype=np.uint8)
    for i in range(k):
        is_medoid[medoids[i]] = 1
    for j in range(n):
        dj = nearest_dist[j]
        ej = second_dist[j]
        i = nearest_pos[j]
        for h in range(n):
            djh = D[j, h]
            gain = djh - dj
            if gain > 0.0:
                gain = 0.0
            shared[h] += gain
            near = djh if djh < ej else ej
            corr[i, h] += near - dj - gain
    cdef double best = INFINITY, val
    cdef Py_ssize_t best_i = 0, best_h = 0
    for h in range(n):
        if is_medoid[h]:
            continue
        for i in range(k):
            val = shared[h] + corr[i, h]
            if val < best:
                best = val
                best_i = i
                best_h = h
    return best_i, best_h, best


def lu_ftran(const cnp.int32_t[::1] Lp, const cnp.int32_t[::1] Li, const double[::1] Lx,
             const cnp.int32_t[::1] Up, const cnp.int32_t[::1] Ui, const double[::1] Ux, const double[::1] Ud,
             const cnp.int32_t[::1] perm_r, const cnp.int32_t[::1] perm_c, const double[::1] b):
    cdef Py_ssize_t n = b.shape[0]
    cdef Py_ssize_t i, j, k, r
    cdef double yj
    cdef double[::1] y = np.empty(n)
    out = np.empty(n)
    cdef double[::1] x = out
    for i in range(n):
        y[perm_r[i]] = b[i]
    for j in range(n):
        yj = y[j]
        if yj != 0.0:
            for k in range(Lp[j], Lp[j + 1]):
                r = Li[k]
                if r > j:
                    y[r] -= Lx[k] * yj
    for j in range(n - 1, -1, -1):
        if y[j] != 0.0:
            y[j] /= Ud[j]
            yj = y[j]
            for k in range(Up[j], Up[j + 1]):
                r = Ui[k]
                if r < j:
                    y[r] -= Ux[k] * yj
    for i in range(n):
        x[i] = y[perm_c[i]]
    return out


def lu_btran(const cnp.int32_t[::1] Lp, const cnp.int32_t[::1] Li, const double[::1] Lx,
             const cnp.int32_t[::1] Up, const cnp.int32_t[::1] Ui, const double[::1] Ux, const double[::1] Ud,
             const cnp.int32_t[::1] perm_r, const cnp.int32_t[::1] perm_c, const double[::1] c):
    cdef Py_ssize_t n = c.shape[0]
    cdef Py_ssize_t i, j, k, r
    cdef double s
    cdef double[::1] w = np.empty(n)
    cdef double[::1] v = np.empty(n)
    out = np.empty(n)
    cdef double[::1] x = out
    for i in range(n):
        w[perm_c[i]] = c[i]
    for j in range(n):
        s = w[j]
        for k in range(Up[j], Up[j + 1]):
            r = Ui[k]
            if r < j:
                s -= Ux[k] * w[r]
        w[j] = s / Ud[j]
    for j in range(n - 1, -1, -1):
        s = w[j]
        for k in range(Lp[j], Lp[j + 1]):
            r = Li[k]
            if r > j:
                s -= Lx[k] * v[r]
        v[j] = s
    for i in range(n):
        x[i] = v[perm_r[i]]
    return out


def singleton_pivots(const cnp.int32_t[::1] Bp, const cnp.int32_t[::1] Bi,
                     const cnp.int32_t[::1] Rp, const cnp.int32_t[::1] Rj):
    cdef Py_ssize_t m = Bp.shape[0] - 1
    cdef Py_ssize_t nnz = Bi.shape[0]
    cdef Py_ssize_t i, j, e, k = 0, r, c, nr, nc
    cdef Py_ssize_t chead = 0, ctail = 0, rhead = 0, rtail = 0
    cdef cnp.int32_t[::1] cc = np.empty(m, dtype=np.int32)
    cdef cnp.int32_t[::1] rc = np.empty(m, dtype=np.int32)
    cdef cnp.int8_t[::1] row_alive = np.ones(m, dtype=np.int8)
    cdef cnp.int8_t[::1] col_alive = np.ones(m, dtype=np.int8)
    cdef cnp.int32_t[::1] colq = np.empty(m + nnz + 1, dtype=np.int32)
    cdef cnp.int32_t[::1] rowq = np.empty(m + nnz + 1, dtype=np.int32)
    piv_row_a = np.empty(m, dtype=np.int32)
    piv_col_a = np.empty(m, dtype=np.int32)
    cdef cnp.int32_t[::1] piv_row = piv_row_a
    cdef cnp.int32_t[::1] piv_col = piv_col_a
    for j in range(m):
        cc[j] = Bp[j + 1] - Bp[j]
        if cc[j] == 1:
            colq[ctail] = j
            ctail += 1
    for i in range(m):
        rc[i] = Rp[i + 1] - Rp[i]
        if rc[i] == 1:
            rowq[rtail] = i
            rtail += 1
    while chead < ctail or rhead < rtail:
        while chead < ctail:
            j = colq[chead]
            chead += 1
            if not col_alive[j] or cc[j] != 1:
                continue
            i = -1
            for e in range(Bp[j], Bp[j + 1]):
                if row_alive[Bi[e]]:
                    i = Bi[e]
                    break
            piv_row[k] = i
            piv_col[k] = j
            k += 1
            col_alive[j] = 0
            row_alive[i] = 0
            for e in range(Rp[i], Rp[i + 1]):
                c = Rj[e]
                if col_alive[c]:
                    cc[c] -= 1
                    if cc[c] == 1:
                        colq[ctail] = c
                        ctail += 1
        while rhead < rtail:
            i = rowq[rhead]
            rhead += 1
            if not row_alive[i] or rc[i] != 1:
                continue
            j = -1
            for e in range(Rp[i], Rp[i + 1]):
                if col_alive[Rj[e]]:
                    j = Rj[e]
                    break
            piv_row[k] = i
            piv_col[k] = j
            k += 1
            col_alive[j] = 0
            row_alive[i] = 0
            for e in range(Bp[j], Bp[j + 1]):
                r = Bi[e]
                if row_alive[r]:
                    rc[r] -= 1
                    if rc[r] == 1:
                        rowq[rtail] = r
                        rtail += 1
            if chead < ctail:
                break
    nr = k
    for i in range(m):
        if row_alive[i]:
            piv_row[nr] = i
            nr += 1
    nc = k
    for j in range(m):
        if col_alive[j]:
            piv_col[nc] = j
            nc += 1
    return piv_row_a, piv_col_a, k


def tri_lower(const cnp.int32_t[::1] piv_row, Py_ssize_t s, const cnp.int32_t[::1] Lp,
              const cnp.int32_t[::1] Li, const double[::1] Lx, double[::1] y):
    cdef Py_ssize_t k, e
    cdef double yk
    for k in range(s):
        yk = y[piv_row[k]]
        if yk != 0.0:
            for e in range(Lp[k], Lp[k + 1]):
                y[Li[e]] -= Lx[e] * yk


def tri_upper(const cnp.int32_t[::1] piv_row, const cnp.int32_t[::1] piv_col, const double[::1] piv,
              Py_ssize_t s, const cnp.int32_t[::1] Up, const cnp.int32_t[::1] Uj, const double[::1] Ux,
              const double[::1] y, double[::1] x):
    cdef Py_ssize_t k, e
    cdef double acc
    for k in range(s - 1, -1, -1):
        acc = y[piv_row[k]]
        for e in range(Up[k], Up[k + 1]):
            acc -= Ux[e] * x[Uj[e]]
        x[piv_col[k]] = acc / piv[k]


def tri_upper_t(const cnp.int32_t[::1] piv_row, const cnp.int32_t[::1] piv_col, const double[::1] piv,
                Py_ssize_t s, const cnp.int32_t[::1] Up, const cnp.int32_t[::1] Uj, const double[::1] Ux,
                double[::1] c, double[::1] y):
    cdef Py_ssize_t k, e
    cdef double wk
    for k in range(s):
        wk = c[piv_col[k]] / piv[k]
        y[piv_row[k]] = wk
        if wk != 0.0:
            for e in range(Up[k], Up[k + 1]):
                c[Uj[e]] -= Ux[e] * wk


def tri_lower_t(const cnp.int32_t[::1] piv_row, Py_ssize_t s, const cnp.int32_t[::1] Lp,
                const cnp.int32_t[::1] Li, const double[::1] Lx, double[::1] y):
    cdef Py_ssize_t k, e
    cdef double acc
    for k in range(s - 1, -1, -1):
        acc = y[piv_row[k]]
        for e in range(Lp[k], Lp[k + 1]):
            acc -= Lx[e] * y[Li[e]]
        y[piv_row[k]] = acc
