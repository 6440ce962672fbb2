"""Sparse LU factors of a simplex basis.

Simplex bases are mostly logical and singleton columns. With the compiled
kernels the row and column singletons are peeled off first (these
elimination steps create no fill) and only the remaining nucleus goes to
SuperLU. In pivot order the basis is

    L = [[L_SS, 0], [L_NS, L_NN]]     U = [[U_SS, U_SN], [0, U_NN]]

where ``L_SS`` has entries only in row-singleton columns and ``U_SS`` only
in column-singleton rows, so both singleton blocks are read straight off
the basis. Without the compiled kernels the whole basis goes to SuperLU.
"""
from __future__ import annotations

import warnings

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .. import kernels


class SingularBasis(RuntimeError):
    pass


def _splu(B: sp.csc_matrix):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sp.SparseEfficiencyWarning)
        try:
            return spla.splu(B, permc_spec="COLAMD")
        except RuntimeError as exc:
            raise SingularBasis(str(exc)) from None


class _SuperLUFactor:
    def __init__(self, B: sp.csc_matrix):
        self.lu = _splu(B)

    def solve(self, b: np.ndarray) -> np.ndarray:
        return self.lu.solve(b)

    def solve_t(self, c: np.ndarray) -> np.ndarray:
        return self.lu.solve(c, trans="T")


class _TriangularLU:
    """SuperLU factors of a (small) matrix with compiled triangular solves."""

    def __init__(self, B: sp.csc_matrix):
        lu = _splu(B)
        L, U = lu.L.tocsc(), lu.U.tocsc()
        i32 = np.int32
        self.args = (
            L.indptr.astype(i32), L.indices.astype(i32), L.data,
            U.indptr.astype(i32), U.indices.astype(i32), U.data, U.diagonal().copy(),
            lu.perm_r.astype(i32), lu.perm_c.astype(i32),
        )

    def solve(self, b):
        return kernels.lu_ftran(*self.args, np.ascontiguousarray(b, dtype=float))

    def solve_t(self, c):
        return kernels.lu_btran(*self.args, np.ascontiguousarray(c, dtype=float))


def _csr_blocks(keys: np.ndarray, idx: np.ndarray, vals: np.ndarray, s: int):
    order = np.argsort(keys, kind="stable")
    ptr = np.zeros(s + 1, dtype=np.int32)
    np.cumsum(np.bincount(keys, minlength=s), out=ptr[1:])
    return ptr, idx[order].astype(np.int32), np.ascontiguousarray(vals[order], dtype=float)


class _SingletonFactor:
    def __init__(self, B: sp.csc_matrix):
        m = B.shape[0]
        B = B.tocsc()
        B.sum_duplicates()
        R = B.tocsr()
        i32 = np.int32
        prow, pcol, s = kernels.singleton_pivots(
            B.indptr.astype(i32), B.indices.astype(i32), R.indptr.astype(i32), R.indices.astype(i32))
        self.m, self.s = m, s
        self.piv_row, self.piv_col = prow, pcol
        pos_row = np.empty(m, dtype=np.int64)
        pos_row[prow] = np.arange(m)
        pos_col = np.empty(m, dtype=np.int64)
        pos_col[pcol] = np.arange(m)

        coo = B.tocoo()
        r, c, v = coo.row, coo.col, coo.data
        pr, pc = pos_row[r], pos_col[c]
        diag = (pr == pc) & (pr < s)
        piv = np.zeros(s)
        piv[pr[diag]] = v[diag]
        if s and np.any(piv == 0.0):
            raise SingularBasis("zero singleton pivot")
        self.piv = piv
        low = (pr > pc) & (pc < s)
        self.L = _csr_blocks(pc[low], r[low], v[low] / piv[pc[low]], s)
        up = (pr < pc) & (pr < s)
        self.U = _csr_blocks(pr[up], c[up], v[up], s)

        self.nuc_rows = prow[s:]
        self.nuc_cols = pcol[s:]
        self.nucleus = None
        if s < m:
            nuc = (pr >= s) & (pc >= s)
            N = sp.csc_matrix((v[nuc], (pr[nuc] - s, pc[nuc] - s)), shape=(m - s, m - s))
            self.nucleus = _TriangularLU(N)

    def solve(self, b: np.ndarray) -> np.ndarray:
        y = np.array(b, dtype=float)
        s = self.s
        kernels.tri_lower(self.piv_row, s, *self.L, y)
        x = np.empty(self.m)
        if self.nucleus is not None:
            x[self.nuc_cols] = self.nucleus.solve(y[self.nuc_rows])
        kernels.tri_upper(self.piv_row, self.piv_col, self.piv, s, *self.U, y, x)
        return x

    def solve_t(self, c: np.ndarray) -> np.ndarray:
        w = np.array(c, dtype=float)
        y = np.empty(self.m)
        s = self.s
        kernels.tri_upper_t(self.piv_row, self.piv_col, self.piv, s, *self.U, w, y)
        if self.nucleus is not None:
            y[self.nuc_rows] = self.nucleus.solve_t(w[self.nuc_cols])
        kernels.tri_lower_t(self.piv_row, s, *self.L, y)
        return y


def factorize(B: sp.csc_matrix, method: str | None = None):
    """Factor a square basis matrix; ``solve`` and ``solve_t`` on the result.

    ``method`` is ``singleton`` or ``superlu``; the default picks
    ``singleton`` with the compiled kernels and ``superlu`` otherwise.
    """
    if method is None:
        method = "singleton" if kernels.BACKEND == "cython" else "superlu"
    if method == "singleton":
        return _SingletonFactor(B)
    if method == "superlu":
        return _SuperLUFactor(B)
    raise ValueError(f"unknown factorization {method!r}")
