"""Two-phase bounded-variable primal simplex with dual values.

Rows are turned into equalities with one logical variable each
(``A x + r = b``), whose bounds encode the row sense. Phase 1 adds
artificials only where the logical cannot absorb the initial residual and
minimizes their sum. The basis is held as a sparse LU factorization plus a
product-form eta file, refactorized every ``refactor_every`` pivots.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .. import kernels
from .factor import SingularBasis, factorize
from .model import LinearProgram, LPError

log = logging.getLogger(__name__)

BASIC, AT_LOWER, AT_UPPER, FREE, FIXED = 0, 1, 2, 3, 4

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
ITERATION_LIMIT = "iteration-limit"


class SolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class SolveOptions:
    tol: float = 1e-6  # primal feasibility, unscaled and relative to max(1, |rhs|)
    pivot_tol: float = 1e-7
    opt_tol: float = 1e-9  # reduced-cost optimality on the scaled problem
    harris_tol: float = 1e-9
    max_iters: int = 500_000
    seed: int = 0
    refactor_every: int = 50
    bland_after: int = 50
    scale: bool = True
    pricing: str = "devex"  # or "dantzig" (largest |d_j|)


@dataclass
class Solution:
    status: str
    objective: float = math.nan
    x: np.ndarray = field(default_factory=lambda: np.zeros(0))
    row_duals: np.ndarray = field(default_factory=lambda: np.zeros(0))
    reduced_costs: np.ndarray = field(default_factory=lambda: np.zeros(0))
    row_activity: np.ndarray = field(default_factory=lambda: np.zeros(0))
    iterations: int = 0
    phase1_iterations: int = 0
    certificate: list[str] = field(default_factory=list)
    basis: tuple[int, ...] = ()
    seed: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL

    def value(self, lp: LinearProgram, col) -> float:
        return float(self.x[lp.col_index(col) if isinstance(col, str) else col])

    def dual(self, lp: LinearProgram, row) -> float:
        return float(self.row_duals[lp.row_index(row) if isinstance(row, str) else row])


def _pow2(v: np.ndarray) -> np.ndarray:
    return np.exp2(np.round(np.log2(v)))


def _scale_factors(A: sp.csc_matrix, passes: int = 6) -> tuple[np.ndarray, np.ndarray]:
    """Geometric-mean row/column scaling rounded to powers of two."""
    m, n = A.shape
    R, S = np.ones(m), np.ones(n)
    if A.nnz == 0:
        return R, S
    coo = A.tocoo()
    absval = np.abs(coo.data)
    for _ in range(passes):
        v = absval * R[coo.row] * S[coo.col]
        rmax = np.zeros(m)
        np.maximum.at(rmax, coo.row, v)
        rmin = np.full(m, np.inf)
        np.minimum.at(rmin, coo.row, v)
        has = rmax > 0
        R[has] /= np.sqrt(rmin[has] * rmax[has])
        v = absval * R[coo.row] * S[coo.col]
        cmax = np.zeros(n)
        np.maximum.at(cmax, coo.col, v)
        cmin = np.full(n, np.inf)
        np.minimum.at(cmin, coo.col, v)
        has = cmax > 0
        S[has] /= np.sqrt(cmin[has] * cmax[has])
    return _pow2(R), _pow2(S)


class _Simplex:
    def __init__(self, M: sp.csc_matrix, b: np.ndarray, lb, ub, x, status, basis, opts: SolveOptions):
        self.M = M
        self.MT = M.T.tocsr()
        self.indptr = M.indptr.astype(np.int32)
        self.indices = M.indices.astype(np.int32)
        self.data = M.data.astype(float)
        self.b = b
        self.lb, self.ub, self.x = lb, ub, x
        self.status = status
        self.basis = basis
        self.opts = opts
        m = len(b)
        self.m = m
        self.eta_pos = np.zeros(opts.refactor_every + 1, dtype=np.int64)
        self.eta_cols = np.zeros((opts.refactor_every + 1, m))
        self.n_eta = 0
        self.iterations = 0
        self.lu = None

    # linear algebra ------------------------------------------------------
    def column(self, j: int) -> np.ndarray:
        a = np.zeros(self.m)
        lo, hi = self.indptr[j], self.indptr[j + 1]
        a[self.indices[lo:hi]] = self.data[lo:hi]
        return a

    def refactor(self) -> None:
        try:
            self.lu = factorize(self.M[:, self.basis].tocsc())
        except SingularBasis as exc:
            raise SolverError(f"basis factorization failed: {exc}") from None
        self.n_eta = 0
        xn = self.x.copy()
        xn[self.basis] = 0.0
        self.x[self.basis] = self.lu.solve(self.b - self.M @ xn)

    def ftran(self, a: np.ndarray) -> np.ndarray:
        w = np.ascontiguousarray(self.lu.solve(a))
        return np.asarray(kernels.ftran_etas(self.eta_pos, self.eta_cols, self.n_eta, w))

    def btran(self, cb: np.ndarray) -> np.ndarray:
        v = np.ascontiguousarray(cb, dtype=float).copy()
        v = np.asarray(kernels.btran_etas(self.eta_pos, self.eta_cols, self.n_eta, v))
        return self.lu.solve_t(v)

    # iterations ----------------------------------------------------------
    def reduced_costs(self, cost: np.ndarray) -> np.ndarray:
        y = self.btran(cost[self.basis])
        d = cost - self.MT @ y
        d[self.basis] = 0.0
        return d

    def run(self, cost: np.ndarray, max_iters: int) -> str:
        opts = self.opts
        self.refactor()
        degenerate = 0
        cost = np.ascontiguousarray(cost, dtype=float)
        d = self.reduced_costs(cost)
        weights = np.ones(len(cost))
        dantzig = opts.pricing == "dantzig"
        unit = np.zeros(self.m)
        while True:
            if self.iterations >= max_iters:
                return ITERATION_LIMIT
            if self.n_eta >= opts.refactor_every:
                self.refactor()
                d = self.reduced_costs(cost)
            bland = degenerate > opts.bland_after
            j, dj = kernels.price(d, weights, self.status, opts.opt_tol, bland)
            if j < 0:
                if self.n_eta == 0:
                    return OPTIMAL
                # confirm against freshly computed reduced costs
                self.refactor()
                d = self.reduced_costs(cost)
                continue
            self.iterations += 1
            direction = 1.0 if dj < 0 else -1.0
            alpha = self.ftran(self.column(j))
            basis = self.basis
            p, theta, to_upper = kernels.ratio_test(
                np.ascontiguousarray(self.x[basis]), np.ascontiguousarray(self.lb[basis]),
                np.ascontiguousarray(self.ub[basis]), alpha, direction, opts.pivot_tol,
                opts.harris_tol, bland, basis,
            )
            span = self.ub[j] - self.lb[j]
            if p < 0 and not math.isfinite(span):
                return UNBOUNDED
            if span <= theta:
                # entering variable reaches its opposite bound first
                self.x[basis] -= direction * span * alpha
                if direction > 0:
                    self.x[j] = self.ub[j]
                    self.status[j] = AT_UPPER
                else:
                    self.x[j] = self.lb[j]
                    self.status[j] = AT_LOWER
                degenerate = degenerate + 1 if span <= 1e-12 else 0
                continue
            leaving = basis[p]
            unit[p] = 1.0
            rho = self.btran(unit)
            unit[p] = 0.0
            alpha_r = np.ascontiguousarray(self.MT @ rho)
            kernels.devex_update(d, weights, alpha_r, self.status, j, leaving, alpha[p])
            if dantzig or weights.max() > 1e8:
                weights[:] = 1.0
            self.x[basis] -= direction * theta * alpha
            self.x[j] += direction * theta
            if self.lb[leaving] == self.ub[leaving]:
                self.x[leaving] = self.lb[leaving]
                self.status[leaving] = FIXED
            elif to_upper:
                self.x[leaving] = self.ub[leaving]
                self.status[leaving] = AT_UPPER
            else:
                self.x[leaving] = self.lb[leaving]
                self.status[leaving] = AT_LOWER
            basis[p] = j
            self.status[j] = BASIC
            self.eta_pos[self.n_eta] = p
            self.eta_cols[self.n_eta] = alpha
            self.n_eta += 1
            degenerate = degenerate + 1 if theta <= 1e-12 else 0


def _logical_bounds(sense: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    lo = np.where(sense == ">=", -np.inf, 0.0).astype(float)
    hi = np.where(sense == "<=", np.inf, 0.0).astype(float)
    return lo, hi


def _trivial_solution(lp: LinearProgram, opts: SolveOptions) -> Solution:
    """LP without rows: each column independently at its cheapest bound."""
    n = lp.n_cols
    x = np.zeros(n)
    for j in range(n):
        c, lo, hi = lp.cost[j], lp.lower[j], lp.upper[j]
        if c > 0:
            target = lo
        elif c < 0:
            target = hi
        else:
            target = lo if math.isfinite(lo) else (hi if math.isfinite(hi) else 0.0)
        if not math.isfinite(target):
            return Solution(UNBOUNDED, seed=opts.seed)
        x[j] = target
    return Solution(
        OPTIMAL, objective=lp.objective_value(x), x=x, row_duals=np.zeros(lp.n_rows),
        reduced_costs=lp.cost.copy(), row_activity=np.zeros(lp.n_rows), seed=opts.seed,
    )


def solve(lp: LinearProgram, options: SolveOptions | None = None, **overrides) -> Solution:
    """Solve a finalized :class:`LinearProgram` (minimization)."""
    opts = options or SolveOptions()
    if overrides:
        opts = SolveOptions(**{**opts.__dict__, **overrides})
    if not lp.finalized:
        raise LPError("LP must be finalized before solving")
    if opts.pricing not in ("devex", "dantzig"):
        raise ValueError(f"unknown pricing rule {opts.pricing!r}")
    if lp.empty_row_conflicts:
        return Solution(INFEASIBLE, certificate=list(lp.empty_row_conflicts), seed=opts.seed)
    m, n = lp.n_rows, lp.n_cols
    if m == 0 or lp.A.nnz == 0:
        return _trivial_solution(lp, opts)

    A = lp.A
    if opts.scale:
        R, S = _scale_factors(A)
    else:
        R, S = np.ones(m), np.ones(n)
    As = sp.diags(R) @ A @ sp.diags(S)
    cs = lp.cost * S
    cscale = float(np.max(np.abs(cs))) if np.any(cs) else 1.0
    cs = cs / cscale
    bs = lp.rhs * R
    lbs, ubs = lp.lower / S, lp.upper / S
    llo, lhi = _logical_bounds(lp.sense)

    # initial nonbasic point for structurals
    x0 = np.where(np.isfinite(lbs), lbs, np.where(np.isfinite(ubs), ubs, 0.0))
    st0 = np.where(
        lbs == ubs, FIXED,
        np.where(np.isfinite(lbs), AT_LOWER, np.where(np.isfinite(ubs), AT_UPPER, FREE)),
    ).astype(np.int8)
    rho = bs - As @ x0
    absorbs = (rho >= llo) & (rho <= lhi)
    art_rows = np.flatnonzero(~absorbs)
    logical_val = np.clip(rho, llo, lhi)
    sign = np.sign(rho[art_rows] - logical_val[art_rows])
    n_art = len(art_rows)
    Art = sp.csc_matrix((sign, (art_rows, np.arange(n_art))), shape=(m, n_art))
    M = sp.hstack([As, sp.identity(m, format="csc"), Art], format="csc")
    M.sort_indices()

    N = n + m + n_art
    lb = np.concatenate([lbs, llo, np.zeros(n_art)])
    ub = np.concatenate([ubs, lhi, np.full(n_art, np.inf)])
    x = np.concatenate([x0, logical_val, np.abs(rho[art_rows] - logical_val[art_rows])])
    status = np.empty(N, dtype=np.int8)
    status[:n] = st0
    logical_status = np.where(llo == lhi, FIXED, np.where(logical_val == lhi, AT_UPPER, AT_LOWER))
    status[n:n + m] = logical_status
    basis = np.arange(n, n + m, dtype=np.int64)
    basis[art_rows] = n + m + np.arange(n_art)
    status[basis] = BASIC

    sx = _Simplex(M, bs, lb, ub, x, status, basis, opts)
    phase1_iters = 0
    if n_art:
        c1 = np.zeros(N)
        c1[n + m:] = 1.0
        res = sx.run(c1, opts.max_iters)
        phase1_iters = sx.iterations
        if res == ITERATION_LIMIT:
            return _package(lp, sx, ITERATION_LIMIT, R, S, cscale, np.zeros(N), opts, phase1_iters)
        sx.refactor()
        art_val = sx.x[n + m:]
        unscaled = art_val / R[art_rows]
        limit = opts.tol * np.maximum(1.0, np.abs(lp.rhs[art_rows]))
        if np.any(unscaled > limit):
            y1 = sx.btran(c1[sx.basis])
            support = set(np.flatnonzero(np.abs(y1) > 1e-9).tolist())
            support.update(art_rows[unscaled > limit].tolist())
            names = lp.row_names
            return Solution(
                INFEASIBLE, certificate=[names[i] for i in sorted(support)],
                iterations=sx.iterations, phase1_iterations=phase1_iters, seed=opts.seed,
            )
        # artificials are pinned at zero for phase 2
        sx.ub[n + m:] = 0.0
        nonbasic_art = (status[n + m:] != BASIC)
        status[n + m:][nonbasic_art] = FIXED
        sx.x[n + m:][nonbasic_art] = 0.0
    c2 = np.concatenate([cs, np.zeros(m + n_art)])
    res = sx.run(c2, opts.max_iters)
    return _package(lp, sx, res, R, S, cscale, c2, opts, phase1_iters)


def _package(lp, sx: _Simplex, status: str, R, S, cscale, cost, opts, phase1_iters) -> Solution:
    n = lp.n_cols
    if status == UNBOUNDED:
        return Solution(UNBOUNDED, iterations=sx.iterations, phase1_iterations=phase1_iters, seed=opts.seed)
    sx.refactor()
    xs = sx.x[:n].copy()
    x = xs * S
    y_s = sx.btran(cost[sx.basis])
    d_s = cost[:n] - sx.M[:, :n].T @ y_s
    y = y_s * R * cscale
    d = d_s * cscale / S
    # basic values may sit a hair outside their bounds (within tol); nonbasic
    # ones are snapped exactly
    np.clip(x, lp.lower, lp.upper, out=x)
    nb_low = sx.status[:n] == AT_LOWER
    nb_up = sx.status[:n] == AT_UPPER
    x[nb_low] = lp.lower[nb_low]
    x[nb_up] = lp.upper[nb_up]
    fixed = sx.status[:n] == FIXED
    x[fixed] = lp.lower[fixed]
    return Solution(
        status, objective=lp.objective_value(x), x=x, row_duals=y, reduced_costs=d,
        row_activity=lp.A @ x, iterations=sx.iterations, phase1_iterations=phase1_iters,
        basis=tuple(int(b) for b in sx.basis), seed=opts.seed,
    )


def write_solution_csv(lp: LinearProgram, sol: Solution, path) -> None:
    """Dump ``kind,name,value,dual`` for columns (reduced cost) and rows (dual)."""
    import csv

    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["kind", "name", "value", "dual"])
        for j, name in enumerate(lp.col_names):
            w.writerow(["col", name, f"{sol.x[j]:.9g}", f"{sol.reduced_costs[j]:.9g}"])
        for i, name in enumerate(lp.row_names):
            w.writerow(["row", name, f"{sol.row_activity[i]:.9g}", f"{sol.row_duals[i]:.9g}"])
