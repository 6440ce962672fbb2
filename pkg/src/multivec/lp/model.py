"""Sparse linear program container with named rows and columns."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

SENSES = ("<=", ">=", "=")


class LPError(ValueError):
    pass


@dataclass(frozen=True)
class Column:
    name: str
    lower: float
    upper: float
    cost: float


@dataclass(frozen=True)
class Row:
    name: str
    sense: str
    rhs: float


class LinearProgram:
    """Minimization LP: ``min c'x + offset  s.t.  A x (<=,>=,=) b,  l <= x <= u``.

    Rows and columns are addressed by the integer handle returned from
    :meth:`add_row` / :meth:`add_column` or by name. Coefficients may be
    added in any order; duplicates are summed by :meth:`finalize`.
    """

    def __init__(self, name: str = "lp"):
        self.name = name
        self.objective_offset = 0.0
        self._col_names: list[str] = []
        self._col_lower: list[float] = []
        self._col_upper: list[float] = []
        self._col_cost: list[float] = []
        self._row_names: list[str] = []
        self._row_sense: list[str] = []
        self._row_rhs: list[float] = []
        self._col_index: dict[str, int] = {}
        self._row_index: dict[str, int] = {}
        self._ri: list[int] = []
        self._ci: list[int] = []
        self._vals: list[float] = []
        self._finalized = False
        self.A: sp.csc_matrix | None = None
        self.empty_row_conflicts: list[str] = []

    # construction -------------------------------------------------------
    def _check_open(self) -> None:
        if self._finalized:
            raise LPError("LP is finalized; no further modification allowed")

    def add_column(self, name: str, lower: float = 0.0, upper: float = math.inf, cost: float = 0.0) -> int:
        self._check_open()
        if name in self._col_index:
            raise LPError(f"duplicate column name {name!r}")
        if lower > upper:
            raise LPError(f"column {name!r}: lower bound {lower} exceeds upper bound {upper}")
        if math.isnan(lower) or math.isnan(upper) or not math.isfinite(cost):
            raise LPError(f"column {name!r}: invalid bound or cost")
        j = len(self._col_names)
        self._col_index[name] = j
        self._col_names.append(name)
        self._col_lower.append(float(lower))
        self._col_upper.append(float(upper))
        self._col_cost.append(float(cost))
        return j

    def add_row(self, name: str, sense: str, rhs: float = 0.0, coeffs: dict | None = None) -> int:
        self._check_open()
        if name in self._row_index:
            raise LPError(f"duplicate row name {name!r}")
        if sense not in SENSES:
            raise LPError(f"row {name!r}: unknown sense {sense!r}")
        if not math.isfinite(rhs):
            raise LPError(f"row {name!r}: rhs must be finite")
        i = len(self._row_names)
        self._row_index[name] = i
        self._row_names.append(name)
        self._row_sense.append(sense)
        self._row_rhs.append(float(rhs))
        for col, val in (coeffs or {}).items():
            self.add_coeff(i, col, val)
        return i

    def _row_handle(self, row) -> int:
        if isinstance(row, (int, np.integer)):
            if not 0 <= row < len(self._row_names):
                raise LPError(f"unknown row index {row}")
            return int(row)
        try:
            return self._row_index[row]
        except KeyError:
            raise LPError(f"unknown row name {row!r}") from None

    def _col_handle(self, col) -> int:
        if isinstance(col, (int, np.integer)):
            if not 0 <= col < len(self._col_names):
                raise LPError(f"unknown column index {col}")
            return int(col)
        try:
            return self._col_index[col]
        except KeyError:
            raise LPError(f"unknown column name {col!r}") from None

    def add_coeff(self, row, col, value: float) -> None:
        self._check_open()
        if value == 0.0:
            return
        if not math.isfinite(value):
            raise LPError("coefficients must be finite")
        self._ri.append(self._row_handle(row))
        self._ci.append(self._col_handle(col))
        self._vals.append(float(value))

    def add_cost(self, col, value: float) -> None:
        self._check_open()
        j = self._col_handle(col)
        self._col_cost[j] += float(value)

    def set_rhs(self, row, rhs: float) -> None:
        self._check_open()
        self._row_rhs[self._row_handle(row)] = float(rhs)

    def set_bounds(self, col, lower: float, upper: float) -> None:
        self._check_open()
        if lower > upper:
            raise LPError("lower bound exceeds upper bound")
        j = self._col_handle(col)
        self._col_lower[j] = float(lower)
        self._col_upper[j] = float(upper)

    def finalize(self) -> "LinearProgram":
        if self._finalized:
            raise LPError("finalize called twice")
        m, n = len(self._row_names), len(self._col_names)
        A = sp.coo_matrix(
            (np.asarray(self._vals, dtype=float), (np.asarray(self._ri, dtype=np.int64), np.asarray(self._ci, dtype=np.int64))),
            shape=(m, n),
        ).tocsc()
        A.sum_duplicates()
        A.eliminate_zeros()
        A.sort_indices()
        self.A = A
        self.lower = np.asarray(self._col_lower, dtype=float)
        self.upper = np.asarray(self._col_upper, dtype=float)
        self.cost = np.asarray(self._col_cost, dtype=float)
        self.rhs = np.asarray(self._row_rhs, dtype=float)
        self.sense = np.asarray(self._row_sense, dtype=object)
        self._ri = self._ci = self._vals = []
        # empty rows whose rhs cannot be met by 0
        nnz_per_row = np.diff(A.tocsr().indptr)
        self.empty_row_conflicts = [
            self._row_names[i]
            for i in np.flatnonzero(nnz_per_row == 0)
            if not _zero_satisfies(self._row_sense[i], self._row_rhs[i])
        ]
        self._finalized = True
        return self

    # inspection ----------------------------------------------------------
    @property
    def finalized(self) -> bool:
        return self._finalized

    @property
    def n_cols(self) -> int:
        return len(self._col_names)

    @property
    def n_rows(self) -> int:
        return len(self._row_names)

    @property
    def col_names(self) -> list[str]:
        return list(self._col_names)

    @property
    def row_names(self) -> list[str]:
        return list(self._row_names)

    def col_index(self, name: str) -> int:
        return self._col_handle(name)

    def row_index(self, name: str) -> int:
        return self._row_handle(name)

    def column(self, col) -> Column:
        j = self._col_handle(col)
        return Column(self._col_names[j], self._col_lower[j] if not self._finalized else self.lower[j],
                      self._col_upper[j] if not self._finalized else self.upper[j],
                      self._col_cost[j] if not self._finalized else self.cost[j])

    def row(self, row) -> Row:
        i = self._row_handle(row)
        return Row(self._row_names[i], self._row_sense[i], self._row_rhs[i] if not self._finalized else self.rhs[i])

    def triplets(self) -> list[tuple[str, str, float]]:
        """Canonical (row name, column name, value) list; requires finalize."""
        self._require_final()
        coo = self.A.tocoo()
        order = np.lexsort((coo.row, coo.col))
        return [(self._row_names[coo.row[k]], self._col_names[coo.col[k]], float(coo.data[k])) for k in order]

    def _require_final(self) -> None:
        if not self._finalized:
            raise LPError("LP must be finalized first")

    def row_activity(self, x: np.ndarray) -> np.ndarray:
        self._require_final()
        return self.A @ x

    def objective_value(self, x: np.ndarray) -> float:
        self._require_final()
        return float(self.cost @ x + self.objective_offset)


def _zero_satisfies(sense: str, rhs: float) -> bool:
    if sense == "<=":
        return rhs >= 0
    if sense == ">=":
        return rhs <= 0
    return rhs == 0
