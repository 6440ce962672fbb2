"""Fixed-format MPS export and import.

Row and column names are replaced by short deterministic codes
(``R0000001``, ``C0000001``) so any model name fits the 8-character name
fields. The code-to-name table is written next to the MPS file as
``<path>.names.csv`` and picked up again by :func:`read_mps`.
"""
from __future__ import annotations

import csv
import math
import os
from pathlib import Path

from .model import LinearProgram, LPError

_SENSE_CODE = {"<=": "L", ">=": "G", "=": "E"}
_CODE_SENSE = {v: k for k, v in _SENSE_CODE.items()}
OBJ = "OBJ"


def _num(v: float) -> str:
    # repr round-trips exactly; may overrun the nominal 12-column field
    r = repr(float(v))
    return r[:-2] if r.endswith(".0") else r


def _line(*fields: str) -> str:
    """Lay out fields at the fixed-format columns 2, 5, 15, 25, 40, 50."""
    starts = (1, 4, 14, 24, 39, 49)
    out = ""
    for start, f in zip(starts, fields):
        if not f:
            continue
        if len(out) < start:
            out += " " * (start - len(out))
        else:
            out += " "
        out += f
    return out.rstrip()


def row_code(i: int) -> str:
    return f"R{i + 1:07d}"


def col_code(j: int) -> str:
    return f"C{j + 1:07d}"


def names_path(path) -> Path:
    return Path(str(path) + ".names.csv")


def write_mps(lp: LinearProgram, path) -> None:
    if not lp.finalized:
        raise LPError("LP must be finalized before export")
    path = Path(path)
    lines = ["NAME          MULTIVEC", "ROWS", f" N  {OBJ}"]
    for i in range(lp.n_rows):
        lines.append(_line(_SENSE_CODE[lp.sense[i]], row_code(i)))
    lines.append("COLUMNS")
    A = lp.A
    for j in range(lp.n_cols):
        entries = []
        if lp.cost[j] != 0.0:
            entries.append((OBJ, lp.cost[j]))
        for k in range(A.indptr[j], A.indptr[j + 1]):
            entries.append((row_code(int(A.indices[k])), A.data[k]))
        if not entries:
            entries.append((OBJ, 0.0))
        for k in range(0, len(entries), 2):
            pair = entries[k:k + 2]
            fields = ["", col_code(j), pair[0][0], _num(pair[0][1])]
            if len(pair) == 2:
                fields += [pair[1][0], _num(pair[1][1])]
            lines.append(_line(*fields))
    lines.append("RHS")
    rhs_entries = []
    if lp.objective_offset != 0.0:
        rhs_entries.append((OBJ, -lp.objective_offset))
    rhs_entries += [(row_code(i), lp.rhs[i]) for i in range(lp.n_rows) if lp.rhs[i] != 0.0]
    for k in range(0, len(rhs_entries), 2):
        pair = rhs_entries[k:k + 2]
        fields = ["", "RHS", pair[0][0], _num(pair[0][1])]
        if len(pair) == 2:
            fields += [pair[1][0], _num(pair[1][1])]
        lines.append(_line(*fields))
    lines.append("BOUNDS")
    for j in range(lp.n_cols):
        lo, hi, c = lp.lower[j], lp.upper[j], col_code(j)
        if lo == 0.0 and hi == math.inf:
            continue
        if lo == hi:
            lines.append(_line("FX", "BND", c, _num(lo)))
            continue
        if lo == -math.inf and hi == math.inf:
            lines.append(_line("FR", "BND", c))
            continue
        if lo == -math.inf:
            lines.append(_line("MI", "BND", c))
        elif lo != 0.0:
            lines.append(_line("LO", "BND", c, _num(lo)))
        if hi != math.inf:
            lines.append(_line("UP", "BND", c, _num(hi)))
    lines.append("ENDATA")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    with open(names_path(path), "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["kind", "code", "name"])
        for i, name in enumerate(lp.row_names):
            w.writerow(["row", row_code(i), name])
        for j, name in enumerate(lp.col_names):
            w.writerow(["col", col_code(j), name])


def _load_names(path: Path) -> dict[str, str]:
    table = names_path(path)
    if not table.exists():
        return {}
    with open(table, newline="", encoding="utf-8") as fh:
        return {r["code"]: r["name"] for r in csv.DictReader(fh)}


def read_mps(path) -> LinearProgram:
    """Parse an MPS file (whitespace-separated fields) into a finalized LP."""
    path = Path(path)
    names = _load_names(path)
    lp = LinearProgram(os.path.basename(path))
    section = None
    obj_name = None
    rows: dict[str, int] = {}
    cols: dict[str, int] = {}
    pending_bounds: dict[int, list[float]] = {}
    with open(path, encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, 1):
            if not raw.strip() or raw.startswith("*"):
                continue
            tok = raw.split()
            if not raw[0].isspace():
                section = tok[0].upper()
                if section == "ENDATA":
                    break
                continue
            try:
                if section == "ROWS":
                    code, rname = tok[0].upper(), tok[1]
                    if code == "N":
                        if obj_name is None:
                            obj_name = rname
                        continue
                    rows[rname] = lp.add_row(names.get(rname, rname), _CODE_SENSE[code], 0.0)
                elif section == "COLUMNS":
                    if "MARKER" in tok[1:2] or "'MARKER'" in tok:
                        raise LPError("integer markers are not supported")
                    cname = tok[0]
                    if cname not in cols:
                        cols[cname] = lp.add_column(names.get(cname, cname))
                    j = cols[cname]
                    for rname, val in zip(tok[1::2], tok[2::2]):
                        v = float(val)
                        if rname == obj_name:
                            lp.add_cost(j, v)
                        else:
                            lp.add_coeff(rows[rname], j, v)
                elif section == "RHS":
                    pairs = tok[1:] if len(tok) % 2 == 1 else tok
                    for rname, val in zip(pairs[0::2], pairs[1::2]):
                        if rname == obj_name:
                            lp.objective_offset = -float(val)
                        else:
                            lp.set_rhs(rows[rname], float(val))
                elif section == "BOUNDS":
                    kind, cname = tok[0].upper(), tok[2]
                    val = float(tok[3]) if len(tok) > 3 else 0.0
                    b = pending_bounds.setdefault(cols[cname], [0.0, math.inf])
                    if kind == "UP":
                        b[1] = val
                    elif kind == "LO":
                        b[0] = val
                    elif kind == "FX":
                        b[0] = b[1] = val
                    elif kind == "FR":
                        b[0], b[1] = -math.inf, math.inf
                    elif kind == "MI":
                        b[0] = -math.inf
                    elif kind == "PL":
                        b[1] = math.inf
                    else:
                        raise LPError(f"unsupported bound type {kind}")
                elif section in ("NAME", "OBJSENSE", "RANGES"):
                    if section == "RANGES":
                        raise LPError("RANGES section is not supported")
                else:
                    raise LPError(f"unexpected section {section!r}")
            except (KeyError, IndexError, ValueError) as exc:
                raise LPError(f"{path}:{lineno}: malformed MPS record ({exc})") from None
    for j, (lo, hi) in pending_bounds.items():
        lp.set_bounds(j, lo, hi)
    return lp.finalize()
