"""CSV ingestion and export of :class:`~multivec.system.EnergySystem`.

Every table has a fixed column set: unknown columns are rejected and a
missing required column is reported with the file name. Number parsing
errors carry ``file:line``. Time series use 0-based step indices ``t``.
"""
from __future__ import annotations

import csv
import math
import re
from collections import defaultdict
from pathlib import Path

import numpy as np

from . import system as sm
from .units import GJ_PER_MMBTU, GJ_PER_MWH, H2_LHV_GJ_PER_T, HOURS_PER_YEAR


class InputError(ValueError):
    """Malformed or inconsistent input file."""


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


class Table:
    """Rows of one CSV file with typed accessors that report file:line."""

    def __init__(self, path: Path, rows: list[tuple[int, dict[str, str]]], columns: list[str]):
        self.path = path
        self.rows = rows
        self.columns = columns

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)

    def where(self, line: int) -> str:
        return f"{self.path.name}:{line}"

    def text(self, line: int, row: dict, col: str, default: str | None = None) -> str:
        val = (row.get(col) or "").strip()
        if not val:
            if default is None:
                raise InputError(f"{self.where(line)}: column {col!r} is empty")
            return default
        return val

    def num(self, line: int, row: dict, col: str, default: float | None = None) -> float:
        raw = (row.get(col) or "").strip()
        if not raw:
            if default is None:
                raise InputError(f"{self.where(line)}: column {col!r} is empty")
            return default
        try:
            return float(raw)
        except ValueError:
            raise InputError(f"{self.where(line)}: column {col!r}: {raw!r} is not a number") from None

    def flag(self, line: int, row: dict, col: str, default: bool) -> bool:
        raw = (row.get(col) or "").strip().lower()
        if not raw:
            return default
        if raw in _TRUE:
            return True
        if raw in _FALSE:
            return False
        raise InputError(f"{self.where(line)}: column {col!r}: {raw!r} is not a boolean")


def read_table(path, required, optional=(), pattern: str | None = None) -> Table:
    """Read ``path`` enforcing its column set.

    ``pattern`` is a regular expression for additional accepted column
    names (used for per-fuel yield columns).
    """
    path = Path(path)
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    with fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise InputError(f"{path.name}: missing header row") from None
        known = set(required) | set(optional)
        rx = re.compile(pattern) if pattern else None
        for col in header:
            if col not in known and not (rx and rx.fullmatch(col)):
                raise InputError(f"{path.name}: unknown column {col!r}")
        if len(set(header)) != len(header):
            raise InputError(f"{path.name}: duplicate column in header")
        for col in required:
            if col not in header:
                raise InputError(f"{path.name}: missing required column {col!r}")
        rows = []
        for lineno, rec in enumerate(reader, 2):
            if not rec or all(not c.strip() for c in rec):
                continue
            if len(rec) != len(header):
                raise InputError(f"{path.name}:{lineno}: expected {len(header)} fields, got {len(rec)}")
            rows.append((lineno, dict(zip(header, rec))))
    return Table(path, rows, header)


def _series(table: Table, key_cols: tuple[str, ...], value_col: str, n_steps: int | None = None) -> dict:
    """Collect ``key -> array over t`` and check every step appears once."""
    values: dict[tuple, dict[int, float]] = defaultdict(dict)
    for line, row in table:
        key = tuple(table.text(line, row, c) for c in key_cols)
        t = table.num(line, row, "t")
        if t != int(t) or t < 0:
            raise InputError(f"{table.where(line)}: step index t must be a nonnegative integer")
        t = int(t)
        if t in values[key]:
            raise InputError(f"{table.where(line)}: duplicate entry for {key} at t={t}")
        values[key][t] = table.num(line, row, value_col)
    out = {}
    for key, by_t in values.items():
        n = n_steps if n_steps is not None else max(by_t) + 1
        missing = [t for t in range(n) if t not in by_t]
        if missing or len(by_t) != n:
            raise InputError(
                f"{table.path.name}: series {key} must cover t = 0..{n - 1} exactly once"
                + (f" (missing t={missing[0]})" if missing else "")
            )
        out[key if len(key) > 1 else key[0]] = np.array([by_t[t] for t in range(n)])
    return out


def _opt(path: Path) -> bool:
    return path.exists()


def load_policy(path) -> tuple[sm.PolicyConfig, float | None]:
    """Parse ``key = value`` lines; returns the policy and an optional discount rate."""
    path = Path(path)
    keys = {"emissions_cap_t", "mandate_fuel", "mandate_zeta", "co2_storage_enabled", "discount_rate"}
    vals: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InputError(f"{path.name}:{lineno}: expected 'key = value'")
            k, v = (s.strip() for s in line.split("=", 1))
            if k not in keys:
                raise InputError(f"{path.name}:{lineno}: unknown policy key {k!r}")
            vals[k] = v
    try:
        cap = float(vals.get("emissions_cap_t", "inf"))
        fuels = [f.strip() for f in vals.get("mandate_fuel", "").split(",") if f.strip()]
        zetas = [float(z) for z in vals.get("mandate_zeta", "").split(",") if z.strip()]
        rate = float(vals["discount_rate"]) if "discount_rate" in vals else None
    except ValueError as exc:
        raise InputError(f"{path.name}: {exc}") from None
    if len(fuels) != len(zetas):
        raise InputError(f"{path.name}: mandate_fuel and mandate_zeta must list the same number of entries")
    storage = vals.get("co2_storage_enabled", "true").lower()
    if storage not in _TRUE | _FALSE:
        raise InputError(f"{path.name}: co2_storage_enabled must be a boolean")
    return sm.PolicyConfig(cap, tuple(zip(fuels, zetas)), storage in _TRUE), rate


def write_policy(system: sm.EnergySystem, path) -> None:
    pol = system.policy
    lines = [
        f"emissions_cap_t = {_fmt(pol.emissions_cap)}",
        f"co2_storage_enabled = {'true' if pol.co2_storage_enabled else 'false'}",
        f"discount_rate = {_fmt(system.discount_rate)}",
    ]
    if pol.mandates:
        lines.append("mandate_fuel = " + ",".join(f for f, _ in pol.mandates))
        lines.append("mandate_zeta = " + ",".join(_fmt(z) for _, z in pol.mandates))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


SYNFUEL_REQUIRED = ("tech_id", "zone", "capex", "fom", "vom", "mu_emit", "mu_capture")
SYNFUEL_OPTIONAL = (
    "option_label", "h2_in_gj_per_t", "elec_in_gj_per_t", "h2_in_t_per_t", "elec_in_mwh_per_t",
    "lifetime_y", "cap_min_tph", "cap_max_tph", "fuel_cost",
)
_YIELD_RX = r"yield_([a-z0-9]+(?:_[a-z0-9]+)*?)_(gj|mmbtu|mwh)_per_t"
_YIELD_TO_MWH = {"gj": 1.0 / GJ_PER_MWH, "mmbtu": GJ_PER_MMBTU / GJ_PER_MWH, "mwh": 1.0}
# relative disagreement tolerated between alternative unit columns of the same quantity
UNIT_AGREEMENT = 0.02


def _agree(tab: Table, line: int, what: str, values: list[float]) -> float:
    first = values[0]
    for other in values[1:]:
        scale = max(abs(first), abs(other))
        if scale > 0 and abs(first - other) > UNIT_AGREEMENT * scale:
            raise InputError(
                f"{tab.where(line)}: {what} given in two unit sets that disagree by more than "
                f"{UNIT_AGREEMENT:.0%} ({first:g} vs {other:g})"
            )
    return first


def load_synfuel(path) -> tuple[sm.SynfuelTechnology, ...]:
    tab = read_table(path, SYNFUEL_REQUIRED, SYNFUEL_OPTIONAL, pattern=_YIELD_RX)
    yield_cols = []
    for col in tab.columns:
        m = re.fullmatch(_YIELD_RX, col)
        if m:
            yield_cols.append((col, m.group(1), m.group(2)))
    out = []
    for line, row in tab:
        h2 = []
        if (row.get("h2_in_gj_per_t") or "").strip():
            h2.append(tab.num(line, row, "h2_in_gj_per_t") / H2_LHV_GJ_PER_T)
        if (row.get("h2_in_t_per_t") or "").strip():
            h2.append(tab.num(line, row, "h2_in_t_per_t"))
        elec = []
        if (row.get("elec_in_gj_per_t") or "").strip():
            elec.append(tab.num(line, row, "elec_in_gj_per_t") / GJ_PER_MWH)
        if (row.get("elec_in_mwh_per_t") or "").strip():
            elec.append(tab.num(line, row, "elec_in_mwh_per_t"))
        if not h2:
            raise InputError(f"{tab.where(line)}: hydrogen input missing (h2_in_gj_per_t or h2_in_t_per_t)")
        if not elec:
            raise InputError(f"{tab.where(line)}: electricity input missing (elec_in_gj_per_t or elec_in_mwh_per_t)")
        by_fuel: dict[str, list[float]] = defaultdict(list)
        for col, fuel, unit in yield_cols:
            if (row.get(col) or "").strip():
                by_fuel[fuel].append(tab.num(line, row, col) * _YIELD_TO_MWH[unit])
        yields = {f: _agree(tab, line, f"yield of {f}", v) for f, v in by_fuel.items()}
        out.append(sm.SynfuelTechnology(
            id=tab.text(line, row, "tech_id"),
            zone=tab.text(line, row, "zone"),
            option_label=tab.text(line, row, "option_label", ""),
            capex=tab.num(line, row, "capex"),
            fom=tab.num(line, row, "fom"),
            vom=tab.num(line, row, "vom"),
            mu_emit=tab.num(line, row, "mu_emit"),
            mu_capture=tab.num(line, row, "mu_capture"),
            h2_in=_agree(tab, line, "hydrogen input", h2),
            elec_in=_agree(tab, line, "electricity input", elec),
            yields=yields,
            lifetime=tab.num(line, row, "lifetime_y", 40.0),
            cap_min=tab.num(line, row, "cap_min_tph", 0.0),
            cap_max=tab.num(line, row, "cap_max_tph", math.inf),
            fuel_cost=tab.num(line, row, "fuel_cost", 0.0),
        ))
    return tuple(out)


def _load_grid(root: Path, n_steps: int) -> sm.TimeGrid:
    path = root / "periods.csv"
    if _opt(path):
        tab = read_table(path, ("period", "hours", "weight"))
        periods = []
        for line, row in tab:
            hours = tab.num(line, row, "hours")
            if hours != int(hours) or hours < 1:
                raise InputError(f"{tab.where(line)}: hours must be a positive integer")
            periods.append(sm.Period(int(hours), tab.num(line, row, "weight")))
        return sm.TimeGrid(tuple(periods))
    if n_steps % 24 == 0:
        return sm.TimeGrid.uniform(n_steps, 24)
    return sm.TimeGrid((sm.Period(n_steps, HOURS_PER_YEAR / n_steps),))


def load_system(path) -> sm.EnergySystem:
    """Load an energy system from a directory of CSV files."""
    root = Path(path)
    if not root.is_dir():
        raise InputError(f"system directory {root} does not exist")

    ztab = read_table(root / "zones.csv", ("id",), ("name", "co2_injection_limit_t_per_y"))
    zones = tuple(
        sm.Zone(ztab.text(line, r, "id"), ztab.text(line, r, "name", ""),
                ztab.num(line, r, "co2_injection_limit_t_per_y", 0.0))
        for line, r in ztab
    )

    ftab = read_table(root / "fuels.csv", ("name", "price_eur_per_mwh"), ("carbon_intensity_t_per_mwh", "role"))
    fuels = {}
    for line, r in ftab:
        name = ftab.text(line, r, "name")
        if name in fuels:
            raise InputError(f"{ftab.where(line)}: duplicate fuel {name!r}")
        fuels[name] = sm.FuelSpec(name, ftab.num(line, r, "price_eur_per_mwh"),
                                  ftab.num(line, r, "carbon_intensity_t_per_mwh", 0.0),
                                  ftab.text(line, r, "role", "commodity"))

    etab = read_table(root / "demand_elec.csv", ("zone", "t", "mwh"))
    demand_elec = _series(etab, ("zone",), "mwh")
    lengths = {len(v) for v in demand_elec.values()}
    if len(lengths) > 1:
        raise InputError("demand_elec.csv: zones have different series lengths")
    n_steps = lengths.pop() if lengths else 0
    grid = _load_grid(root, n_steps)
    n = grid.n_steps

    demand_h2 = {}
    if _opt(root / "demand_h2.csv"):
        demand_h2 = _series(read_table(root / "demand_h2.csv", ("zone", "t", "tonne")), ("zone",), "tonne", n)
    demand_fuels = {}
    if _opt(root / "demand_fuels.csv"):
        demand_fuels = _series(read_table(root / "demand_fuels.csv", ("zone", "t", "fuel", "mwh")),
                               ("zone", "fuel"), "mwh", n)

    thermal = ()
    if _opt(root / "thermal.csv"):
        tab = read_table(root / "thermal.csv", ("id", "zone", "fuel", "capex", "fom", "vom", "heat_rate"),
                         ("capture_rate", "lifetime", "existing_capacity", "max_capacity"))
        thermal = tuple(sm.ThermalGenerator(
            id=tab.text(ln, r, "id"), zone=tab.text(ln, r, "zone"), fuel=tab.text(ln, r, "fuel"),
            capex=tab.num(ln, r, "capex"), fom=tab.num(ln, r, "fom"), vom=tab.num(ln, r, "vom"),
            heat_rate=tab.num(ln, r, "heat_rate"), capture_rate=tab.num(ln, r, "capture_rate", 0.0),
            lifetime=tab.num(ln, r, "lifetime", 30.0), existing_capacity=tab.num(ln, r, "existing_capacity", 0.0),
            max_capacity=tab.num(ln, r, "max_capacity", math.inf),
        ) for ln, r in tab)

    vre = ()
    if _opt(root / "vre.csv"):
        tab = read_table(root / "vre.csv", ("id", "zone", "capex", "fom"),
                         ("vom", "lifetime", "existing_capacity", "max_capacity"))
        profiles = _series(read_table(root / "vre_profiles.csv", ("tech_id", "t", "cf")), ("tech_id",), "cf", n)
        vre_list = []
        for ln, r in tab:
            tid = tab.text(ln, r, "id")
            if tid not in profiles:
                raise InputError(f"{tab.where(ln)}: no capacity-factor profile for {tid!r} in vre_profiles.csv")
            vre_list.append(sm.VreGenerator(
                id=tid, zone=tab.text(ln, r, "zone"), capex=tab.num(ln, r, "capex"), fom=tab.num(ln, r, "fom"),
                profile=profiles[tid], max_capacity=tab.num(ln, r, "max_capacity", math.inf),
                existing_capacity=tab.num(ln, r, "existing_capacity", 0.0),
                lifetime=tab.num(ln, r, "lifetime", 30.0), vom=tab.num(ln, r, "vom", 0.0),
            ))
        unknown = sorted(set(profiles) - {g.id for g in vre_list})
        if unknown:
            raise InputError(f"vre_profiles.csv: profile for unknown VRE technology {unknown[0]!r}")
        vre = tuple(vre_list)

    hydro = ()
    if _opt(root / "hydro.csv"):
        tab = read_table(root / "hydro.csv", ("id", "zone", "capacity"), ("fom",))
        inflows = {}
        if _opt(root / "hydro_inflows.csv"):
            inflows = _series(read_table(root / "hydro_inflows.csv", ("tech_id", "t", "mwh")), ("tech_id",), "mwh", n)
        hydro = tuple(sm.HydroGenerator(
            tab.text(ln, r, "id"), tab.text(ln, r, "zone"), tab.num(ln, r, "capacity"),
            inflows.get(tab.text(ln, r, "id")), tab.num(ln, r, "fom", 0.0),
        ) for ln, r in tab)

    storage = ()
    if _opt(root / "storage.csv"):
        tab = read_table(root / "storage.csv", ("id", "zone", "power_capex", "energy_capex", "fom",
                                                "round_trip_efficiency"), ("lifetime", "max_power"))
        storage = tuple(sm.ElectricStorage(
            tab.text(ln, r, "id"), tab.text(ln, r, "zone"), tab.num(ln, r, "power_capex"),
            tab.num(ln, r, "energy_capex"), tab.num(ln, r, "fom"), tab.num(ln, r, "round_trip_efficiency"),
            tab.num(ln, r, "lifetime", 30.0), tab.num(ln, r, "max_power", math.inf),
        ) for ln, r in tab)

    lines = ()
    if _opt(root / "lines.csv"):
        tab = read_table(root / "lines.csv", ("id", "zone_from", "zone_to", "existing_capacity", "capex"),
                         ("expansion_limit_multiple", "new_line_cap", "lifetime"))
        lines = tuple(sm.TransmissionLine(
            tab.text(ln, r, "id"), tab.text(ln, r, "zone_from"), tab.text(ln, r, "zone_to"),
            tab.num(ln, r, "existing_capacity"), tab.num(ln, r, "capex"),
            tab.num(ln, r, "expansion_limit_multiple", 4.0), tab.num(ln, r, "new_line_cap", 5000.0),
            tab.num(ln, r, "lifetime", 40.0),
        ) for ln, r in tab)

    h2_techs = ()
    if _opt(root / "h2_tech.csv"):
        tab = read_table(root / "h2_tech.csv", ("id", "zone", "capex", "fom", "vom", "electricity_input"),
                         ("gas_input", "capture_rate", "lifetime", "max_capacity", "gas_fuel"))
        h2_techs = tuple(sm.H2Technology(
            tab.text(ln, r, "id"), tab.text(ln, r, "zone"), tab.num(ln, r, "capex"), tab.num(ln, r, "fom"),
            tab.num(ln, r, "vom"), tab.num(ln, r, "electricity_input"), tab.num(ln, r, "gas_input", 0.0),
            tab.num(ln, r, "capture_rate", 0.0), tab.num(ln, r, "lifetime", 25.0),
            tab.num(ln, r, "max_capacity", math.inf), tab.text(ln, r, "gas_fuel", sm.NATURAL_GAS),
        ) for ln, r in tab)

    h2_storage = ()
    if _opt(root / "h2_storage.csv"):
        tab = read_table(root / "h2_storage.csv", ("id", "zone", "charge_capex", "energy_capex", "fom"),
                         ("efficiency", "lifetime"))
        h2_storage = tuple(sm.H2Storage(
            tab.text(ln, r, "id"), tab.text(ln, r, "zone"), tab.num(ln, r, "charge_capex"),
            tab.num(ln, r, "energy_capex"), tab.num(ln, r, "fom"), tab.num(ln, r, "efficiency", 1.0),
            tab.num(ln, r, "lifetime", 30.0),
        ) for ln, r in tab)

    def pipelines(fname: str) -> tuple[sm.Pipeline, ...]:
        if not _opt(root / fname):
            return ()
        tab = read_table(root / fname, ("id", "zone_from", "zone_to"),
                         ("capex", "fom", "distance_km", "lifetime", "max_capacity"))
        return tuple(sm.Pipeline(
            tab.text(ln, r, "id"), tab.text(ln, r, "zone_from"), tab.text(ln, r, "zone_to"),
            tab.num(ln, r, "capex", 0.0), tab.num(ln, r, "fom", 0.0),
            tab.num(ln, r, "distance_km") if (r.get("distance_km") or "").strip() else None,
            tab.num(ln, r, "lifetime", 40.0), tab.num(ln, r, "max_capacity", math.inf),
        ) for ln, r in tab)

    dac = ()
    if _opt(root / "dac.csv"):
        tab = read_table(root / "dac.csv", ("id", "zone", "capex", "fom", "vom", "gas_input", "electricity_input"),
                         ("combustion_capture_rate", "lifetime", "max_capacity", "gas_fuel"))
        dac = tuple(sm.DacTechnology(
            tab.text(ln, r, "id"), tab.text(ln, r, "zone"), tab.num(ln, r, "capex"), tab.num(ln, r, "fom"),
            tab.num(ln, r, "vom"), tab.num(ln, r, "gas_input"), tab.num(ln, r, "electricity_input"),
            tab.num(ln, r, "combustion_capture_rate", 0.0), tab.num(ln, r, "lifetime", 30.0),
            tab.num(ln, r, "max_capacity", math.inf), tab.text(ln, r, "gas_fuel", sm.NATURAL_GAS),
        ) for ln, r in tab)

    co2_costs = ()
    if _opt(root / "co2_storage.csv"):
        tab = read_table(root / "co2_storage.csv", ("zone",), ("capex", "fom", "electricity_input", "lifetime"))
        co2_costs = tuple(sm.Co2StorageCost(
            tab.text(ln, r, "zone"), tab.num(ln, r, "capex", 0.0), tab.num(ln, r, "fom", 0.0),
            tab.num(ln, r, "electricity_input", 0.0), tab.num(ln, r, "lifetime", 30.0),
        ) for ln, r in tab)

    synfuel = load_synfuel(root / "synfuel.csv") if _opt(root / "synfuel.csv") else ()

    classes = {}
    if _opt(root / "tech_classes.csv"):
        tab = read_table(root / "tech_classes.csv", ("tech_id", "class"))
        classes = {tab.text(ln, r, "tech_id"): tab.text(ln, r, "class") for ln, r in tab}

    policy, rate = sm.PolicyConfig(), None
    if _opt(root / "policy.txt"):
        policy, rate = load_policy(root / "policy.txt")

    return sm.EnergySystem(
        zones=zones, grid=grid, fuels=fuels, thermal=thermal, vre=vre, hydro=hydro, storage=storage,
        lines=lines, h2_techs=h2_techs, h2_storage=h2_storage, h2_pipelines=pipelines("h2_pipelines.csv"),
        co2_pipelines=pipelines("co2_pipelines.csv"), dac=dac, co2_storage_costs=co2_costs, synfuel=synfuel,
        demand_elec=demand_elec, demand_h2=demand_h2, demand_fuels=demand_fuels, policy=policy,
        discount_rate=0.045 if rate is None else rate, tech_classes=classes,
    )


# ---------------------------------------------------------------------------
# export

def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def _write(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(v) for v in r])


def _series_rows(series: dict, n: int):
    for key, arr in series.items():
        key = key if isinstance(key, tuple) else (key,)
        for t in range(n):
            yield (*key[:1], t, *key[1:], arr[t])


def write_system(system: sm.EnergySystem, path) -> None:
    """Write ``system`` as a directory readable by :func:`load_system`."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    n = system.grid.n_steps
    _write(root / "zones.csv", ["id", "name", "co2_injection_limit_t_per_y"],
           [(z.id, z.name, z.co2_injection_limit) for z in system.zones])
    _write(root / "fuels.csv", ["name", "price_eur_per_mwh", "carbon_intensity_t_per_mwh", "role"],
           [(f.name, f.price, f.carbon_intensity, f.role) for f in system.fuels.values()])
    _write(root / "periods.csv", ["period", "hours", "weight"],
           [(str(i), str(p.hours), p.weight) for i, p in enumerate(system.grid.periods)])
    _write(root / "demand_elec.csv", ["zone", "t", "mwh"], _series_rows(system.demand_elec, n))
    if system.demand_h2:
        _write(root / "demand_h2.csv", ["zone", "t", "tonne"], _series_rows(system.demand_h2, n))
    if system.demand_fuels:
        _write(root / "demand_fuels.csv", ["zone", "t", "fuel", "mwh"], _series_rows(system.demand_fuels, n))
    if system.thermal:
        _write(root / "thermal.csv", ["id", "zone", "fuel", "capex", "fom", "vom", "heat_rate", "capture_rate",
                                      "lifetime", "existing_capacity", "max_capacity"],
               [(g.id, g.zone, g.fuel, g.capex, g.fom, g.vom, g.heat_rate, g.capture_rate, g.lifetime,
                 g.existing_capacity, g.max_capacity) for g in system.thermal])
    if system.vre:
        _write(root / "vre.csv", ["id", "zone", "capex", "fom", "vom", "lifetime", "existing_capacity", "max_capacity"],
               [(g.id, g.zone, g.capex, g.fom, g.vom, g.lifetime, g.existing_capacity, g.max_capacity)
                for g in system.vre])
        _write(root / "vre_profiles.csv", ["tech_id", "t", "cf"],
               _series_rows({g.id: g.profile for g in system.vre}, n))
    if system.hydro:
        _write(root / "hydro.csv", ["id", "zone", "capacity", "fom"],
               [(h.id, h.zone, h.capacity, h.fom) for h in system.hydro])
        inflows = {h.id: h.inflow for h in system.hydro if h.inflow is not None}
        if inflows:
            _write(root / "hydro_inflows.csv", ["tech_id", "t", "mwh"], _series_rows(inflows, n))
    if system.storage:
        _write(root / "storage.csv", ["id", "zone", "power_capex", "energy_capex", "fom", "round_trip_efficiency",
                                      "lifetime", "max_power"],
               [(s.id, s.zone, s.power_capex, s.energy_capex, s.fom, s.round_trip_efficiency, s.lifetime,
                 s.max_power) for s in system.storage])
    if system.lines:
        _write(root / "lines.csv", ["id", "zone_from", "zone_to", "existing_capacity", "capex",
                                    "expansion_limit_multiple", "new_line_cap", "lifetime"],
               [(ln.id, ln.zone_from, ln.zone_to, ln.existing_capacity, ln.capex, ln.expansion_limit_multiple,
                 ln.new_line_cap, ln.lifetime) for ln in system.lines])
    if system.h2_techs:
        _write(root / "h2_tech.csv", ["id", "zone", "capex", "fom", "vom", "electricity_input", "gas_input",
                                      "capture_rate", "lifetime", "max_capacity", "gas_fuel"],
               [(t.id, t.zone, t.capex, t.fom, t.vom, t.electricity_input, t.gas_input, t.capture_rate,
                 t.lifetime, t.max_capacity, t.gas_fuel) for t in system.h2_techs])
    if system.h2_storage:
        _write(root / "h2_storage.csv", ["id", "zone", "charge_capex", "energy_capex", "fom", "efficiency",
                                         "lifetime"],
               [(s.id, s.zone, s.charge_capex, s.energy_capex, s.fom, s.efficiency, s.lifetime)
                for s in system.h2_storage])
    for fname, pipes in (("h2_pipelines.csv", system.h2_pipelines), ("co2_pipelines.csv", system.co2_pipelines)):
        if pipes:
            _write(root / fname, ["id", "zone_from", "zone_to", "capex", "fom", "distance_km", "lifetime",
                                  "max_capacity"],
                   [(p.id, p.zone_from, p.zone_to, p.capex, p.fom, p.distance_km, p.lifetime, p.max_capacity)
                    for p in pipes])
    if system.dac:
        _write(root / "dac.csv", ["id", "zone", "capex", "fom", "vom", "gas_input", "electricity_input",
                                  "combustion_capture_rate", "lifetime", "max_capacity", "gas_fuel"],
               [(d.id, d.zone, d.capex, d.fom, d.vom, d.gas_input, d.electricity_input, d.combustion_capture_rate,
                 d.lifetime, d.max_capacity, d.gas_fuel) for d in system.dac])
    if system.co2_storage_costs:
        _write(root / "co2_storage.csv", ["zone", "capex", "fom", "electricity_input", "lifetime"],
               [(c.zone, c.capex, c.fom, c.electricity_input, c.lifetime) for c in system.co2_storage_costs])
    if system.synfuel:
        products = sorted({f for s in system.synfuel for f in s.yields})
        header = ["tech_id", "zone", "option_label", "capex", "fom", "vom", "mu_emit", "mu_capture",
                  "h2_in_gj_per_t", "elec_in_gj_per_t"] + [f"yield_{p}_gj_per_t" for p in products] + [
                  "lifetime_y", "cap_min_tph", "cap_max_tph", "fuel_cost"]
        _write(root / "synfuel.csv", header, [
            (s.id, s.zone, s.option_label, s.capex, s.fom, s.vom, s.mu_emit, s.mu_capture,
             s.h2_in * H2_LHV_GJ_PER_T, s.elec_in * GJ_PER_MWH,
             *[s.yields[p] * GJ_PER_MWH if p in s.yields else "" for p in products],
             s.lifetime, s.cap_min, s.cap_max, s.fuel_cost)
            for s in system.synfuel
        ])
    if system.tech_classes:
        _write(root / "tech_classes.csv", ["tech_id", "class"], sorted(system.tech_classes.items()))
    write_policy(system, root / "policy.txt")
