"""Problem-instance data model.

All quantities are held in canonical units: MWh / MW for energy and power,
tonne and tonne per hour for H2 and CO2, EUR for money and hours for time.
Instances are immutable once built; use :func:`dataclasses.replace` (or the
``with_*`` helpers) to derive variants.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .units import HOURS_PER_YEAR

INF = math.inf

FUEL_ROLES = ("commodity", "liquid", "byproduct")
# fuel name used for thermal units burning hydrogen from the H2 balance
HYDROGEN = "hydrogen"
NATURAL_GAS = "natural_gas"


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Zone:
    id: str
    name: str = ""
    co2_injection_limit: float = 0.0  # t/y


@dataclass(frozen=True)
class Period:
    hours: int
    weight: float  # representation weight applied to every hour of the period


@dataclass(frozen=True)
class TimeGrid:
    periods: tuple[Period, ...]

    @classmethod
    def uniform(cls, n_steps: int, period_len: int = 24, total_hours: float = HOURS_PER_YEAR) -> "TimeGrid":
        if n_steps % period_len:
            raise ValueError(f"{n_steps} steps are not a whole number of {period_len}-hour periods")
        w = total_hours / n_steps
        return cls(tuple(Period(period_len, w) for _ in range(n_steps // period_len)))

    @property
    def n_steps(self) -> int:
        return sum(p.hours for p in self.periods)

    @property
    def weights(self) -> np.ndarray:
        return np.repeat([p.weight for p in self.periods], [p.hours for p in self.periods]).astype(float)

    @property
    def period_index(self) -> np.ndarray:
        return np.repeat(np.arange(len(self.periods)), [p.hours for p in self.periods])

    def period_slices(self) -> list[slice]:
        out, start = [], 0
        for p in self.periods:
            out.append(slice(start, start + p.hours))
            start += p.hours
        return out

    @property
    def total_hours(self) -> float:
        return float(sum(p.hours * p.weight for p in self.periods))


@dataclass(frozen=True)
class FuelSpec:
    name: str
    price: float  # EUR/MWh
    carbon_intensity: float = 0.0  # t CO2 per MWh burned
    role: str = "commodity"


@dataclass(frozen=True)
class ThermalGenerator:
    id: str
    zone: str
    fuel: str
    capex: float  # EUR/MW
    fom: float  # EUR/MW/y
    vom: float  # EUR/MWh
    heat_rate: float  # MWh fuel per MWh electricity (t H2 per MWh for hydrogen turbines)
    capture_rate: float = 0.0
    lifetime: float = 30.0
    existing_capacity: float = 0.0
    max_capacity: float = INF


@dataclass(frozen=True, eq=False)
class VreGenerator:
    id: str
    zone: str
    capex: float
    fom: float
    profile: np.ndarray  # capacity factor per step
    max_capacity: float = INF
    existing_capacity: float = 0.0
    lifetime: float = 30.0
    vom: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "profile", _frozen_array(self.profile))


@dataclass(frozen=True, eq=False)
class HydroGenerator:
    """Fixed-capacity zero-cost unit; energy-limited per period when inflows are given."""

    id: str
    zone: str
    capacity: float
    inflow: np.ndarray | None = None  # MWh per step
    fom: float = 0.0

    def __post_init__(self):
        if self.inflow is not None:
            object.__setattr__(self, "inflow", _frozen_array(self.inflow))


@dataclass(frozen=True)
class ElectricStorage:
    id: str
    zone: str
    power_capex: float  # EUR/MW
    energy_capex: float  # EUR/MWh
    fom: float  # EUR/MW/y
    round_trip_efficiency: float
    lifetime: float = 30.0
    max_power: float = INF


@dataclass(frozen=True)
class TransmissionLine:
    id: str
    zone_from: str
    zone_to: str
    existing_capacity: float
    capex: float  # EUR/MW
    expansion_limit_multiple: float = 4.0
    new_line_cap: float = 5000.0
    lifetime: float = 40.0

    @property
    def max_capacity(self) -> float:
        if self.existing_capacity > 0:
            return self.existing_capacity * self.expansion_limit_multiple
        return self.new_line_cap


@dataclass(frozen=True)
class H2Technology:
    id: str
    zone: str
    capex: float  # EUR/(t/h)
    fom: float  # EUR/(t/h)/y
    vom: float  # EUR/t
    electricity_input: float  # MWh/t
    gas_input: float = 0.0  # MWh fuel per t
    capture_rate: float = 0.0
    lifetime: float = 25.0
    max_capacity: float = INF
    gas_fuel: str = NATURAL_GAS


@dataclass(frozen=True)
class H2Storage:
    id: str
    zone: str
    charge_capex: float  # EUR/(t/h)
    energy_capex: float  # EUR/t
    fom: float  # EUR/t/y of energy capacity
    efficiency: float = 1.0
    lifetime: float = 30.0


@dataclass(frozen=True)
class Pipeline:
    """H2 or CO2 pipeline candidate between two zones, capacity in t/h."""

    id: str
    zone_from: str
    zone_to: str
    capex: float = 0.0  # EUR/(t/h), per km when distance_km is set
    fom: float = 0.0  # EUR/(t/h)/y
    distance_km: float | None = None
    lifetime: float = 40.0
    max_capacity: float = INF

    @property
    def capex_per_unit(self) -> float:
        return self.capex * (self.distance_km if self.distance_km is not None else 1.0)


@dataclass(frozen=True)
class DacTechnology:
    id: str
    zone: str
    capex: float  # EUR/(t/h)
    fom: float  # EUR/(t/h)/y
    vom: float  # EUR/t
    gas_input: float  # MWh fuel per t captured
    electricity_input: float  # MWh per t, negative means net export
    combustion_capture_rate: float = 0.0
    lifetime: float = 30.0
    max_capacity: float = INF
    gas_fuel: str = NATURAL_GAS


@dataclass(frozen=True)
class Co2StorageCost:
    zone: str
    capex: float = 0.0  # EUR per (t/y) of injection capacity
    fom: float = 0.0  # EUR per (t/y) per year
    electricity_input: float = 0.0  # MWh per t injected
    lifetime: float = 30.0


@dataclass(frozen=True)
class SynfuelTechnology:
    """Synthetic fuel plant parameterized per tonne of CO2 feed."""

    id: str
    zone: str
    capex: float  # EUR/(t CO2/h)
    fom: float  # EUR/(t CO2/h)/y
    vom: float  # EUR/t CO2
    mu_emit: float
    mu_capture: float
    h2_in: float  # t H2 per t CO2
    elec_in: float  # MWh per t CO2
    yields: Mapping[str, float]  # MWh of product per t CO2, liquids and byproducts alike
    option_label: str = ""
    lifetime: float = 40.0
    cap_min: float = 0.0
    cap_max: float = INF
    fuel_cost: float = 0.0  # EUR/t CO2

    def __post_init__(self):
        object.__setattr__(self, "yields", dict(sorted(self.yields.items())))

    def __hash__(self):
        return hash(self.id)


@dataclass(frozen=True)
class PolicyConfig:
    emissions_cap: float = INF  # t CO2/y
    mandates: tuple[tuple[str, float], ...] = ()
    co2_storage_enabled: bool = True

    @property
    def synfuel_mandate(self) -> tuple[str, float] | None:
        return self.mandates[0] if self.mandates else None


def _freeze_series(series: Mapping) -> dict:
    return {k: _frozen_array(v) for k, v in sorted(series.items())}


@dataclass(frozen=True, eq=False)
class EnergySystem:
    zones: tuple[Zone, ...]
    grid: TimeGrid
    fuels: Mapping[str, FuelSpec]
    thermal: tuple[ThermalGenerator, ...] = ()
    vre: tuple[VreGenerator, ...] = ()
    hydro: tuple[HydroGenerator, ...] = ()
    storage: tuple[ElectricStorage, ...] = ()
    lines: tuple[TransmissionLine, ...] = ()
    h2_techs: tuple[H2Technology, ...] = ()
    h2_storage: tuple[H2Storage, ...] = ()
    h2_pipelines: tuple[Pipeline, ...] = ()
    co2_pipelines: tuple[Pipeline, ...] = ()
    dac: tuple[DacTechnology, ...] = ()
    co2_storage_costs: tuple[Co2StorageCost, ...] = ()
    synfuel: tuple[SynfuelTechnology, ...] = ()
    demand_elec: Mapping[str, np.ndarray] = field(default_factory=dict)  # zone -> MWh per step
    demand_h2: Mapping[str, np.ndarray] = field(default_factory=dict)  # zone -> t per step
    demand_fuels: Mapping[tuple[str, str], np.ndarray] = field(default_factory=dict)  # (zone, fuel) -> MWh
    policy: PolicyConfig = PolicyConfig()
    discount_rate: float = 0.045
    tech_classes: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for name in ("thermal", "vre", "hydro", "storage", "lines", "h2_techs", "h2_storage",
                     "h2_pipelines", "co2_pipelines", "dac", "co2_storage_costs", "synfuel", "zones"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        object.__setattr__(self, "fuels", dict(sorted(self.fuels.items())))
        object.__setattr__(self, "tech_classes", dict(sorted(self.tech_classes.items())))
        for name in ("demand_elec", "demand_h2", "demand_fuels"):
            object.__setattr__(self, name, _freeze_series(getattr(self, name)))

    @property
    def zone_ids(self) -> list[str]:
        return [z.id for z in self.zones]

    def zone(self, zone_id: str) -> Zone:
        for z in self.zones:
            if z.id == zone_id:
                return z
        raise KeyError(zone_id)

    def liquid_fuels(self) -> list[str]:
        return [f.name for f in self.fuels.values() if f.role == "liquid"]

    def byproducts(self) -> list[str]:
        return [f.name for f in self.fuels.values() if f.role == "byproduct"]

    def co2_storage_cost(self, zone_id: str) -> Co2StorageCost:
        for c in self.co2_storage_costs:
            if c.zone == zone_id:
                return c
        return Co2StorageCost(zone_id)

    def replace(self, **changes) -> "EnergySystem":
        return dataclasses.replace(self, **changes)

    def with_policy(self, **changes) -> "EnergySystem":
        return self.replace(policy=dataclasses.replace(self.policy, **changes))

    def with_fuel_price(self, fuel: str, multiplier: float) -> "EnergySystem":
        fuels = dict(self.fuels)
        fuels[fuel] = dataclasses.replace(fuels[fuel], price=fuels[fuel].price * multiplier)
        return self.replace(fuels=fuels)

    def all_technology_ids(self) -> list[str]:
        groups = (self.thermal, self.vre, self.hydro, self.storage, self.lines, self.h2_techs,
                  self.h2_storage, self.h2_pipelines, self.co2_pipelines, self.dac, self.synfuel)
        return [t.id for g in groups for t in g]


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __len__(self) -> int:
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)


def _check_fraction(report: list[str], what: str, value: float, lo_open: bool = False) -> None:
    bad = value <= 0 if lo_open else value < 0
    if bad or value > 1 or math.isnan(value):
        bracket = "(0, 1]" if lo_open else "[0, 1]"
        report.append(f"range: {what} = {value} outside {bracket}")


def validate(system: EnergySystem) -> ValidationReport:
    """Collect every structural problem in ``system`` without raising."""
    v: list[str] = []
    zone_ids = [z.id for z in system.zones]
    if len(set(zone_ids)) != len(zone_ids):
        v.append("duplicate: zone ids are not unique")
    zones = set(zone_ids)
    for z in system.zones:
        if z.co2_injection_limit < 0:
            v.append(f"range: zone {z.id} co2_injection_limit < 0")

    grid = system.grid
    n = grid.n_steps
    if any(p.weight <= 0 for p in grid.periods):
        v.append("grid: every period weight must be > 0")
    if any(p.hours <= 0 for p in grid.periods):
        v.append("grid: every period must have at least one hour")
    if abs(grid.total_hours - HOURS_PER_YEAR) > 1e-6 * HOURS_PER_YEAR:
        v.append(f"grid: weighted hours sum to {grid.total_hours}, expected {HOURS_PER_YEAR}")

    ids = system.all_technology_ids()
    seen = set()
    for i in ids:
        if i in seen:
            v.append(f"duplicate: technology id {i!r} used more than once")
        seen.add(i)

    def zone_ref(kind: str, tech_id: str, zone: str) -> None:
        if zone not in zones:
            v.append(f"dangling-zone: {kind} {tech_id} references unknown zone {zone!r}")

    def fuel_ref(kind: str, tech_id: str, fuel: str) -> None:
        if fuel != HYDROGEN and fuel not in system.fuels:
            v.append(f"dangling-fuel: {kind} {tech_id} references unknown fuel {fuel!r}")

    for g in system.thermal:
        zone_ref("thermal", g.id, g.zone)
        fuel_ref("thermal", g.id, g.fuel)
        _check_fraction(v, f"thermal {g.id} capture_rate", g.capture_rate)
        if g.heat_rate <= 0:
            v.append(f"range: thermal {g.id} heat_rate must be > 0")
        if g.existing_capacity > g.max_capacity:
            v.append(f"range: thermal {g.id} existing_capacity exceeds max_capacity")
    for g in system.vre:
        zone_ref("vre", g.id, g.zone)
        if len(g.profile) != n:
            v.append(f"length-mismatch: vre {g.id} profile has {len(g.profile)} steps, grid has {n}")
        if len(g.profile) and (g.profile.min() < 0 or g.profile.max() > 1):
            v.append(f"range: vre {g.id} capacity factors outside [0, 1]")
        if g.existing_capacity > g.max_capacity:
            v.append(f"range: vre {g.id} existing_capacity exceeds max_capacity")
    for h in system.hydro:
        zone_ref("hydro", h.id, h.zone)
        if h.inflow is not None and len(h.inflow) != n:
            v.append(f"length-mismatch: hydro {h.id} inflow has {len(h.inflow)} steps, grid has {n}")
    for s in system.storage:
        zone_ref("storage", s.id, s.zone)
        _check_fraction(v, f"storage {s.id} round_trip_efficiency", s.round_trip_efficiency, lo_open=True)
    for line in system.lines:
        zone_ref("line", line.id, line.zone_from)
        zone_ref("line", line.id, line.zone_to)
        if line.zone_from == line.zone_to:
            v.append(f"range: line {line.id} connects zone {line.zone_from} to itself")
        if line.existing_capacity < 0:
            v.append(f"range: line {line.id} existing_capacity < 0")
    for t in system.h2_techs:
        zone_ref("h2_tech", t.id, t.zone)
        _check_fraction(v, f"h2_tech {t.id} capture_rate", t.capture_rate)
        if t.electricity_input < 0 or t.gas_input < 0:
            v.append(f"range: h2_tech {t.id} inputs must be nonnegative")
        if t.gas_input > 0:
            fuel_ref("h2_tech", t.id, t.gas_fuel)
    for s in system.h2_storage:
        zone_ref("h2_storage", s.id, s.zone)
        _check_fraction(v, f"h2_storage {s.id} efficiency", s.efficiency, lo_open=True)
    for kind, pipes in (("h2_pipeline", system.h2_pipelines), ("co2_pipeline", system.co2_pipelines)):
        for p in pipes:
            zone_ref(kind, p.id, p.zone_from)
            zone_ref(kind, p.id, p.zone_to)
            if p.zone_from == p.zone_to:
                v.append(f"range: {kind} {p.id} connects zone {p.zone_from} to itself")
            if p.capex < 0 or p.max_capacity < 0:
                v.append(f"range: {kind} {p.id} capacities and costs must be >= 0")
    for d in system.dac:
        zone_ref("dac", d.id, d.zone)
        _check_fraction(v, f"dac {d.id} combustion_capture_rate", d.combustion_capture_rate)
        if d.gas_input > 0:
            fuel_ref("dac", d.id, d.gas_fuel)
    for c in system.co2_storage_costs:
        zone_ref("co2_storage", c.zone, c.zone)
    for s in system.synfuel:
        zone_ref("synfuel", s.id, s.zone)
        _check_fraction(v, f"synfuel {s.id} mu_emit", s.mu_emit)
        _check_fraction(v, f"synfuel {s.id} mu_capture", s.mu_capture)
        if s.cap_min > s.cap_max:
            v.append(f"range: synfuel {s.id} cap_min exceeds cap_max")
        for fuel, y in s.yields.items():
            if y < 0:
                v.append(f"range: synfuel {s.id} yield of {fuel} < 0")
            if fuel not in system.fuels:
                v.append(f"dangling-fuel: synfuel {s.id} yields unknown fuel {fuel!r}")
            elif system.fuels[fuel].role == "commodity":
                v.append(f"role: synfuel {s.id} yields {fuel!r} which is not a liquid or byproduct")

    for f in system.fuels.values():
        if f.role not in FUEL_ROLES:
            v.append(f"role: fuel {f.name} has unknown role {f.role!r}")
        if f.price < 0:
            v.append(f"range: fuel {f.name} price < 0")
        if f.carbon_intensity < 0:
            v.append(f"range: fuel {f.name} carbon_intensity < 0")

    for label, series in (("demand_elec", system.demand_elec), ("demand_h2", system.demand_h2)):
        for zone, arr in series.items():
            zone_ref(label, zone, zone)
            if len(arr) != n:
                v.append(f"length-mismatch: {label} for zone {zone} has {len(arr)} steps, grid has {n}")
    for (zone, fuel), arr in system.demand_fuels.items():
        zone_ref("demand_fuels", zone, zone)
        if fuel not in system.fuels or system.fuels[fuel].role != "liquid":
            v.append(f"dangling-fuel: fuel demand for {fuel!r} which is not a liquid fuel")
        if len(arr) != n:
            v.append(f"length-mismatch: demand_fuels ({zone}, {fuel}) has {len(arr)} steps, grid has {n}")

    pol = system.policy
    if len(pol.mandates) > 1:
        fuels = ", ".join(f for f, _ in pol.mandates)
        v.append(f"mandate: at most one synthetic fuel mandate may be set, got {fuels}")
    for fuel, zeta in pol.mandates:
        _check_fraction(v, f"mandate zeta for {fuel}", zeta)
        if fuel not in system.fuels or system.fuels[fuel].role != "liquid":
            v.append(f"mandate: mandated fuel {fuel!r} is not a modeled liquid fuel")
    if pol.emissions_cap < 0:
        v.append("range: emissions_cap < 0")
    if not 0 <= system.discount_rate < 1:
        v.append("range: discount_rate outside [0, 1)")
    return ValidationReport(v)
