"""Bottom-up road transport energy demand.

Service demand (pkm or tkm per year) is turned into vehicle distance via
occupancy or loading factors, split over road types and drivetrains, and
multiplied by per-road energy intensities (MJ/vkm). The annual energy is
then spread over the time grid with a load shape per (vehicle, fuel).
"""
from __future__ import annotations

import dataclasses
import math
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Mapping

import numpy as np

from .io import InputError, read_table
from .system import EnergySystem, TimeGrid
from .units import H2_LHV_MWH_PER_T, MJ_PER_MWH

ROADS = ("urban", "rural", "highway")
ELECTRICITY = "electricity"
HYDROGEN = "hydrogen"


class DemandError(ValueError):
    pass


@dataclass(frozen=True)
class VehicleType:
    name: str
    category: str  # passenger | cargo
    road_shares: Mapping[str, float]
    occupancy: float | None = None  # vkm per pkm
    loading: float | None = None  # vkm per tkm
    group: str = ""

    @property
    def distance_factor(self) -> float:
        return self.occupancy if self.category == "passenger" else self.loading


@dataclass(frozen=True)
class DrivetrainShare:
    vehicle: str
    drivetrain: str
    market_share: float
    # (fuel, road) -> MJ/vkm; a missing key means the fuel is not used on that road
    intensity: Mapping[tuple[str, str], float]
    efficiency: float = 1.0

    def fuels(self) -> list[str]:
        return sorted({f for f, _ in self.intensity})


@dataclass(frozen=True)
class ServiceDemand:
    vehicle: str
    zone: str
    year: int
    amount: float  # pkm/y or tkm/y depending on vehicle category


@dataclass(frozen=True)
class TransportScenario:
    vehicles: tuple[VehicleType, ...]
    drivetrains: tuple[DrivetrainShare, ...]
    service: tuple[ServiceDemand, ...]
    # (vehicle or "*", fuel) -> share of annual energy per step, on the target grid
    load_shapes: Mapping[tuple[str, str], np.ndarray] = field(default_factory=dict)

    def vehicle(self, name: str) -> VehicleType:
        for v in self.vehicles:
            if v.name == name:
                return v
        raise DemandError(f"unknown vehicle type {name!r}")

    def drivetrains_of(self, vehicle: str) -> list[DrivetrainShare]:
        return [d for d in self.drivetrains if d.vehicle == vehicle]

    def share(self, vehicle: str, drivetrain: str) -> float:
        for d in self.drivetrains:
            if d.vehicle == vehicle and d.drivetrain == drivetrain:
                return d.market_share
        raise DemandError(f"vehicle {vehicle!r} has no drivetrain {drivetrain!r}")


def validate_scenario(scn: TransportScenario, tol: float = 1e-6) -> list[str]:
    problems = []
    names = [v.name for v in scn.vehicles]
    if len(set(names)) != len(names):
        problems.append("duplicate vehicle type names")
    for v in scn.vehicles:
        if v.category not in ("passenger", "cargo"):
            problems.append(f"vehicle {v.name}: category must be passenger or cargo")
        elif v.category == "passenger" and (v.occupancy is None or v.loading is not None):
            problems.append(f"vehicle {v.name}: passenger vehicles need an occupancy factor only")
        elif v.category == "cargo" and (v.loading is None or v.occupancy is not None):
            problems.append(f"vehicle {v.name}: cargo vehicles need a loading factor only")
        if set(v.road_shares) - set(ROADS):
            problems.append(f"vehicle {v.name}: unknown road type")
        if abs(sum(v.road_shares.values()) - 1.0) > tol:
            problems.append(f"vehicle {v.name}: road shares sum to {sum(v.road_shares.values())}, not 1")
        dts = scn.drivetrains_of(v.name)
        total = sum(d.market_share for d in dts)
        if dts and abs(total - 1.0) > tol:
            problems.append(f"vehicle {v.name}: drivetrain shares sum to {total}, not 1")
    for d in scn.drivetrains:
        if d.vehicle not in names:
            problems.append(f"drivetrain {d.drivetrain} references unknown vehicle {d.vehicle!r}")
        if d.market_share < 0 or any(k < 0 for k in d.intensity.values()):
            problems.append(f"drivetrain ({d.vehicle}, {d.drivetrain}): negative share or intensity")
    for s in scn.service:
        if s.amount < 0:
            problems.append(f"service demand for ({s.vehicle}, {s.zone}) is negative")
        if s.vehicle not in names:
            problems.append(f"service demand references unknown vehicle {s.vehicle!r}")
    return problems


def phev_drivetrain(vehicle: str, drivetrain: str, share: float, k_electric: float,
                    k_liquid: Mapping[str, float], liquid_fuel: str, efficiency: float = 1.0) -> DrivetrainShare:
    """Plug-in hybrid: all urban distance on electricity, other roads on ``liquid_fuel``.

    ``k_liquid`` maps the non-urban road types to MJ/vkm.
    """
    intensity = {(ELECTRICITY, "urban"): k_electric}
    for road in ROADS[1:]:
        if road in k_liquid:
            intensity[(liquid_fuel, road)] = k_liquid[road]
    return DrivetrainShare(vehicle, drivetrain, share, intensity, efficiency)


def _check_intensities(scn: TransportScenario) -> None:
    for v in scn.vehicles:
        for d in scn.drivetrains_of(v.name):
            if d.market_share == 0:
                continue
            for road, s in v.road_shares.items():
                if s > 0 and not any(r == road for _, r in d.intensity):
                    raise DemandError(
                        f"missing energy intensity for (vehicle={v.name}, drivetrain={d.drivetrain}, road={road}) "
                        f"with nonzero share"
                    )


def load_shape(scn: TransportScenario, vehicle: str, fuel: str, grid: TimeGrid, tol: float = 1e-6) -> np.ndarray:
    """Per-step share of annual energy; flat unless a shape is supplied."""
    w = grid.weights
    shape = scn.load_shapes.get((vehicle, fuel))
    if shape is None:
        shape = scn.load_shapes.get(("*", fuel))
    if shape is None:
        return np.full(grid.n_steps, 1.0 / float(w.sum()))
    shape = np.asarray(shape, dtype=float)
    if len(shape) != grid.n_steps:
        raise DemandError(f"load shape ({vehicle}, {fuel}) has {len(shape)} steps, grid has {grid.n_steps}")
    total = float(shape @ w)
    if abs(total - 1.0) > tol:
        raise DemandError(f"load shape ({vehicle}, {fuel}) is not normalized: weighted sum {total}")
    return shape


def annual_energy_mj(scn: TransportScenario, drivetrain: str | None = None) -> dict[tuple[str, str, str], float]:
    """Annual final energy in MJ keyed by (vehicle, zone, fuel), optionally for one drivetrain only."""
    problems = validate_scenario(scn)
    if problems:
        raise DemandError("; ".join(problems))
    _check_intensities(scn)
    out: dict[tuple[str, str, str], float] = defaultdict(float)
    for s in scn.service:
        v = scn.vehicle(s.vehicle)
        vkm = s.amount * v.distance_factor
        for d in scn.drivetrains_of(v.name):
            if d.market_share == 0 or (drivetrain is not None and d.drivetrain != drivetrain):
                continue
            for (fuel, road), k in sorted(d.intensity.items()):
                share_r = v.road_shares.get(road, 0.0)
                if share_r:
                    out[(v.name, s.zone, fuel)] += vkm * share_r * d.market_share * k * d.efficiency
    return dict(out)


def compute_energy_demand(scn: TransportScenario, grid: TimeGrid) -> dict[tuple[str, str], np.ndarray]:
    """Energy per step in MWh keyed by (zone, fuel)."""
    out: dict[tuple[str, str], np.ndarray] = {}
    for (vehicle, zone, fuel), mj in sorted(annual_energy_mj(scn).items()):
        series = mj / MJ_PER_MWH * load_shape(scn, vehicle, fuel, grid)
        key = (zone, fuel)
        out[key] = out[key] + series if key in out else series
    return out


def vehicle_distance(scn: TransportScenario) -> dict[tuple[str, str], float]:
    """Drivetrain-weighted vehicle km per (vehicle, zone)."""
    out: dict[tuple[str, str], float] = defaultdict(float)
    for s in scn.service:
        v = scn.vehicle(s.vehicle)
        total_share = sum(d.market_share for d in scn.drivetrains_of(v.name))
        out[(v.name, s.zone)] += s.amount * v.distance_factor * total_share
    return dict(out)


VehicleFilter = str | Iterable[str] | Callable[[VehicleType], bool]


def _matcher(flt: VehicleFilter) -> Callable[[VehicleType], bool]:
    if callable(flt):
        return flt
    if isinstance(flt, str):
        return lambda v: flt in (v.name, v.group, v.category)
    names = set(flt)
    return lambda v: v.name in names


def apply_fuel_switch(scn: TransportScenario, vehicle_filter: VehicleFilter, from_drivetrain: str,
                      to_drivetrain: str, fraction: float) -> TransportScenario:
    """Move ``fraction`` of the current ``from_drivetrain`` share to ``to_drivetrain``.

    ``vehicle_filter`` is a vehicle name, group or category, an iterable of
    names, or a predicate. Service demand is left untouched.
    """
    if not 0.0 <= fraction <= 1.0 or math.isnan(fraction):
        raise DemandError(f"fraction {fraction} outside [0, 1]: insufficient source share")
    match = _matcher(vehicle_filter)
    targets = [v.name for v in scn.vehicles if match(v)]
    if not targets:
        raise DemandError("fuel switch filter matches no vehicle type")
    drivetrains = list(scn.drivetrains)
    for name in targets:
        idx = {d.drivetrain: i for i, d in enumerate(drivetrains) if d.vehicle == name}
        if from_drivetrain not in idx:
            raise DemandError(f"vehicle {name!r} has no {from_drivetrain!r} drivetrain to switch from")
        if to_drivetrain not in idx or not drivetrains[idx[to_drivetrain]].intensity:
            raise DemandError(f"vehicle {name!r} has no energy intensities for {to_drivetrain!r}")
        src = drivetrains[idx[from_drivetrain]]
        dst = drivetrains[idx[to_drivetrain]]
        moved = src.market_share * fraction
        drivetrains[idx[from_drivetrain]] = dataclasses.replace(src, market_share=src.market_share - moved)
        drivetrains[idx[to_drivetrain]] = dataclasses.replace(dst, market_share=dst.market_share + moved)
    return dataclasses.replace(scn, drivetrains=tuple(drivetrains))


def scale_service(scn: TransportScenario, factor: float) -> TransportScenario:
    return dataclasses.replace(
        scn, service=tuple(dataclasses.replace(s, amount=s.amount * factor) for s in scn.service)
    )


def add_transport_demand(system: EnergySystem, demand: Mapping[tuple[str, str], np.ndarray]) -> EnergySystem:
    """Fold transport energy into the system's electricity, H2 and liquid-fuel demand."""
    n = system.grid.n_steps
    elec = {z: np.array(v) for z, v in system.demand_elec.items()}
    h2 = {z: np.array(v) for z, v in system.demand_h2.items()}
    fuels = {k: np.array(v) for k, v in system.demand_fuels.items()}
    for (zone, fuel), series in demand.items():
        if fuel == ELECTRICITY:
            elec[zone] = elec.get(zone, np.zeros(n)) + series
        elif fuel == HYDROGEN:
            h2[zone] = h2.get(zone, np.zeros(n)) + series / H2_LHV_MWH_PER_T
        else:
            if fuel not in system.fuels:
                raise DemandError(f"transport fuel {fuel!r} is not defined in the energy system")
            fuels[(zone, fuel)] = fuels.get((zone, fuel), np.zeros(n)) + series
    return system.replace(demand_elec=elec, demand_h2=h2, demand_fuels=fuels)


# ---------------------------------------------------------------------------
# CSV I/O

_K_COLS = tuple(f"k_{r}_mj_per_vkm" for r in ROADS)


def load_transport(path, grid: TimeGrid | None = None, year: int | None = None) -> TransportScenario:
    """Load vehicles.csv, drivetrains.csv, service_demand.csv and optional load_shapes.csv."""
    root = Path(path)
    vt = read_table(root / "vehicles.csv", ("name", "category"),
                    ("group", "occupancy_vkm_per_pkm", "loading_vkm_per_tkm", "payload_t",
                     "share_urban", "share_rural", "share_highway"))
    vehicles = []
    for ln, r in vt:
        cat = vt.text(ln, r, "category")
        occ = vt.num(ln, r, "occupancy_vkm_per_pkm", math.nan)
        load = vt.num(ln, r, "loading_vkm_per_tkm", math.nan)
        payload = vt.num(ln, r, "payload_t", math.nan)
        if math.isnan(load) and not math.isnan(payload):
            if payload <= 0:
                raise InputError(f"{vt.where(ln)}: payload_t must be > 0")
            load = 1.0 / payload
        shares = {road: vt.num(ln, r, f"share_{road}", 0.0) for road in ROADS}
        vehicles.append(VehicleType(
            vt.text(ln, r, "name"), cat, {k: v for k, v in shares.items() if v},
            None if math.isnan(occ) else occ, None if math.isnan(load) else load, vt.text(ln, r, "group", ""),
        ))

    dt = read_table(root / "drivetrains.csv", ("vehicle", "drivetrain", "market_share", "fuel"),
                    _K_COLS + ("efficiency",))
    grouped: dict[tuple[str, str], dict] = {}
    for ln, r in dt:
        key = (dt.text(ln, r, "vehicle"), dt.text(ln, r, "drivetrain"))
        share = dt.num(ln, r, "market_share")
        eff = dt.num(ln, r, "efficiency", 1.0)
        entry = grouped.setdefault(key, {"share": share, "eff": eff, "k": {}})
        if entry["share"] != share or entry["eff"] != eff:
            raise InputError(f"{dt.where(ln)}: inconsistent market_share/efficiency for drivetrain {key}")
        fuel = dt.text(ln, r, "fuel")
        for road, col in zip(ROADS, _K_COLS):
            if (r.get(col) or "").strip():
                if (fuel, road) in entry["k"]:
                    raise InputError(f"{dt.where(ln)}: duplicate intensity for {key} {fuel} {road}")
                entry["k"][(fuel, road)] = dt.num(ln, r, col)
    drivetrains = tuple(
        DrivetrainShare(v, d, e["share"], e["k"], e["eff"]) for (v, d), e in grouped.items()
    )

    st = read_table(root / "service_demand.csv", ("vehicle", "zone", "amount"), ("year",))
    service = []
    for ln, r in st:
        y = int(st.num(ln, r, "year", 0))
        if year is not None and y != year:
            continue
        service.append(ServiceDemand(st.text(ln, r, "vehicle"), st.text(ln, r, "zone"), y, st.num(ln, r, "amount")))
    years = {s.year for s in service}
    if len(years) > 1:
        raise InputError("service_demand.csv: several years present; select one explicitly")

    shapes = {}
    if (root / "load_shapes.csv").exists():
        lt = read_table(root / "load_shapes.csv", ("vehicle", "fuel", "t", "tau"))
        by_key: dict[tuple[str, str], dict[int, float]] = defaultdict(dict)
        for ln, r in lt:
            by_key[(lt.text(ln, r, "vehicle"), lt.text(ln, r, "fuel"))][int(lt.num(ln, r, "t"))] = lt.num(ln, r, "tau")
        for key, by_t in by_key.items():
            n = grid.n_steps if grid is not None else max(by_t) + 1
            if sorted(by_t) != list(range(n)):
                raise InputError(f"load_shapes.csv: shape {key} must cover t = 0..{n - 1}")
            shapes[key] = np.array([by_t[t] for t in range(n)])
    scn = TransportScenario(tuple(vehicles), drivetrains, tuple(service), shapes)
    problems = validate_scenario(scn)
    if problems:
        raise InputError(f"{root}: " + "; ".join(problems))
    return scn


def write_demand_fuels(demand: Mapping[tuple[str, str], np.ndarray], path) -> None:
    """Write (zone, t, fuel, mwh) rows in the layout read by the system loader."""
    import csv

    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["zone", "t", "fuel", "mwh"])
        for (zone, fuel), series in sorted(demand.items()):
            for t, v in enumerate(series):
                w.writerow([zone, t, fuel, repr(float(v))])
