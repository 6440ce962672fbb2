"""Synthetic two-zone test system.

Costs and conversion factors follow published European 2040 technology
assumptions; the weather and load series are seeded synthetic draws. The
system is deliberately small so that a three-day reduction solves in a few
seconds, but it keeps every supply chain the model supports.
"""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from . import demand as dm
from . import io
from . import system as sm
from .units import GJ_PER_MMBTU, GJ_PER_MWH, H2_LHV_GJ_PER_T, HOURS_PER_YEAR, MJ_PER_MWH

ZONES = ("north", "south")
# t CO2 per MWh of fuel burned
NG_INTENSITY = 0.0561 * GJ_PER_MWH
COAL_INTENSITY = 0.0946 * GJ_PER_MWH
DIESEL_INTENSITY = 0.0693 * GJ_PER_MWH
GASOLINE_INTENSITY = 0.0677 * GJ_PER_MWH
JET_INTENSITY = 0.0684 * GJ_PER_MWH
MMBTU_MWH = GJ_PER_MMBTU / GJ_PER_MWH

TOY_CAP = 7.0e6  # t CO2/y
TOY_SEED = 20240

# EUR/MWh; two published price sets
PRICES_DEFAULT = {"natural_gas": 31.1, "uranium": 1.5, "coal": 6.2,
                  "diesel": 96.9, "gasoline": 79.9, "jet": 55.2}
PRICES_GJ = {"natural_gas": 8.56, "diesel": 26.63, "gasoline": 21.95, "jet": 15.18}


def gj_prices() -> dict[str, float]:
    """Prices from the EUR/GJ set, converted; other fuels keep the default."""
    out = dict(PRICES_DEFAULT)
    out.update({k: v * GJ_PER_MWH for k, v in PRICES_GJ.items()})
    return out


def fuels(prices: dict[str, float] | None = None) -> dict[str, sm.FuelSpec]:
    p = PRICES_DEFAULT if prices is None else prices
    return {
        "natural_gas": sm.FuelSpec("natural_gas", p["natural_gas"], NG_INTENSITY),
        "uranium": sm.FuelSpec("uranium", p["uranium"], 0.0),
        "coal": sm.FuelSpec("coal", p["coal"], COAL_INTENSITY),
        "diesel": sm.FuelSpec("diesel", p["diesel"], DIESEL_INTENSITY, "liquid"),
        "gasoline": sm.FuelSpec("gasoline", p["gasoline"], GASOLINE_INTENSITY, "liquid"),
        "jet": sm.FuelSpec("jet", p["jet"], JET_INTENSITY, "byproduct"),
    }


def synfuel_options(zone: str = "north") -> tuple[sm.SynfuelTechnology, ...]:
    """The three synfuel pathways, per tonne of CO2 feed."""
    gj = 1.0 / GJ_PER_MWH
    specs = [
        # label, capex kEUR/(t/h), fom, vom, mu_emit, mu_capture, h2 GJ, elec GJ, diesel, gasoline, jet (GJ)
        ("A", 3635, 193, 7.76, 0.52, 0.0, 11.2, 0.13, 1.889, 1.784, 3.225),
        ("B", 4744, 229, 9.98, 0.05, 0.475, 11.2, 2.10, 1.889, 1.784, 3.225),
        ("C", 9028, 435, 18.99, 0.10, 0.0, 21.3, 4.00, 3.596, 3.396, 6.138),
    ]
    out = []
    for label, capex, fom, vom, emit, cap, h2, elec, dsl, gas, jet in specs:
        out.append(sm.SynfuelTechnology(
            id=f"synfuel_{label}", zone=zone, capex=capex * 1e3, fom=fom * 1e3, vom=vom,
            mu_emit=emit, mu_capture=cap, h2_in=h2 / H2_LHV_GJ_PER_T, elec_in=elec * gj,
            yields={"diesel": dsl * gj, "gasoline": gas * gj, "jet": jet * gj}, option_label=label,
            lifetime=40.0,
        ))
    return tuple(out)


# ---------------------------------------------------------------------------
# synthetic series

def _profiles(seed: int) -> dict[str, np.ndarray]:
    rng = np.random.default_rng(seed)
    hours = np.arange(HOURS_PER_YEAR)
    day = hours // 24
    hod = hours % 24
    season = np.cos(2 * np.pi * (day - 15) / 365.0)  # +1 mid-winter, -1 mid-summer

    def daily_ar(rho: float, sigma: float) -> np.ndarray:
        x = np.empty(365)
        x[0] = rng.normal(0, sigma)
        for d in range(1, 365):
            x[d] = rho * x[d - 1] + rng.normal(0, sigma)
        return x

    out = {}
    for z, (wind_mean, sun) in zip(ZONES, ((0.42, 0.8), (0.30, 1.25))):
        weather = daily_ar(0.7, 0.12)[day]
        wind = wind_mean + 0.10 * season + weather + 0.05 * np.sin(2 * np.pi * (hod - 3) / 24)
        out[f"wind/{z}"] = np.clip(wind + rng.normal(0, 0.03, HOURS_PER_YEAR), 0.0, 0.95)
        out[f"offwind/{z}"] = np.clip(wind + 0.12 + rng.normal(0, 0.03, HOURS_PER_YEAR), 0.0, 0.97)
        elev = np.maximum(np.sin(np.pi * (hod - 6 + season) / (12 - 2 * season)), 0.0)
        elev = np.where((hod >= 6 - season) & (hod <= 18 + season), elev, 0.0)
        clouds = np.clip(1.0 - np.abs(daily_ar(0.5, 0.25)), 0.2, 1.0)[day]
        out[f"solar/{z}"] = np.clip(0.75 * sun * (0.65 - 0.35 * season) * elev * clouds, 0.0, 1.0)
        diurnal = 0.12 * np.sin(2 * np.pi * (hod - 9) / 24) + 0.06 * np.sin(4 * np.pi * (hod - 5) / 24)
        out[f"load/{z}"] = 1.0 + 0.15 * season + diurnal - 0.08 * (day % 7 >= 5) + rng.normal(0, 0.01, HOURS_PER_YEAR)
    inflow = 0.6 + 0.4 * np.cos(2 * np.pi * (day - 140) / 365.0) + daily_ar(0.9, 0.05)[day]
    out["inflow/north"] = np.clip(inflow, 0.1, None)
    # transport charging: evening and overnight peak
    ev = 1.0 + 0.6 * np.cos(2 * np.pi * (hod - 21) / 24)
    out["ev"] = ev / ev.sum()
    # four decimals keep the bundled CSVs small and exactly reproducible
    return {k: np.round(v, 4) if k != "ev" else v for k, v in out.items()}


# ---------------------------------------------------------------------------

def toy_system(seed: int = TOY_SEED, prices: dict[str, float] | None = None, cap: float = TOY_CAP,
               hourly: bool = True) -> sm.EnergySystem:
    """Full-year hourly two-zone system (non-transport demand only)."""
    prof = _profiles(seed)
    k = 1e3  # capex and fom below are in kEUR per MW
    mm = MMBTU_MWH
    zones = (sm.Zone("north", "North", 3.0e6), sm.Zone("south", "South", 0.0))
    peak_load = {"north": 3000.0, "south": 4000.0}

    thermal, vre, storage, h2_techs, h2_storage, dac, co2_costs = [], [], [], [], [], [], []
    classes = {}
    for z in ZONES:
        def th(tid, fuel, capex, fom, vom, hr, cls, capture=0.0, life=30.0, existing=0.0, maximum=sm.INF):
            thermal.append(sm.ThermalGenerator(f"{tid}_{z}", z, fuel, capex * k, fom * k, vom, hr, capture,
                                               life, existing, maximum))
            classes[f"{tid}_{z}"] = cls

        th("ocgt", "natural_gas", 785, 19, 1.6, 10.1 * mm, "gas")
        th("ccgt", "natural_gas", 937, 25, 4.6, 6.5 * mm, "gas", existing=2000.0 if z == "north" else 2500.0)
        th("ccgt_ccs", "natural_gas", 1794, 52, 3.7, 7.2 * mm, "gas_ccs", capture=0.95)
        th("h2_turbine", sm.HYDROGEN, 816.095, 24.57, 1.57, 1.0 / 21.65, "h2_turbine")
        if z == "north":
            th("nuclear", "uranium", 6431, 131, 2.6, 10.46 * mm, "nuclear", life=60.0, existing=1000.0,
               maximum=1000.0)
        else:
            th("coal", "coal", 2733, 67, 7.2, 10.0 * mm, "coal", existing=1500.0, maximum=1500.0)

        vre.append(sm.VreGenerator(f"wind_{z}", z, 851 * k, 32 * k, prof[f"wind/{z}"], 20000.0))
        vre.append(sm.VreGenerator(f"solar_{z}", z, 680 * k, 13 * k, prof[f"solar/{z}"], 20000.0))
        classes[f"wind_{z}"] = "wind"
        classes[f"solar_{z}"] = "solar"
        if z == "north":
            vre.append(sm.VreGenerator(f"offwind_{z}", z, 3751 * k, 69 * k, prof[f"offwind/{z}"], 10000.0))
            classes[f"offwind_{z}"] = "wind"

        storage.append(sm.ElectricStorage(f"battery_{z}", z, 137 * k, 208 * k, 18 * k, 0.85, 30.0))
        classes[f"battery_{z}"] = "battery"

        def h2(tid, capex, fom, vom, elec, gas_gj, capture, life, cls):
            h2_techs.append(sm.H2Technology(f"{tid}_{z}", z, capex * k, fom * k, vom * k, elec,
                                            gas_gj / GJ_PER_MWH, capture, life))
            classes[f"{tid}_{z}"] = cls

        h2("smr", 15715, 539, 0.08, 0.65, 184.4, 0.0, 25.0, "smr")
        h2("smr_ccs", 38232, 1183, 0.22, 2.04, 196.1, 0.962, 25.0, "smr_ccs")
        h2("atr_ccs", 30218, 917, 0.33, 4.00, 184.3, 0.945, 25.0, "atr_ccs")
        h2("electrolyzer", 18954, 37.30, 0.0, 45.0, 0.0, 0.0, 20.0, "electrolyzer")
        h2_storage.append(sm.H2Storage(f"h2_store_{z}", z, 1859 * k, 504 * k, 1.02 * k, 1.0, 30.0))

        dac.append(sm.DacTechnology(f"dac_solvent_{z}", z, 12606 * k, 342 * k, 52.0, 12.2 * mm, -0.13, 0.99))
        dac.append(sm.DacTechnology(f"dac_sorbent_{z}", z, 30684 * k, 1041 * k, 53.8, 26.6 * mm, 0.0, 0.89))
        dac.append(sm.DacTechnology(f"dac_electric_{z}", z, 13772 * k, 673 * k, 19.8, 0.0, 4.38, 0.0))
        co2_costs.append(sm.Co2StorageCost(z, 0.46, 0.09, 0.007, 30.0))

    hydro = (sm.HydroGenerator("hydro_north", "north", 800.0, np.round(400.0 * prof["inflow/north"], 1), 56 * k),)
    classes["hydro_north"] = "hydro"
    lines = (sm.TransmissionLine("line_ns", "north", "south", 1500.0, 400 * k),)
    pipes_h2 = (sm.Pipeline("h2_pipe_ns", "north", "south", 2.0 * k, 0.0, 600.0),)
    pipes_co2 = (sm.Pipeline("co2_pipe_ns", "north", "south", 0.8 * k, 0.0, 600.0),)

    demand_elec = {z: np.round(peak_load[z] * prof[f"load/{z}"] / 1.15, 1) for z in ZONES}
    demand_h2 = {"north": np.full(HOURS_PER_YEAR, 20.0), "south": np.full(HOURS_PER_YEAR, 30.0)}
    for sf in synfuel_options():
        classes[sf.id] = "synfuel"
    for d in dac:
        classes[d.id] = "dac"

    system = sm.EnergySystem(
        zones=zones, grid=sm.TimeGrid.uniform(HOURS_PER_YEAR, 24, HOURS_PER_YEAR), fuels=fuels(prices),
        thermal=tuple(thermal), vre=tuple(vre), hydro=hydro, storage=tuple(storage), lines=lines,
        h2_techs=tuple(h2_techs), h2_storage=tuple(h2_storage), h2_pipelines=pipes_h2, co2_pipelines=pipes_co2,
        dac=tuple(dac), co2_storage_costs=tuple(co2_costs), synfuel=synfuel_options(),
        demand_elec=demand_elec, demand_h2=demand_h2, demand_fuels={},
        policy=sm.PolicyConfig(emissions_cap=cap), discount_rate=0.045, tech_classes=classes,
    )
    return system


HDV_GROUP = "HDV"
_HDV_ROADS = {"rural": 0.12, "urban": 0.25, "highway": 0.63}
_CAR_ROADS = {"rural": 0.3, "urban": 0.45, "highway": 0.25}
_LCV_ROADS = {"rural": 0.42, "urban": 0.3, "highway": 0.28}


def _flat(fuel: str, k: float) -> dict[tuple[str, str], float]:
    return {(fuel, r): k for r in dm.ROADS}


def toy_transport(seed: int = TOY_SEED) -> dm.TransportScenario:
    prof = _profiles(seed)
    E = dm.ELECTRICITY
    vehicles = (
        dm.VehicleType("car_large", "passenger", _CAR_ROADS, occupancy=1 / 1.6),
        dm.VehicleType("lcv", "cargo", _LCV_ROADS, loading=1 / 0.40),
        dm.VehicleType("hdv_heavy", "cargo", _HDV_ROADS, loading=1 / 6.65, group=HDV_GROUP),
        dm.VehicleType("hdv_ultra", "cargo", _HDV_ROADS, loading=1 / 15.12, group=HDV_GROUP),
    )

    def phev(v, ke, kl, fuel):
        return dm.phev_drivetrain(v, "phev", 0.4 if v != "car_large" else 0.5, ke,
                                  {"rural": kl, "highway": kl}, fuel)

    drivetrains = (
        dm.DrivetrainShare("car_large", "electric", 0.5, _flat(E, 0.65)),
        phev("car_large", 0.65, 2.70, "gasoline"),
        dm.DrivetrainShare("lcv", "electric", 0.6, _flat(E, 0.61)),
        phev("lcv", 0.61, 2.62, "diesel"),
        dm.DrivetrainShare("hdv_heavy", "diesel", 0.6, _flat("diesel", 10.07)),
        phev("hdv_heavy", 4.68, 10.07, "diesel"),
        dm.DrivetrainShare("hdv_heavy", "h2", 0.0, _flat(dm.HYDROGEN, 6.72)),
        dm.DrivetrainShare("hdv_ultra", "diesel", 0.6, _flat("diesel", 13.87)),
        phev("hdv_ultra", 5.94, 13.87, "diesel"),
        dm.DrivetrainShare("hdv_ultra", "h2", 0.0, _flat(dm.HYDROGEN, 9.12)),
    )
    service = []
    for z, scale in (("north", 1.0), ("south", 1.3)):
        service += [
            dm.ServiceDemand("car_large", z, 2040, 30e9 * scale),
            dm.ServiceDemand("lcv", z, 2040, 1.5e9 * scale),
            dm.ServiceDemand("hdv_heavy", z, 2040, 10e9 * scale),
            dm.ServiceDemand("hdv_ultra", z, 2040, 25e9 * scale),
        ]
    shapes = {("*", E): prof["ev"]}
    return dm.TransportScenario(vehicles, drivetrains, tuple(service), shapes)


def baseline_hdv_diesel_mwh(scn: dm.TransportScenario) -> float:
    """Annual diesel of the HDV group's pure diesel drivetrain, MWh."""
    total = 0.0
    for (vehicle, _zone, fuel), mj in dm.annual_energy_mj(scn, drivetrain="diesel").items():
        if fuel == "diesel" and scn.vehicle(vehicle).group == HDV_GROUP:
            total += mj / MJ_PER_MWH
    return total


def write_transport(scn: dm.TransportScenario, path, n_steps: int = HOURS_PER_YEAR) -> None:
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)

    def fmt(v):
        return "" if v is None else repr(float(v))

    with open(root / "vehicles.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["name", "category", "group", "occupancy_vkm_per_pkm", "loading_vkm_per_tkm",
                    "share_urban", "share_rural", "share_highway"])
        for v in scn.vehicles:
            w.writerow([v.name, v.category, v.group, fmt(v.occupancy), fmt(v.loading),
                        *[fmt(v.road_shares.get(r, 0.0)) for r in dm.ROADS]])
    with open(root / "drivetrains.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["vehicle", "drivetrain", "market_share", "fuel", "k_urban_mj_per_vkm", "k_rural_mj_per_vkm",
                    "k_highway_mj_per_vkm", "efficiency"])
        for d in scn.drivetrains:
            for fuel in d.fuels():
                ks = [fmt(d.intensity[(fuel, r)]) if (fuel, r) in d.intensity else "" for r in dm.ROADS]
                w.writerow([d.vehicle, d.drivetrain, fmt(d.market_share), fuel, *ks, fmt(d.efficiency)])
    with open(root / "service_demand.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["vehicle", "zone", "amount", "year"])
        for s in scn.service:
            w.writerow([s.vehicle, s.zone, fmt(s.amount), s.year])
    if scn.load_shapes:
        with open(root / "load_shapes.csv", "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["vehicle", "fuel", "t", "tau"])
            for (vehicle, fuel), arr in sorted(scn.load_shapes.items()):
                for t in range(n_steps):
                    w.writerow([vehicle, fuel, t, repr(float(arr[t]))])


DATA_DIR = Path(__file__).parent / "data"


def data_path(name: str = "toy") -> Path:
    """Directory of a bundled dataset: ``toy`` or ``transport_toy``."""
    path = DATA_DIR / name
    if not path.is_dir():
        raise FileNotFoundError(f"bundled dataset {name!r} not found under {DATA_DIR}")
    return path


def write_toy_data(root, seed: int = TOY_SEED, gj_prices_variant: bool = False) -> dict[str, Path]:
    """Write the toy system and transport scenario under ``root``.

    The bundled copies are exactly this output for the default seed. With
    ``gj_prices_variant`` a second system priced with the EUR/GJ
    fuel price set is written to ``toy_gj_prices``.
    """
    root = Path(root)
    paths = {"toy": root / "toy", "transport_toy": root / "transport_toy"}
    io.write_system(toy_system(seed), paths["toy"])
    write_transport(toy_transport(seed), paths["transport_toy"])
    if gj_prices_variant:
        paths["toy_gj_prices"] = root / "toy_gj_prices"
        io.write_system(toy_system(seed, prices=gj_prices()), paths["toy_gj_prices"])
    return paths
