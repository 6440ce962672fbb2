"""Synthetic and conventional liquid fuels.

A synthetic fuel plant is described per tonne of CO2 feed: it draws
hydrogen, electricity and captured CO2, releases ``mu_emit`` of the feed,
returns ``mu_capture`` to the captured stream and yields a fixed slate of
liquid fuels and byproducts. Fuel balances are annual and system-wide.
Products are linear expressions of the feed, so no product columns exist.
"""
from __future__ import annotations

from dataclasses import dataclass

from .supply import (
    BYPRODUCT_COMBUSTION,
    CONVENTIONAL_COMBUSTION,
    COST_BYPRODUCT,
    COST_CONVENTIONAL,
    COST_SYNFUEL,
    SYNFUEL_COMBUSTION,
    SYNFUEL_PROCESS,
    Model,
    ModelError,
)
from .system import EnergySystem, FuelSpec, SynfuelTechnology

CLOSURE_TOLERANCE = 0.02


@dataclass(frozen=True)
class Stoichiometry:
    fuels: dict[str, float]  # MWh
    byproducts: dict[str, float]  # MWh
    h2_in: float  # t
    elec_in: float  # MWh
    emitted: float  # t CO2
    captured: float  # t CO2


def synfuel_stoichiometry(tech: SynfuelTechnology, co2_feed: float,
                          fuels: dict[str, FuelSpec] | None = None) -> Stoichiometry:
    """Outputs and inputs of ``tech`` for ``co2_feed`` tonnes of CO2.

    Without ``fuels`` every product counts as a liquid fuel; with it,
    products whose role is ``byproduct`` are reported separately.
    """
    if co2_feed < 0:
        raise ValueError(f"CO2 feed must be nonnegative, got {co2_feed}")
    liquids, byp = {}, {}
    for name, y in tech.yields.items():
        if fuels is not None and name in fuels and fuels[name].role == "byproduct":
            byp[name] = y * co2_feed
        else:
            liquids[name] = y * co2_feed
    return Stoichiometry(liquids, byp, tech.h2_in * co2_feed, tech.elec_in * co2_feed,
                         tech.mu_emit * co2_feed, tech.mu_capture * co2_feed)


def carbon_closure(tech: SynfuelTechnology, fuels: dict[str, FuelSpec], include_capture: bool = True) -> float:
    """Carbon leaving the plant per tonne of feed: product carbon plus released and recaptured CO2."""
    carbon = sum(y * fuels[name].carbon_intensity for name, y in tech.yields.items())
    return carbon + tech.mu_emit + (tech.mu_capture if include_capture else 0.0)


def check_carbon_closure(system: EnergySystem, tol: float = CLOSURE_TOLERANCE) -> list[str]:
    problems = []
    for tech in system.synfuel:
        c = carbon_closure(tech, system.fuels)
        if abs(c - 1.0) > tol:
            problems.append(f"synfuel {tech.id}: carbon closure {c:.4f} deviates from 1 by more than {tol:.0%}")
    return problems


# ---------------------------------------------------------------------------
# LP blocks; each takes the model under construction

def build_synfuel_plants(m: Model) -> None:
    m.synfuel_feed = {}
    m.synfuel_cap = {}
    for f in m.system.synfuel:
        cap = m.capacity("capacity", f.id, f.zone, f.capex, f.fom, f.lifetime, COST_SYNFUEL, f.cap_min, f.cap_max)
        feeds = []
        for t in m.steps:
            x = m.col("synfuel_feed", f.id, f.zone, t)
            m.row("synfuel_feed_cap", f.id, f.zone, t, "<=", 0.0, {x: 1.0, cap: -1.0})
            feeds.append(x)
        m.synfuel_feed[f.id] = feeds
        m.synfuel_cap[f.id] = cap


def build_conventional_purchases(m: Model) -> None:
    m.conventional = {}
    for fuel in m.system.liquid_fuels():
        for z in m.system.zone_ids:
            m.conventional[(z, fuel)] = [m.col("conventional", fuel, z, t) for t in m.steps]


def build_liquid_fuel_costs(m: Model) -> None:
    s, w = m.system, m.w
    for f in s.synfuel:
        for t, x in enumerate(m.synfuel_feed[f.id]):
            m.cost(x, w[t] * (f.vom + f.fuel_cost), COST_SYNFUEL)
            credit = sum(y * s.fuels[b].price for b, y in f.yields.items() if s.fuels[b].role == "byproduct")
            m.cost(x, -w[t] * credit, COST_BYPRODUCT)
    for (z, fuel), cols in m.conventional.items():
        price = s.fuels[fuel].price
        for t, x in enumerate(cols):
            m.cost(x, w[t] * price, COST_CONVENTIONAL)


def build_fuel_balance(m: Model) -> dict[str, int]:
    s, w = m.system, m.w
    for fuel in s.liquid_fuels():
        demand = sum(float(w @ arr) for (z, f), arr in s.demand_fuels.items() if f == fuel)
        coeffs: dict[int, float] = {}
        for z in s.zone_ids:
            for t, x in enumerate(m.conventional[(z, fuel)]):
                coeffs[x] = float(w[t])
        for f in s.synfuel:
            tau = f.yields.get(fuel, 0.0)
            if tau:
                for t, x in enumerate(m.synfuel_feed[f.id]):
                    coeffs[x] = float(w[t]) * tau
        m.fuel_balance[fuel] = m.row("fuel_balance", fuel, None, None, ">=", demand, coeffs)
    return m.fuel_balance


def build_mandate(m: Model, fuel: str, zeta: float) -> int:
    """Share ``zeta`` of the supply of ``fuel`` must be synthetic."""
    if m.mandate_row is not None:
        raise ModelError("only one synthetic fuel mandate may be set")
    if not 0.0 <= zeta <= 1.0:
        raise ModelError(f"mandate share {zeta} outside [0, 1]")
    if fuel not in m.system.liquid_fuels():
        raise ModelError(f"mandated fuel {fuel!r} is not a liquid fuel")
    w = m.w
    coeffs: dict[int, float] = {}
    for f in m.system.synfuel:
        tau = f.yields.get(fuel, 0.0)
        if tau:
            for t, x in enumerate(m.synfuel_feed[f.id]):
                coeffs[x] = (zeta - 1.0) * float(w[t]) * tau
    for z in m.system.zone_ids:
        for t, x in enumerate(m.conventional[(z, fuel)]):
            coeffs[x] = zeta * float(w[t])
    m.mandate_row = m.row("mandate", fuel, None, None, "=", 0.0, coeffs)
    return m.mandate_row


def build_coupling_terms(m: Model) -> None:
    """Electricity and hydrogen loads and the captured-CO2 draw of each plant, per step."""
    for f in m.system.synfuel:
        for t, x in enumerate(m.synfuel_feed[f.id]):
            if f.elec_in:
                m.power(f.zone, t, x, -f.elec_in)
            if f.h2_in:
                m.h2(f.zone, t, x, -f.h2_in)
            m.co2(f.zone, t, x, f.mu_capture - 1.0)


def build_fuel_emission_terms(m: Model) -> None:
    s, w = m.system, m.w
    for f in s.synfuel:
        liquid = sum(y * s.fuels[n].carbon_intensity for n, y in f.yields.items() if s.fuels[n].role == "liquid")
        byp = sum(y * s.fuels[n].carbon_intensity for n, y in f.yields.items() if s.fuels[n].role == "byproduct")
        for t, x in enumerate(m.synfuel_feed[f.id]):
            m.carbon.add(SYNFUEL_PROCESS, f.zone, x, w[t] * f.mu_emit)
            m.carbon.add(SYNFUEL_COMBUSTION, f.zone, x, w[t] * liquid)
            m.carbon.add(BYPRODUCT_COMBUSTION, f.zone, x, w[t] * byp)
    for (z, fuel), cols in m.conventional.items():
        theta = s.fuels[fuel].carbon_intensity
        for t, x in enumerate(cols):
            m.carbon.add(CONVENTIONAL_COMBUSTION, z, x, w[t] * theta)


def build_all(m: Model) -> None:
    build_synfuel_plants(m)
    build_conventional_purchases(m)
    build_liquid_fuel_costs(m)
    build_fuel_balance(m)
    for fuel, zeta in m.system.policy.mandates:
        build_mandate(m, fuel, zeta)
    build_coupling_terms(m)
    build_fuel_emission_terms(m)
