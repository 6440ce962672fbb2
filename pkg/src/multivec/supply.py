"""LP assembly for the power, hydrogen and CO2 supply chains.

Columns and rows carry structured names ``kind/tech/zone/t`` (``-`` for an
unused field). Balance rows are created first for every (zone, step) in
the order power, hydrogen, captured CO2, so the row order is fixed by the
zone list and the grid alone. Every objective coefficient and every
emission term is also recorded in a cost ledger and a carbon ledger so the
report can split the optimum into categories that add up exactly.
"""
from __future__ import annotations

import csv
import math
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from .lp.model import LinearProgram
from .system import HYDROGEN, EnergySystem, validate
from .units import capital_recovery_factor

INF = math.inf

# carbon ledger categories
VENTED_POWER = "vented_power"
VENTED_H2 = "vented_h2"
VENTED_DAC = "vented_dac"
SYNFUEL_PROCESS = "synfuel_process"
SYNFUEL_COMBUSTION = "synfuel_combustion"
BYPRODUCT_COMBUSTION = "byproduct_combustion"
CONVENTIONAL_COMBUSTION = "conventional_combustion"
SEQUESTERED = "sequestered"
DAC_ATMOSPHERIC = "dac_atmospheric"
EMISSION_CATEGORIES = (VENTED_POWER, VENTED_H2, VENTED_DAC, SYNFUEL_PROCESS, SYNFUEL_COMBUSTION,
                       BYPRODUCT_COMBUSTION, CONVENTIONAL_COMBUSTION)

# cost categories
COST_POWER = "power"
COST_H2 = "h2"
COST_CARBON = "carbon"
COST_CONVENTIONAL = "conventional_fuel"
COST_SYNFUEL = "synfuel"
COST_BYPRODUCT = "byproduct_credit"
COST_CATEGORIES = (COST_POWER, COST_H2, COST_CARBON, COST_CONVENTIONAL, COST_SYNFUEL, COST_BYPRODUCT)


class ModelError(ValueError):
    pass


@dataclass
class CarbonLedgerTerms:
    """Annual tonnes of CO2 per category as linear terms ``coeff * x[col]``.

    Coefficients already include the step weights. Emission categories are
    flows into the atmosphere net of point-source capture; ``sequestered``
    and ``dac_atmospheric`` are removals.
    """

    terms: list[tuple[str, str, int, float]] = field(default_factory=list)  # (category, zone, col, coeff)

    def add(self, category: str, zone: str, col: int, coeff: float) -> None:
        if coeff != 0.0:
            self.terms.append((category, zone, col, coeff))

    def cap_terms(self) -> dict[int, float]:
        """Net atmospheric emissions: emission categories minus DAC capture."""
        out: dict[int, float] = defaultdict(float)
        for cat, _, col, c in self.terms:
            if cat in EMISSION_CATEGORIES:
                out[col] += c
            elif cat == DAC_ATMOSPHERIC:
                out[col] -= c
        return dict(out)

    def totals(self, x: np.ndarray) -> dict[str, float]:
        out = {c: 0.0 for c in EMISSION_CATEGORIES + (SEQUESTERED, DAC_ATMOSPHERIC)}
        for cat, _, col, c in self.terms:
            out[cat] += c * x[col]
        return out

    def by_zone(self, x: np.ndarray) -> dict[tuple[str, str], float]:
        out: dict[tuple[str, str], float] = defaultdict(float)
        for cat, zone, col, c in self.terms:
            out[(zone, cat)] += c * x[col]
        return dict(out)


@dataclass
class CostLedger:
    terms: list[tuple[str, int, float]] = field(default_factory=list)
    offsets: dict[str, float] = field(default_factory=lambda: defaultdict(float))

    def totals(self, x: np.ndarray) -> dict[str, float]:
        out = {c: 0.0 for c in COST_CATEGORIES}
        for cat, col, c in self.terms:
            out[cat] += c * x[col]
        for cat, v in self.offsets.items():
            out[cat] += v
        return out


def _name(kind: str, tech: str | None, zone: str | None, t: int | None) -> str:
    return f"{kind}/{tech or '-'}/{zone or '-'}/{'-' if t is None else t}"


class Model:
    """An energy system being translated into a :class:`LinearProgram`."""

    def __init__(self, system: EnergySystem):
        report = validate(system)
        if not report.ok:
            raise ModelError("invalid energy system: " + "; ".join(report.violations))
        self.system = system
        self.lp = LinearProgram("multivec")
        self.T = system.grid.n_steps
        self.w = system.grid.weights
        self.steps = range(self.T)
        self.carbon = CarbonLedgerTerms()
        self.costs = CostLedger()
        self.audit: list[tuple[str, str, str, str]] = []
        self.power_balance: dict[tuple[str, int], int] = {}
        self.h2_balance: dict[tuple[str, int], int] = {}
        self.co2_balance: dict[tuple[str, int], int] = {}
        self.fuel_balance: dict[str, int] = {}
        self.mandate_row: int | None = None
        self.cap_row: int | None = None
        self.synfuel_feed: dict[str, list[int]] = {}
        self.synfuel_cap: dict[str, int] = {}
        self.conventional: dict[tuple[str, str], list[int]] = {}
        # (kind, tech, zone) -> column(s), for reporting
        self.series: dict[tuple[str, str, str], list[int]] = defaultdict(list)
        self.scalars: dict[tuple[str, str, str], int] = {}

    # primitives ------------------------------------------------------------
    def col(self, kind: str, tech: str | None, zone: str | None, t: int | None = None,
            lower: float = 0.0, upper: float = INF) -> int:
        name = _name(kind, tech, zone, t)
        j = self.lp.add_column(name, lower, upper)
        self.audit.append((name, "col", zone or "", "" if t is None else str(t)))
        key = (kind, tech or "-", zone or "-")
        if t is None:
            self.scalars[key] = j
        else:
            self.series[key].append(j)
        return j

    def row(self, kind: str, tech: str | None, zone: str | None, t: int | None, sense: str,
            rhs: float = 0.0, coeffs: dict | None = None) -> int:
        name = _name(kind, tech, zone, t)
        i = self.lp.add_row(name, sense, rhs, coeffs)
        self.audit.append((name, "row", zone or "", "" if t is None else str(t)))
        return i

    def cost(self, col: int, coeff: float, category: str) -> None:
        if coeff != 0.0:
            self.lp.add_cost(col, coeff)
            self.costs.terms.append((category, col, coeff))

    def offset(self, amount: float, category: str) -> None:
        if amount != 0.0:
            self.lp.objective_offset += amount
            self.costs.offsets[category] += amount

    def annualized(self, capex: float, lifetime: float) -> float:
        return capex * capital_recovery_factor(lifetime, self.system.discount_rate)

    def capacity(self, kind: str, tech_id: str, zone: str, capex: float, fom: float, lifetime: float,
                 category: str, existing: float = 0.0, maximum: float = INF) -> int:
        """Capacity column with annualized capex; existing capacity pays fom only."""
        if existing > maximum:
            raise ModelError(f"{tech_id}: existing capacity exceeds maximum")
        c = self.col(kind, tech_id, zone, None, existing, maximum)
        ann = self.annualized(capex, lifetime)
        self.cost(c, ann + fom, category)
        self.offset(-ann * existing, category)
        return c

    def fuel(self, name: str):
        return self.system.fuels[name]

    # balances --------------------------------------------------------------
    def add_balances(self) -> None:
        s = self.system
        n = self.T
        zeros = np.zeros(n)
        for z in s.zone_ids:
            d = s.demand_elec.get(z, zeros)
            for t in self.steps:
                self.power_balance[(z, t)] = self.row("power_balance", None, z, t, "=", float(d[t]))
        for z in s.zone_ids:
            d = s.demand_h2.get(z, zeros)
            for t in self.steps:
                self.h2_balance[(z, t)] = self.row("h2_balance", None, z, t, "=", float(d[t]))
        for z in s.zone_ids:
            for t in self.steps:
                self.co2_balance[(z, t)] = self.row("co2_balance", None, z, t, "=", 0.0)

    def power(self, z: str, t: int, col: int, coeff: float) -> None:
        """Positive ``coeff`` supplies electricity, negative consumes it."""
        self.lp.add_coeff(self.power_balance[(z, t)], col, coeff)

    def h2(self, z: str, t: int, col: int, coeff: float) -> None:
        self.lp.add_coeff(self.h2_balance[(z, t)], col, coeff)

    def co2(self, z: str, t: int, col: int, coeff: float) -> None:
        """Positive ``coeff`` adds captured CO2 to the zone's stream, negative withdraws it."""
        self.lp.add_coeff(self.co2_balance[(z, t)], col, coeff)

    def storage_block(self, kind: str, tech_id: str, zone: str, efficiency: float, cap_charge: int,
                      cap_energy: int, sink) -> tuple[list[int], list[int]]:
        """Charge/discharge/state columns with a cyclic state per period."""
        ch = [self.col(f"{kind}_charge", tech_id, zone, t) for t in self.steps]
        dis = [self.col(f"{kind}_discharge", tech_id, zone, t) for t in self.steps]
        soc = [self.col(f"{kind}_level", tech_id, zone, t) for t in self.steps]
        for t in self.steps:
            self.row(f"{kind}_charge_cap", tech_id, zone, t, "<=", 0.0, {ch[t]: 1.0, cap_charge: -1.0})
            self.row(f"{kind}_discharge_cap", tech_id, zone, t, "<=", 0.0, {dis[t]: 1.0, cap_charge: -1.0})
            self.row(f"{kind}_level_cap", tech_id, zone, t, "<=", 0.0, {soc[t]: 1.0, cap_energy: -1.0})
        for sl in self.system.grid.period_slices():
            for t in range(sl.start, sl.stop):
                prev = sl.stop - 1 if t == sl.start else t - 1
                coeffs = {soc[t]: 1.0, ch[t]: -efficiency, dis[t]: 1.0}
                coeffs[soc[prev]] = coeffs.get(soc[prev], 0.0) - 1.0
                self.row(f"{kind}_level_balance", tech_id, zone, t, "=", 0.0, coeffs)
        for t in self.steps:
            sink(zone, t, ch[t], -1.0)
            sink(zone, t, dis[t], 1.0)
        return ch, dis

    def flow_block(self, kind: str, tech_id: str, zone_from: str, zone_to: str, cap: int, sink) -> list[int]:
        """Free-direction lossless flow bounded by a symmetric capacity."""
        flows = [self.col(f"{kind}_flow", tech_id, f"{zone_from}>{zone_to}", t, -INF, INF) for t in self.steps]
        for t in self.steps:
            self.row(f"{kind}_flow_fwd", tech_id, None, t, "<=", 0.0, {flows[t]: 1.0, cap: -1.0})
            self.row(f"{kind}_flow_rev", tech_id, None, t, ">=", 0.0, {flows[t]: 1.0, cap: 1.0})
            sink(zone_from, t, flows[t], -1.0)
            sink(zone_to, t, flows[t], 1.0)
        return flows

    def write_audit(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["name", "kind", "zone", "t"])
            w.writerows(self.audit)


def build_power(m: Model) -> None:
    s = m.system
    w = m.w
    for g in s.thermal:
        cap = m.capacity("capacity", g.id, g.zone, g.capex, g.fom, g.lifetime, COST_POWER,
                         g.existing_capacity, g.max_capacity)
        if g.fuel == HYDROGEN:
            price, theta = 0.0, 0.0
        else:
            f = m.fuel(g.fuel)
            price, theta = f.price, f.carbon_intensity
        for t in m.steps:
            gen = m.col("generation", g.id, g.zone, t)
            m.row("generation_cap", g.id, g.zone, t, "<=", 0.0, {gen: 1.0, cap: -1.0})
            m.cost(gen, w[t] * (g.vom + g.heat_rate * price), COST_POWER)
            m.power(g.zone, t, gen, 1.0)
            if g.fuel == HYDROGEN:
                m.h2(g.zone, t, gen, -g.heat_rate)
                continue
            burned = theta * g.heat_rate
            m.carbon.add(VENTED_POWER, g.zone, gen, w[t] * burned * (1.0 - g.capture_rate))
            if g.capture_rate > 0:
                m.co2(g.zone, t, gen, burned * g.capture_rate)
    for g in s.vre:
        cap = m.capacity("capacity", g.id, g.zone, g.capex, g.fom, g.lifetime, COST_POWER,
                         g.existing_capacity, g.max_capacity)
        for t in m.steps:
            gen = m.col("generation", g.id, g.zone, t)
            m.row("generation_cap", g.id, g.zone, t, "<=", 0.0, {gen: 1.0, cap: -float(g.profile[t])})
            m.cost(gen, w[t] * g.vom, COST_POWER)
            m.power(g.zone, t, gen, 1.0)
    for h in s.hydro:
        m.offset(h.fom * h.capacity, COST_POWER)
        gens = [m.col("generation", h.id, h.zone, t, 0.0, h.capacity) for t in m.steps]
        for t in m.steps:
            m.power(h.zone, t, gens[t], 1.0)
        if h.inflow is not None:
            for p, sl in enumerate(s.grid.period_slices()):
                m.row("hydro_energy", h.id, h.zone, p, "<=", float(np.sum(h.inflow[sl])),
                      {gens[t]: 1.0 for t in range(sl.start, sl.stop)})
    for st in s.storage:
        capp = m.capacity("power_capacity", st.id, st.zone, st.power_capex, st.fom, st.lifetime, COST_POWER,
                          0.0, st.max_power)
        cape = m.capacity("energy_capacity", st.id, st.zone, st.energy_capex, 0.0, st.lifetime, COST_POWER)
        m.storage_block("storage", st.id, st.zone, st.round_trip_efficiency, capp, cape, m.power)
    for ln in s.lines:
        cap = m.capacity("capacity", ln.id, None, ln.capex, 0.0, ln.lifetime, COST_POWER,
                         ln.existing_capacity, ln.max_capacity)
        m.flow_block("line", ln.id, ln.zone_from, ln.zone_to, cap, m.power)


def build_hydrogen(m: Model) -> None:
    s = m.system
    w = m.w
    for h in s.h2_techs:
        cap = m.capacity("capacity", h.id, h.zone, h.capex, h.fom, h.lifetime, COST_H2, 0.0, h.max_capacity)
        if h.gas_input > 0:
            f = m.fuel(h.gas_fuel)
            price, theta = f.price, f.carbon_intensity
        else:
            price, theta = 0.0, 0.0
        for t in m.steps:
            prod = m.col("h2_production", h.id, h.zone, t)
            m.row("h2_production_cap", h.id, h.zone, t, "<=", 0.0, {prod: 1.0, cap: -1.0})
            m.cost(prod, w[t] * (h.vom + h.gas_input * price), COST_H2)
            m.h2(h.zone, t, prod, 1.0)
            if h.electricity_input:
                m.power(h.zone, t, prod, -h.electricity_input)
            burned = theta * h.gas_input
            if burned:
                m.carbon.add(VENTED_H2, h.zone, prod, w[t] * burned * (1.0 - h.capture_rate))
                if h.capture_rate > 0:
                    m.co2(h.zone, t, prod, burned * h.capture_rate)
    for st in s.h2_storage:
        capc = m.capacity("charge_capacity", st.id, st.zone, st.charge_capex, 0.0, st.lifetime, COST_H2)
        cape = m.capacity("energy_capacity", st.id, st.zone, st.energy_capex, st.fom, st.lifetime, COST_H2)
        m.storage_block("h2_storage", st.id, st.zone, st.efficiency, capc, cape, m.h2)
    for p in s.h2_pipelines:
        cap = m.capacity("capacity", p.id, None, p.capex_per_unit, p.fom, p.lifetime, COST_H2, 0.0, p.max_capacity)
        m.flow_block("h2_pipe", p.id, p.zone_from, p.zone_to, cap, m.h2)


def injection_limit(system: EnergySystem, zone_id: str) -> float:
    if not system.policy.co2_storage_enabled:
        return 0.0
    return system.zone(zone_id).co2_injection_limit


def build_carbon(m: Model) -> None:
    s = m.system
    w = m.w
    for d in s.dac:
        cap = m.capacity("capacity", d.id, d.zone, d.capex, d.fom, d.lifetime, COST_CARBON, 0.0, d.max_capacity)
        if d.gas_input > 0:
            f = m.fuel(d.gas_fuel)
            price, theta = f.price, f.carbon_intensity
        else:
            price, theta = 0.0, 0.0
        burned = theta * d.gas_input
        for t in m.steps:
            capt = m.col("dac_capture", d.id, d.zone, t)
            m.row("dac_capture_cap", d.id, d.zone, t, "<=", 0.0, {capt: 1.0, cap: -1.0})
            m.cost(capt, w[t] * (d.vom + d.gas_input * price), COST_CARBON)
            if d.electricity_input:
                m.power(d.zone, t, capt, -d.electricity_input)
            m.co2(d.zone, t, capt, 1.0 + burned * d.combustion_capture_rate)
            m.carbon.add(DAC_ATMOSPHERIC, d.zone, capt, w[t])
            m.carbon.add(VENTED_DAC, d.zone, capt, w[t] * burned * (1.0 - d.combustion_capture_rate))
    for z in s.zone_ids:
        limit = injection_limit(s, z)
        if limit <= 0:
            continue
        sc = s.co2_storage_cost(z)
        cap = m.capacity("injection_capacity", "co2_storage", z, sc.capex, sc.fom, sc.lifetime, COST_CARBON,
                         0.0, limit)
        inj = [m.col("injection", "co2_storage", z, t) for t in m.steps]
        coeffs = {inj[t]: float(w[t]) for t in m.steps}
        coeffs[cap] = -1.0
        m.row("injection_annual", "co2_storage", z, None, "<=", 0.0, coeffs)
        for t in m.steps:
            m.co2(z, t, inj[t], -1.0)
            if sc.electricity_input:
                m.power(z, t, inj[t], -sc.electricity_input)
            m.carbon.add(SEQUESTERED, z, inj[t], w[t])
    for p in s.co2_pipelines:
        cap = m.capacity("capacity", p.id, None, p.capex_per_unit, p.fom, p.lifetime, COST_CARBON, 0.0,
                         p.max_capacity)
        m.flow_block("co2_pipe", p.id, p.zone_from, p.zone_to, cap, m.co2)


def build_emissions_cap(m: Model) -> int | None:
    """Joint cap on net atmospheric emissions; ``None`` when the cap is infinite."""
    cap = m.system.policy.emissions_cap
    if math.isinf(cap):
        return None
    m.cap_row = m.row("emissions_cap", None, None, None, "<=", cap, m.carbon.cap_terms())
    return m.cap_row


def build_model(system: EnergySystem) -> Model:
    """Assemble and finalize the full LP for ``system``."""
    from . import liquid_fuels

    m = Model(system)
    m.add_balances()
    build_power(m)
    build_hydrogen(m)
    build_carbon(m)
    liquid_fuels.build_all(m)
    build_emissions_cap(m)
    m.lp.finalize()
    return m
