"""Plot-ready summaries of a solved model.

A report is a pure function of the model and its solution. Every number
written to disk goes through :func:`fmt` (9 significant digits) and every
table is sorted, so identical inputs give byte-identical files.
"""
from __future__ import annotations

import csv
import json
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .lp import Solution
from .supply import (
    COST_CATEGORIES,
    DAC_ATMOSPHERIC,
    EMISSION_CATEGORIES,
    SEQUESTERED,
    Model,
)
from .system import NATURAL_GAS

CAP_BINDING_TOL = 1e-9


class ReportError(RuntimeError):
    def __init__(self, status: str):
        super().__init__(f"cannot report on a solution with status {status!r}")
        self.status = status


@dataclass
class SystemReport:
    power_generation: dict[tuple[str, str], float]  # (zone, class) -> MWh/y
    h2_production: dict[tuple[str, str], float]  # (zone, class) -> t/y
    co2_balance: dict[str, float]  # category -> t/y
    costs: dict[str, float]  # category -> EUR/y
    objective: float
    marginal_abatement: float  # EUR/t
    emissions_cap: float
    fuel_consumption: dict[str, float]  # MWh/y
    fuel_supply: dict[str, dict[str, float]]  # fuel -> {conventional, synthetic, demand}
    prices: dict[tuple[str, str, int], float] = field(default_factory=dict)  # (vector, zone, t) -> EUR/unit

    @property
    def co2_outflows(self) -> dict[str, float]:
        keys = EMISSION_CATEGORIES + (SEQUESTERED,)
        return {k: self.co2_balance[k] for k in keys}

    @property
    def net_emissions(self) -> float:
        """Outflows minus sequestered and DAC atmospheric capture."""
        out = self.co2_outflows
        return sum(out.values()) - self.co2_balance[SEQUESTERED] - self.co2_balance[DAC_ATMOSPHERIC]

    def generation_by_class(self) -> dict[str, float]:
        out: dict[str, float] = defaultdict(float)
        for (_, cls), v in self.power_generation.items():
            out[cls] += v
        return dict(sorted(out.items()))

    def h2_by_class(self) -> dict[str, float]:
        out: dict[str, float] = defaultdict(float)
        for (_, cls), v in self.h2_production.items():
            out[cls] += v
        return dict(sorted(out.items()))

    @property
    def liquid_fossil(self) -> float:
        return self.fuel_consumption.get("liquid_fossil", 0.0)

    @property
    def natural_gas(self) -> float:
        return self.fuel_consumption.get(NATURAL_GAS, 0.0)


def _weighted(m: Model, cols: list[int], x: np.ndarray) -> float:
    return float(m.w @ x[cols])


def build_report(model: Model, solution: Solution) -> SystemReport:
    if not solution.optimal:
        raise ReportError(solution.status)
    m, x, s = model, solution.x, model.system
    classes = s.tech_classes

    gen: dict[tuple[str, str], float] = defaultdict(float)
    h2: dict[tuple[str, str], float] = defaultdict(float)
    for (kind, tech, zone), cols in m.series.items():
        if kind == "generation":
            gen[(zone, classes.get(tech, tech))] += _weighted(m, cols, x)
        elif kind == "h2_production":
            h2[(zone, classes.get(tech, tech))] += _weighted(m, cols, x)

    co2 = m.carbon.totals(x)
    costs = m.costs.totals(x)

    gas = 0.0
    for g in s.thermal:
        if g.fuel == NATURAL_GAS:
            gas += g.heat_rate * _weighted(m, m.series[("generation", g.id, g.zone)], x)
    for h in s.h2_techs:
        if h.gas_input and h.gas_fuel == NATURAL_GAS:
            gas += h.gas_input * _weighted(m, m.series[("h2_production", h.id, h.zone)], x)
    for d in s.dac:
        if d.gas_input and d.gas_fuel == NATURAL_GAS:
            gas += d.gas_input * _weighted(m, m.series[("dac_capture", d.id, d.zone)], x)

    supply: dict[str, dict[str, float]] = {}
    liquid_fossil = 0.0
    for fuel in s.liquid_fuels():
        conv = sum(_weighted(m, cols, x) for (z, f), cols in m.conventional.items() if f == fuel)
        syn = sum(f.yields.get(fuel, 0.0) * _weighted(m, m.synfuel_feed[f.id], x) for f in s.synfuel)
        demand = sum(float(m.w @ arr) for (z, f), arr in s.demand_fuels.items() if f == fuel)
        supply[fuel] = {"conventional": conv, "synthetic": syn, "demand": demand}
        liquid_fossil += conv
    for fuel in s.byproducts():
        syn = sum(f.yields.get(fuel, 0.0) * _weighted(m, m.synfuel_feed[f.id], x) for f in s.synfuel)
        supply[fuel] = {"conventional": 0.0, "synthetic": syn, "demand": 0.0}

    mac = 0.0
    if m.cap_row is not None:
        dual = -float(solution.row_duals[m.cap_row])
        mac = dual if dual > 0 else 0.0

    prices = {}
    for vector, rows in (("power", m.power_balance), ("h2", m.h2_balance), ("co2", m.co2_balance)):
        for (z, t), i in rows.items():
            prices[(vector, z, t)] = float(solution.row_duals[i]) / float(m.w[t])

    return SystemReport(
        power_generation=dict(sorted(gen.items())), h2_production=dict(sorted(h2.items())),
        co2_balance=co2, costs=costs, objective=float(solution.objective), marginal_abatement=mac,
        emissions_cap=s.policy.emissions_cap,
        fuel_consumption={NATURAL_GAS: gas, "liquid_fossil": liquid_fossil},
        fuel_supply=supply, prices=prices,
    )


def check_report(report: SystemReport, rel: float = 1e-6) -> list[str]:
    """Ledger identities that every report must satisfy."""
    problems = []
    total = sum(report.costs.values())
    if abs(total - report.objective) > rel * max(1.0, abs(report.objective)):
        problems.append(f"cost categories sum to {total}, objective is {report.objective}")
    cap = report.emissions_cap
    if np.isfinite(cap):
        net = report.net_emissions
        slack = rel * max(1.0, abs(cap))
        if net > cap + slack:
            problems.append(f"net emissions {net} exceed the cap {cap}")
        if report.marginal_abatement > CAP_BINDING_TOL and abs(net - cap) > slack:
            problems.append(f"cap has a dual but net emissions {net} differ from the cap {cap}")
    return problems


# ---------------------------------------------------------------------------
# files

def fmt(v: float) -> str:
    v = float(v)
    if v == 0.0:
        return "0"
    return f"{v:.9g}"


def _write(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([c if isinstance(c, str) else fmt(c) for c in r])


OUTPUT_FILES = ("generation.csv", "h2.csv", "co2_balance.csv", "costs.csv", "prices.csv", "fuels.csv")


def write_outputs(report: SystemReport, out_dir, manifest: dict | None = None) -> list[Path]:
    root = Path(out_dir)
    root.mkdir(parents=True, exist_ok=True)
    _write(root / "generation.csv", ["zone", "class", "mwh"],
           [(z, c, v) for (z, c), v in report.power_generation.items()])
    _write(root / "h2.csv", ["zone", "class", "tonne"],
           [(z, c, v) for (z, c), v in report.h2_production.items()])
    rows = [("outflow", k, v) for k, v in report.co2_outflows.items()]
    rows.append(("removal", SEQUESTERED, report.co2_balance[SEQUESTERED]))
    rows.append(("removal", DAC_ATMOSPHERIC, report.co2_balance[DAC_ATMOSPHERIC]))
    rows.append(("net", "net_emissions", report.net_emissions))
    rows.append(("policy", "emissions_cap", report.emissions_cap))
    rows.append(("policy", "marginal_abatement_eur_per_t", report.marginal_abatement))
    _write(root / "co2_balance.csv", ["direction", "category", "tonne"], rows)
    rows = [(k, report.costs[k]) for k in COST_CATEGORIES]
    rows.append(("total", report.objective))
    _write(root / "costs.csv", ["category", "eur_per_year"], rows)
    _write(root / "prices.csv", ["vector", "zone", "t", "price"],
           [(v, z, str(t), p) for (v, z, t), p in sorted(report.prices.items())])
    rows = [(f, d["conventional"], d["synthetic"], d["demand"]) for f, d in sorted(report.fuel_supply.items())]
    _write(root / "fuels.csv", ["fuel", "conventional_mwh", "synthetic_mwh", "demand_mwh"], rows)
    _write(root / "fuel_consumption.csv", ["fuel", "mwh"], sorted(report.fuel_consumption.items()))
    paths = [root / f for f in OUTPUT_FILES] + [root / "fuel_consumption.csv"]
    if manifest is not None:
        path = root / "run_manifest.json"
        path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        paths.append(path)
    return paths
