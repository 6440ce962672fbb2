"""Scenario pipeline: demand, time reduction, model build, solve, report.

A scenario starts from a full-year hourly system directory and an optional
transport directory. Levers move HDV diesel service to hydrogen, require a
synthetic share of diesel, switch CO2 storage off, scale the gas price or
override the emissions cap.
"""
from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import demand as dm
from . import kernels
from .io import InputError, load_system, read_table
from .lp import OPTIMAL, INFEASIBLE, SolveOptions, SolverError, solve, write_mps
from .reporting import ReportError, SystemReport, build_report, fmt, write_outputs
from .supply import Model, ModelError, build_model
from .system import NATURAL_GAS, EnergySystem
from .timereduce import Reduction, ReductionError, reduce_system, write_period_map
from .units import HOURS_PER_YEAR, MJ_PER_MWH, UnitError

log = logging.getLogger(__name__)

H2_LEVELS = {"none": 0.0, "medium": 0.5, "high": 1.0}
SF_LEVELS = {"none": 0.0, "medium": 0.25, "high": 0.5}
STORAGE_LEVELS = ("none", "baseline")

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_INPUT = 3
EXIT_LIMIT = 4

INPUT_ERRORS = (InputError, ModelError, dm.DemandError, ReductionError, UnitError)


@dataclass(frozen=True)
class ScenarioSpec:
    system: Path
    transport: Path | None = None
    h2_hdv: str = "none"
    sf: str = "none"
    storage: str = "baseline"
    ng_mult: float = 1.0
    cap: float | None = None
    rep_days: int | None = 3
    seed: int = 0
    id: str = "scenario"
    max_iters: int | None = None
    hdv_group: str = "HDV"
    mandate_fuel: str = "diesel"

    def check(self) -> None:
        if self.h2_hdv not in H2_LEVELS:
            raise InputError(f"h2_hdv level {self.h2_hdv!r} not one of {sorted(H2_LEVELS)}")
        if self.sf not in SF_LEVELS:
            raise InputError(f"sf level {self.sf!r} not one of {sorted(SF_LEVELS)}")
        if self.storage not in STORAGE_LEVELS:
            raise InputError(f"storage {self.storage!r} not one of {list(STORAGE_LEVELS)}")
        if not self.ng_mult >= 0:
            raise InputError(f"ng_mult must be >= 0, got {self.ng_mult}")
        if self.cap is not None and not self.cap >= 0:
            raise InputError(f"cap must be >= 0, got {self.cap}")
        if self.rep_days is not None and self.rep_days < 1:
            raise InputError(f"rep_days must be >= 1, got {self.rep_days}")

    def options(self) -> SolveOptions:
        opts = SolveOptions(seed=self.seed)
        if self.max_iters is not None:
            opts = dataclasses.replace(opts, max_iters=self.max_iters)
        return opts


@dataclass
class Prepared:
    system: EnergySystem
    reduction: Reduction | None
    zeta: float
    input_hash: str


@dataclass
class ScenarioResult:
    spec: ScenarioSpec
    status: str
    exit_code: int
    objective: float = math.nan
    report: SystemReport | None = None
    certificate: list[str] = field(default_factory=list)
    message: str = ""
    prepared: Prepared | None = None
    model: Model | None = None
    solution: object = None

    def summary_row(self) -> dict[str, str]:
        r = self.report
        return {
            "id": self.spec.id, "status": self.status, "exit_code": str(self.exit_code),
            "objective": fmt(self.objective) if math.isfinite(self.objective) else "",
            "marginal_abatement": fmt(r.marginal_abatement) if r else "",
            "natural_gas_mwh": fmt(r.natural_gas) if r else "",
            "liquid_fossil_mwh": fmt(r.liquid_fossil) if r else "",
        }


def _dir_fingerprint(path: Path) -> tuple:
    return tuple((p.name, p.stat().st_size, p.stat().st_mtime_ns) for p in sorted(path.iterdir()) if p.is_file())


@lru_cache(maxsize=8)
def _cached_system(path: str, fingerprint: tuple) -> EnergySystem:
    return load_system(path)


@lru_cache(maxsize=8)
def _cached_transport(path: str, fingerprint: tuple, n_steps: int) -> dm.TransportScenario:
    from .system import TimeGrid

    return dm.load_transport(path, TimeGrid.uniform(n_steps, 24, HOURS_PER_YEAR))


def input_hash(*paths: Path | None) -> str:
    h = hashlib.sha256()
    for root in paths:
        if root is None:
            continue
        for p in sorted(Path(root).iterdir()):
            if p.is_file():
                h.update(p.name.encode())
                h.update(b"\0")
                h.update(p.read_bytes())
    return h.hexdigest()


def hdv_diesel_mwh(scn: dm.TransportScenario, group: str, fuel: str = "diesel") -> float:
    """Annual ``fuel`` use of the group's pure ``fuel`` drivetrain."""
    total = 0.0
    for (vehicle, _zone, f), mj in dm.annual_energy_mj(scn, drivetrain=fuel).items():
        v = scn.vehicle(vehicle)
        if f == fuel and group in (v.group, v.name, v.category):
            total += mj / MJ_PER_MWH
    return total


def prepare(spec: ScenarioSpec) -> Prepared:
    spec.check()
    sys_path = Path(spec.system)
    if not sys_path.is_dir():
        raise InputError(f"system directory {sys_path} does not exist")
    system = _cached_system(str(sys_path.resolve()), _dir_fingerprint(sys_path))
    zeta = 0.0
    if spec.transport is not None:
        tpath = Path(spec.transport)
        if not tpath.is_dir():
            raise InputError(f"transport directory {tpath} does not exist")
        if system.grid.n_steps != HOURS_PER_YEAR:
            raise InputError("transport demand is synthesized on an hourly year; the system grid is not one")
        scn = _cached_transport(str(tpath.resolve()), _dir_fingerprint(tpath), system.grid.n_steps)
        base_hdv = hdv_diesel_mwh(scn, spec.hdv_group, spec.mandate_fuel)
        if H2_LEVELS[spec.h2_hdv] > 0:
            scn = dm.apply_fuel_switch(scn, spec.hdv_group, spec.mandate_fuel, "h2", H2_LEVELS[spec.h2_hdv])
        system = dm.add_transport_demand(system, dm.compute_energy_demand(scn, system.grid))
        total = sum(float(a.sum()) for (z, f), a in system.demand_fuels.items() if f == spec.mandate_fuel)
        if SF_LEVELS[spec.sf] > 0:
            if total <= 0:
                raise InputError(f"no {spec.mandate_fuel} demand to apply a synthetic fuel share to")
            zeta = min(SF_LEVELS[spec.sf] * base_hdv / total, 1.0)
    elif SF_LEVELS[spec.sf] > 0 or H2_LEVELS[spec.h2_hdv] > 0:
        raise InputError("H2 and synthetic fuel levers need a transport scenario")
    mandates = ((spec.mandate_fuel, zeta),) if spec.mandate_fuel in system.liquid_fuels() else ()
    policy = {"mandates": mandates, "co2_storage_enabled": spec.storage == "baseline"}
    if spec.cap is not None:
        policy["emissions_cap"] = float(spec.cap)
    system = system.with_policy(**policy)
    if spec.ng_mult != 1.0:
        if NATURAL_GAS not in system.fuels:
            raise InputError("ng_mult given but the system has no natural_gas fuel")
        system = system.with_fuel_price(NATURAL_GAS, spec.ng_mult)
    reduction = None
    if spec.rep_days is not None:
        system, reduction = reduce_system(system, spec.rep_days, seed=spec.seed)
    return Prepared(system, reduction, zeta, input_hash(sys_path, spec.transport))


def solve_system(system: EnergySystem, options: SolveOptions | None = None):
    model = build_model(system)
    return model, solve(model.lp, options)


def _manifest(spec: ScenarioSpec, prep: Prepared, model: Model, sol, opts: SolveOptions) -> dict:
    return {
        "scenario": {
            "id": spec.id, "h2_hdv": spec.h2_hdv, "sf": spec.sf, "storage": spec.storage,
            "ng_mult": spec.ng_mult, "cap": spec.cap, "rep_days": spec.rep_days, "zeta": prep.zeta,
        },
        "inputs_sha256": prep.input_hash,
        "seed": spec.seed,
        "tolerances": dataclasses.asdict(opts),
        "kernel_backend": kernels.BACKEND,
        "lp": {"rows": model.lp.n_rows, "cols": model.lp.n_cols, "nonzeros": int(model.lp.A.nnz)},
        "status": sol.status,
        "objective": fmt(sol.objective) if math.isfinite(sol.objective) else None,
        "iterations": sol.iterations,
    }


def run_scenario(spec: ScenarioSpec, out_dir=None, export_mps=None) -> ScenarioResult:
    try:
        prep = prepare(spec)
        model = build_model(prep.system)
    except INPUT_ERRORS as exc:
        return ScenarioResult(spec, "input-error", EXIT_INPUT, message=str(exc))
    out = Path(out_dir) if out_dir is not None else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        model.write_audit(out / "lp_names.csv")
        if prep.reduction is not None:
            write_period_map(prep.reduction, out / "period_map.csv")
    if export_mps is not None:
        write_mps(model.lp, export_mps)
    opts = spec.options()
    try:
        sol = solve(model.lp, opts)
    except SolverError as exc:
        return ScenarioResult(spec, "solver-error", EXIT_LIMIT, message=str(exc), prepared=prep, model=model)
    result = ScenarioResult(spec, sol.status, EXIT_OK, sol.objective, prepared=prep, model=model, solution=sol)
    if sol.status == OPTIMAL:
        try:
            result.report = build_report(model, sol)
        except ReportError as exc:  # pragma: no cover - guarded by the status check
            result.message = str(exc)
        if out is not None:
            write_outputs(result.report, out, _manifest(spec, prep, model, sol, opts))
        return result
    if sol.status == INFEASIBLE:
        result.exit_code = EXIT_INFEASIBLE
        result.certificate = list(sol.certificate)
        result.message = "infeasible; certificate rows: " + ", ".join(sol.certificate)
    else:
        result.exit_code = EXIT_LIMIT
        result.message = f"solver stopped with status {sol.status}"
    if out is not None:
        if result.certificate:
            (out / "infeasibility_certificate.txt").write_text("\n".join(result.certificate) + "\n", encoding="utf-8")
        (out / "run_manifest.json").write_text(
            json.dumps(_manifest(spec, prep, model, sol, opts), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return result


# ---------------------------------------------------------------------------
# matrices

SUMMARY_COLUMNS = ["id", "status", "exit_code", "objective", "marginal_abatement", "natural_gas_mwh",
                   "liquid_fossil_mwh"]


def read_specs(path, system: Path, transport: Path | None, rep_days: int | None = 3, seed: int = 0,
               max_iters: int | None = None) -> list[ScenarioSpec]:
    tab = read_table(path, ("id",), ("h2_hdv", "sf", "storage", "ng_mult", "cap", "rep_days", "seed",
                                     "system", "transport"))
    specs, seen = [], set()
    base = Path(path).parent
    for ln, r in tab:
        sid = tab.text(ln, r, "id")
        if sid in seen:
            raise InputError(f"{tab.where(ln)}: duplicate scenario id {sid!r}")
        seen.add(sid)
        sys_dir = tab.text(ln, r, "system", "")
        tr_dir = tab.text(ln, r, "transport", "")
        cap = tab.num(ln, r, "cap", math.nan)
        specs.append(ScenarioSpec(
            system=base / sys_dir if sys_dir else system,
            transport=(base / tr_dir if tr_dir else transport),
            h2_hdv=tab.text(ln, r, "h2_hdv", "none"), sf=tab.text(ln, r, "sf", "none"),
            storage=tab.text(ln, r, "storage", "baseline"), ng_mult=tab.num(ln, r, "ng_mult", 1.0),
            cap=None if math.isnan(cap) else cap, rep_days=int(tab.num(ln, r, "rep_days", rep_days or 0)) or None,
            seed=int(tab.num(ln, r, "seed", seed)), id=sid, max_iters=max_iters,
        ))
    return specs


def _run_one(args) -> dict[str, str]:
    spec, out_dir = args
    try:
        res = run_scenario(spec, out_dir)
    except Exception as exc:  # recorded, the matrix carries on
        log.exception("scenario %s failed", spec.id)
        return {**{k: "" for k in SUMMARY_COLUMNS}, "id": spec.id, "status": f"error: {exc}",
                "exit_code": "1"}
    return res.summary_row()


def worker_count(workers: int | None = None) -> int:
    if workers is None:
        workers = int(os.environ.get("MULTIVEC_THREADS", "1") or 1)
    return max(1, workers)


def run_matrix(specs: list[ScenarioSpec], out_dir, workers: int | None = None) -> Path:
    """Run every scenario into ``out_dir/<id>`` and write ``summary.csv``."""
    root = Path(out_dir)
    root.mkdir(parents=True, exist_ok=True)
    ids = [s.id for s in specs]
    if len(set(ids)) != len(ids):
        raise InputError("duplicate scenario ids in matrix")
    jobs = [(s, root / s.id) for s in specs]
    n = worker_count(workers)
    if n > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(n, len(jobs))) as pool:
            rows = list(pool.map(_run_one, jobs))
    else:
        rows = [_run_one(j) for j in jobs]
    path = root / "summary.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, SUMMARY_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return path


def balance_residuals(model: Model, x: np.ndarray) -> dict[str, float]:
    """Max scaled residual of the power, H2 and CO2 balance rows.

    Each residual is divided by ``max(1, |rhs|, max|a_ij x_j|)`` of its row.
    """
    A = model.lp.A.tocsr()
    out = {}
    for name, rows in (("power", model.power_balance), ("h2", model.h2_balance), ("co2", model.co2_balance)):
        idx = np.array(sorted(rows.values()), dtype=np.int64)
        if idx.size == 0:
            out[name] = 0.0
            continue
        sub = A[idx]
        act = sub @ x
        terms = abs(sub).multiply(np.abs(x)).max(axis=1).toarray().ravel()
        rhs = model.lp.rhs[idx]
        scale = np.maximum.reduce([np.ones_like(rhs), np.abs(rhs), terms])
        out[name] = float(np.max(np.abs(act - rhs) / scale))
    return out
