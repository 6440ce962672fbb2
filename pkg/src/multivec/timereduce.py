"""Representative-period selection by k-medoids.

Each period (a day by default) becomes one vector: every series is
min-max normalized over the year, sliced to the period, and the slices are
concatenated. Medoids are chosen with a seeded k-medoids++ start followed
by PAM swaps, so representatives are always real periods. Each medoid's
weight is the number of periods it stands for.
"""
from __future__ import annotations

import csv
import dataclasses
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from . import kernels
from .system import EnergySystem, Period, TimeGrid
from .units import HOURS_PER_YEAR


class ReductionError(ValueError):
    pass


@dataclass(frozen=True)
class ProfileBundle:
    names: tuple[str, ...]
    data: np.ndarray  # (series, hours)

    def __post_init__(self):
        data = np.atleast_2d(np.asarray(self.data, dtype=float))
        if data.shape[0] != len(self.names):
            raise ReductionError("one row of data per series name is required")
        object.__setattr__(self, "data", data)

    @property
    def hours(self) -> int:
        return self.data.shape[1]

    def normalized(self) -> np.ndarray:
        lo = self.data.min(axis=1, keepdims=True)
        span = self.data.max(axis=1, keepdims=True) - lo
        safe = np.where(span > 0, span, 1.0)
        return np.where(span > 0, (self.data - lo) / safe, 0.0)

    def series(self, name: str) -> np.ndarray:
        return self.data[self.names.index(name)]


@dataclass(frozen=True)
class Reduction:
    grid: TimeGrid
    bundle: ProfileBundle
    medoids: tuple[int, ...]  # period index of each representative, ascending
    assignment: tuple[int, ...]  # representative position for every original period
    weights: tuple[int, ...]
    period_len: int
    cost: float
    swaps: int

    def expand(self, reduced: np.ndarray) -> np.ndarray:
        """Map a reduced per-step series back onto the full horizon."""
        reduced = np.asarray(reduced)
        L = self.period_len
        return np.concatenate([reduced[a * L:(a + 1) * L] for a in self.assignment])


def _nearest_two(D: np.ndarray, medoids: np.ndarray):
    sub = D[:, medoids]
    order = np.argsort(sub, axis=1, kind="stable")
    rows = np.arange(D.shape[0])
    nearest = order[:, 0]
    second = sub[rows, order[:, 1]] if len(medoids) > 1 else np.full(D.shape[0], np.inf)
    return nearest.astype(np.int64), sub[rows, nearest], second


def kmedoids(D: np.ndarray, k: int, seed: int = 0, max_iter: int = 100) -> tuple[np.ndarray, int]:
    """Seeded k-medoids++ initialization followed by best-improvement swaps."""
    n = D.shape[0]
    rng = np.random.default_rng(seed)
    medoids = [int(rng.integers(n))]
    dmin = D[medoids[0]].copy()
    while len(medoids) < k:
        weights = dmin.copy()
        weights[medoids] = 0.0
        total = weights.sum()
        if total <= 0:
            # remaining points coincide with medoids; take the lowest free index
            taken = set(medoids)
            nxt = next(i for i in range(n) if i not in taken)
        else:
            nxt = int(rng.choice(n, p=weights / total))
        medoids.append(nxt)
        dmin = np.minimum(dmin, D[nxt])
    med = np.array(medoids, dtype=np.int64)
    swaps = 0
    if k == n:
        return np.sort(med), 0
    Dc = np.ascontiguousarray(D, dtype=float)
    scale = max(float(D.max()), 1.0)
    for _ in range(max_iter):
        pos, nd, sd = _nearest_two(Dc, med)
        i, h, delta = kernels.pam_swap(Dc, med, pos, np.ascontiguousarray(nd), np.ascontiguousarray(sd))
        if not delta < -1e-12 * scale:
            break
        med[i] = h
        swaps += 1
    return np.sort(med), swaps


def reduce(bundle: ProfileBundle, k: int, period_len: int = 24, seed: int = 0, max_iter: int = 100) -> Reduction:
    H = bundle.hours
    if period_len < 1 or H % period_len:
        raise ReductionError(f"{H} hours are not a whole number of {period_len}-hour periods")
    n = H // period_len
    if not 1 <= k <= n:
        raise ReductionError(f"k = {k} outside 1..{n}")
    X = bundle.normalized().reshape(len(bundle.names), n, period_len).transpose(1, 0, 2).reshape(n, -1)
    D = cdist(X, X, "sqeuclidean")
    medoids, swaps = kmedoids(D, k, seed, max_iter)
    # ties go to the lowest day index since medoids are sorted
    assign = np.argmin(D[:, medoids], axis=1)
    assign[medoids] = np.arange(k)
    weights = np.bincount(assign, minlength=k)
    cost = float(D[np.arange(n), medoids[assign]].sum())
    # weights are scaled so a horizon shorter than a year still represents a full year
    day_weight = HOURS_PER_YEAR / H
    periods = tuple(Period(period_len, float(w) * day_weight) for w in weights)
    cols = np.concatenate([np.arange(m * period_len, (m + 1) * period_len) for m in medoids])
    reduced = ProfileBundle(bundle.names, bundle.data[:, cols])
    return Reduction(TimeGrid(periods), reduced, tuple(int(m) for m in medoids), tuple(int(a) for a in assign),
                     tuple(int(w) for w in weights), period_len, cost, swaps)


def annual_energy_errors(original: ProfileBundle, red: Reduction) -> dict[str, float]:
    """Relative error of the weighted annual sum per series (0 when the original sums to 0)."""
    w = red.grid.weights
    out = {}
    for i, name in enumerate(original.names):
        full = float(original.data[i].sum()) * HOURS_PER_YEAR / original.hours
        approx = float(red.bundle.data[i] @ w)
        out[name] = abs(approx - full) / abs(full) if full else abs(approx)
    return out


def write_period_map(red: Reduction, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["period", "representative", "representative_period", "weight"])
        for day, a in enumerate(red.assignment):
            w.writerow([day, a, red.medoids[a], red.weights[a]])


def system_bundle(system: EnergySystem) -> ProfileBundle:
    names, rows = [], []
    for z, s in system.demand_elec.items():
        names.append(f"demand_elec/{z}")
        rows.append(s)
    for z, s in system.demand_h2.items():
        names.append(f"demand_h2/{z}")
        rows.append(s)
    for (z, f), s in system.demand_fuels.items():
        names.append(f"demand_fuels/{z}/{f}")
        rows.append(s)
    for g in system.vre:
        names.append(f"vre/{g.id}")
        rows.append(g.profile)
    for h in system.hydro:
        if h.inflow is not None:
            names.append(f"hydro/{h.id}")
            rows.append(h.inflow)
    return ProfileBundle(tuple(names), np.array(rows, dtype=float).reshape(len(rows), system.grid.n_steps))


def reduce_system(system: EnergySystem, k: int, seed: int = 0, period_len: int = 24,
                  max_iter: int = 100) -> tuple[EnergySystem, Reduction]:
    """Reduce an hourly full-year system to ``k`` representative periods."""
    grid = system.grid
    if any(p.weight != 1.0 for p in grid.periods) or grid.n_steps != HOURS_PER_YEAR:
        raise ReductionError("time reduction expects an unreduced hourly year (8760 steps of weight 1)")
    bundle = system_bundle(system)
    red = reduce(bundle, k, period_len, seed, max_iter)
    get = red.bundle.series
    changes = dict(
        grid=red.grid,
        demand_elec={z: get(f"demand_elec/{z}") for z in system.demand_elec},
        demand_h2={z: get(f"demand_h2/{z}") for z in system.demand_h2},
        demand_fuels={(z, f): get(f"demand_fuels/{z}/{f}") for z, f in system.demand_fuels},
        vre=tuple(dataclasses.replace(g, profile=get(f"vre/{g.id}")) for g in system.vre),
        hydro=tuple(dataclasses.replace(h, inflow=get(f"hydro/{h.id}")) if h.inflow is not None else h
                    for h in system.hydro),
    )
    return system.replace(**changes), red
