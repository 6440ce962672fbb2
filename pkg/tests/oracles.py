"""Independent reference computations used by the tests.

Nothing here imports the package under test.
"""
from __future__ import annotations

import itertools
import math

import numpy as np


def vertex_enumeration_min(c, A, sense, b, lo, hi, tol=1e-9):
    """Brute-force LP minimum over all vertices of a bounded polytope.

    Returns ``None`` when no vertex is feasible (the LP is infeasible).
    Every vertex is the solution of ``n`` linearly independent active
    constraints drawn from rows and variable bounds; equality rows are
    always active.
    """
    c = np.asarray(c, float)
    A = np.asarray(A, float).reshape(-1, len(c))
    b = np.asarray(b, float)
    n = len(c)
    empty = ~np.any(A != 0, axis=1)
    for i in np.flatnonzero(empty):
        s, r = sense[i], b[i]
        if (s == "<=" and r < 0) or (s == ">=" and r > 0) or (s == "=" and r != 0):
            return None
    keep = np.flatnonzero(~empty)
    A, b = A[keep], b[keep]
    sense = [sense[i] for i in keep]
    cons_a, cons_b = [], []
    for i in range(A.shape[0]):
        cons_a.append(A[i])
        cons_b.append(b[i])
    eq = [i for i, s in enumerate(sense) if s == "="]
    optional = [i for i, s in enumerate(sense) if s != "="]
    eye = np.eye(n)
    for j in range(n):
        cons_a.append(eye[j])
        cons_b.append(lo[j])
        optional.append(len(cons_a) - 1)
        cons_a.append(eye[j])
        cons_b.append(hi[j])
        optional.append(len(cons_a) - 1)
    cons_a = np.array(cons_a)
    cons_b = np.array(cons_b)
    need = n - len(eq)
    if need < 0:
        # more equalities than variables: try every n-subset of them plus nothing else
        combos = [list(cmb) for cmb in itertools.combinations(eq, n)]
    else:
        combos = [eq + list(cmb) for cmb in itertools.combinations(optional, need)]
    if not combos:
        return None
    idx = np.array(combos)
    mats = cons_a[idx]
    rhs = cons_b[idx]
    dets = np.linalg.det(mats)
    ok = np.abs(dets) > 1e-10
    if not ok.any():
        return None
    pts = np.linalg.solve(mats[ok], rhs[ok][..., None])[..., 0]
    act = pts @ A.T if A.size else np.zeros((len(pts), 0))
    scale = 1.0 + np.abs(b)
    feas = np.all(pts >= np.asarray(lo) - tol, axis=1) & np.all(pts <= np.asarray(hi) + tol, axis=1)
    for i, s in enumerate(sense):
        r = act[:, i] - b[i]
        if s == "<=":
            feas &= r <= tol * scale[i]
        elif s == ">=":
            feas &= r >= -tol * scale[i]
        else:
            feas &= np.abs(r) <= tol * scale[i]
    if not feas.any():
        return None
    return float((pts[feas] @ c).min())


def random_bounded_lp(rng: np.random.Generator):
    n = int(rng.integers(1, 7))
    m = int(rng.integers(1, 7))
    A = rng.integers(-5, 6, size=(m, n)).astype(float)
    A[rng.random((m, n)) < 0.25] = 0.0
    c = rng.integers(-9, 10, size=n).astype(float)
    lo = rng.integers(-4, 2, size=n).astype(float)
    hi = lo + rng.integers(1, 8, size=n)
    sense = list(rng.choice(["<=", ">=", "="], size=m, p=[0.45, 0.4, 0.15]))
    # centre rhs around a random interior point so most instances are feasible
    x0 = lo + rng.random(n) * (hi - lo)
    b = np.round(A @ x0 + rng.normal(0, 2, size=m), 2)
    return c, A, sense, b, lo, hi


def annuity_factor(lifetime: float, rate: float) -> float:
    if rate == 0:
        return 1.0 / lifetime
    return rate / (1.0 - (1.0 + rate) ** (-lifetime))


def freight_energy_mj(service_tkm, payload_t, share, intensity_mj_per_vkm):
    """Energy of one cargo type: distance from payload, then per-vkm intensity."""
    vkm = service_tkm / payload_t
    return vkm * share * intensity_mj_per_vkm


def finite_difference(f, x, rel):
    h = x * rel
    return (f(x + h) - f(x - h)) / (2 * h)


def isclose(a, b, rel=1e-9, abs_=0.0):
    return math.isclose(a, b, rel_tol=rel, abs_tol=abs_)
