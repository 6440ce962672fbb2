import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multivec import kernels, toy
from multivec.timereduce import (
    ProfileBundle,
    ReductionError,
    annual_energy_errors,
    kmedoids,
    reduce,
    reduce_system,
)

DAYS = 365


def two_regime(seed=3):
    """180 low days and 185 high days in shuffled order, identical within a regime."""
    rng = np.random.default_rng(seed)
    hours = np.arange(24)
    low_day = 0.2 + 0.05 * np.sin(hours / 24 * 2 * np.pi)
    high_day = 0.8 + 0.1 * np.cos(hours / 24 * 2 * np.pi)
    regime = np.array([0] * 180 + [1] * 185)
    rng.shuffle(regime)
    load = np.concatenate([high_day if r else low_day for r in regime])
    wind = np.concatenate([1.0 - high_day if r else 1.0 - low_day for r in regime])
    return ProfileBundle(("load", "wind"), np.vstack([load * 1000, wind])), regime


def test_two_regimes_recovered():
    bundle, regime = two_regime()
    red = reduce(bundle, 2)
    assert sorted(red.weights) == [180, 185]
    for pos, med in enumerate(red.medoids):
        members = [d for d, a in enumerate(red.assignment) if a == pos]
        assert len(set(regime[members])) == 1
        assert regime[med] == regime[members[0]]
    assert red.cost == 0.0
    errors = annual_energy_errors(bundle, red)
    assert errors == {"load": pytest.approx(0.0, abs=1e-12), "wind": pytest.approx(0.0, abs=1e-12)}


def test_full_k_is_the_identity():
    rng = np.random.default_rng(0)
    bundle = ProfileBundle(("a", "b"), rng.random((2, DAYS * 24)))
    red = reduce(bundle, DAYS)
    assert red.weights == (1,) * DAYS
    assert red.medoids == tuple(range(DAYS))
    np.testing.assert_array_equal(red.bundle.data, bundle.data)
    np.testing.assert_array_equal(red.grid.weights, np.ones(DAYS * 24))


@pytest.mark.parametrize("k", [1, 4, 11])
def test_constant_series_is_reproduced(k):
    bundle = ProfileBundle(("flat",), np.full(DAYS * 24, 7.5))
    red = reduce(bundle, k)
    assert annual_energy_errors(bundle, red)["flat"] == pytest.approx(0.0, abs=1e-12)
    assert sum(red.weights) == DAYS


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 30), st.integers(0, 2**31 - 1))
def test_weights_cover_the_horizon(k, seed):
    rng = np.random.default_rng(seed)
    bundle = ProfileBundle(("x", "y"), rng.random((2, 60 * 24)))
    red = reduce(bundle, k, seed=seed)
    assert sum(red.weights) == 60
    assert red.grid.total_hours == pytest.approx(8760.0)
    assert len(red.medoids) == k == len(set(red.medoids))
    assert red.expand(red.bundle.data[0]).shape == (60 * 24,)


def test_same_seed_same_medoids():
    rng = np.random.default_rng(9)
    bundle = ProfileBundle(("x",), rng.random((1, DAYS * 24)))
    a, b = reduce(bundle, 5, seed=4), reduce(bundle, 5, seed=4)
    assert (a.medoids, a.assignment, a.weights, a.cost) == (b.medoids, b.assignment, b.weights, b.cost)


@pytest.mark.parametrize("k", [0, DAYS + 1])
def test_k_out_of_range(k):
    bundle = ProfileBundle(("x",), np.zeros(DAYS * 24))
    with pytest.raises(ReductionError):
        reduce(bundle, k)


def test_partial_period_rejected():
    with pytest.raises(ReductionError):
        reduce(ProfileBundle(("x",), np.zeros(100)), 2)


def test_swaps_never_worsen_the_cost():
    rng = np.random.default_rng(1)
    X = rng.random((40, 3))
    D = ((X[:, None] - X[None]) ** 2).sum(-1)
    start, _ = kmedoids(D, 4, seed=2, max_iter=0)
    best, swaps = kmedoids(D, 4, seed=2)

    def cost(med):
        return D[:, med].min(axis=1).sum()

    assert cost(best) <= cost(start)
    assert swaps >= 0


@pytest.mark.skipif("cython" not in kernels.available_backends(), reason="compiled kernels not built")
def test_backends_agree_on_medoids():
    rng = np.random.default_rng(5)
    X = rng.random((60, 4))
    D = np.ascontiguousarray(((X[:, None] - X[None]) ** 2).sum(-1))
    med = np.array([0, 10, 20], dtype=np.int64)
    sub = D[:, med]
    pos = np.argmin(sub, axis=1).astype(np.int64)
    nd = sub[np.arange(60), pos].copy()
    sd = np.sort(sub, axis=1)[:, 1].copy()
    py = kernels.backend_module("python").pam_swap(D, med, pos, nd, sd)
    cy = kernels.backend_module("cython").pam_swap(D, med, pos, nd, sd)
    assert py[:2] == cy[:2]
    assert py[2] == pytest.approx(cy[2], rel=1e-12)


def test_toy_reduction_keeps_annual_totals_close():
    system = toy.toy_system()
    reduced, red = reduce_system(system, 3)
    assert reduced.grid.n_steps == 72
    assert sum(red.weights) == DAYS
    for z, series in system.demand_elec.items():
        full = float(series.sum())
        approx = float(reduced.demand_elec[z] @ reduced.grid.weights)
        assert approx == pytest.approx(full, rel=0.25)
