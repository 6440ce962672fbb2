import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multivec import demand as dm
from multivec import system as sm
from multivec.units import MJ_PER_MWH
from oracles import freight_energy_mj

TWO_STEPS = sm.TimeGrid((sm.Period(2, 1.0),))


def cargo(amount=1000.0, payload=15.12, share=0.6, k=13.87):
    v = dm.VehicleType("hdv_ultra", "cargo", {"highway": 1.0}, loading=1 / payload, group="HDV")
    return dm.TransportScenario(
        (v,),
        (dm.DrivetrainShare("hdv_ultra", "diesel", share, {("diesel", "highway"): k}),
         dm.DrivetrainShare("hdv_ultra", "h2", 1 - share, {(dm.HYDROGEN, "highway"): 9.12})),
        (dm.ServiceDemand("hdv_ultra", "z", 2040, amount),),
    )


def test_single_cargo_type_against_oracle():
    out = dm.compute_energy_demand(cargo(), TWO_STEPS)
    expected_mj = freight_energy_mj(1000.0, 15.12, 0.6, 13.87) * 0.5
    np.testing.assert_allclose(out[("z", "diesel")] * MJ_PER_MWH, [expected_mj] * 2, rtol=1e-9)
    assert out[("z", "diesel")][0] * MJ_PER_MWH == pytest.approx(275.198, abs=5e-4)


def test_zero_service_gives_zero_demand():
    out = dm.compute_energy_demand(cargo(amount=0.0), TWO_STEPS)
    assert all(np.all(v == 0) for v in out.values())


def test_phev_books_urban_distance_to_electricity():
    roads = {"urban": 0.25, "rural": 0.12, "highway": 0.63}
    v = dm.VehicleType("hdv_medium", "cargo", roads, loading=1.0)
    scn = dm.TransportScenario(
        (v,),
        (dm.DrivetrainShare("hdv_medium", "diesel", 0.6, {("diesel", r): 7.18 for r in roads}),
         dm.phev_drivetrain("hdv_medium", "hybrid", 0.4, 2.66, {"rural": 7.18, "highway": 7.18}, "diesel")),
        (dm.ServiceDemand("hdv_medium", "z", 2040, 1e6),),
    )
    mj = dm.annual_energy_mj(scn)
    assert mj[("hdv_medium", "z", "diesel")] == pytest.approx(1e6 * (0.6 * 7.18 + 0.4 * 0.75 * 7.18), rel=1e-12)
    assert mj[("hdv_medium", "z", dm.ELECTRICITY)] == pytest.approx(1e6 * 0.4 * 0.25 * 2.66, rel=1e-12)


def test_missing_intensity_names_the_tuple():
    v = dm.VehicleType("bus", "passenger", {"urban": 0.5, "rural": 0.5}, occupancy=0.05)
    scn = dm.TransportScenario(
        (v,), (dm.DrivetrainShare("bus", "diesel", 1.0, {("diesel", "urban"): 12.0}),),
        (dm.ServiceDemand("bus", "z", 2040, 1e6),),
    )
    with pytest.raises(dm.DemandError, match=r"vehicle=bus, drivetrain=diesel, road=rural"):
        dm.compute_energy_demand(scn, TWO_STEPS)


def test_bad_shares_are_reported():
    scn = cargo(share=0.7)
    scn = dm.TransportScenario(scn.vehicles, scn.drivetrains[:1], scn.service)
    assert any("drivetrain shares" in p for p in dm.validate_scenario(scn))


def test_load_shape_must_be_normalized():
    scn = cargo()
    scn = dm.TransportScenario(scn.vehicles, scn.drivetrains, scn.service, {("*", "diesel"): np.array([0.5, 0.6])})
    with pytest.raises(dm.DemandError, match="not normalized"):
        dm.compute_energy_demand(scn, TWO_STEPS)


def test_fuel_switch_fraction_zero_is_identity():
    scn = cargo()
    assert dm.apply_fuel_switch(scn, "HDV", "diesel", "h2", 0.0) == scn


def test_full_switch_moves_the_whole_share():
    out = dm.apply_fuel_switch(cargo(), "HDV", "diesel", "h2", 1.0)
    assert out.share("hdv_ultra", "h2") == pytest.approx(1.0)
    assert out.share("hdv_ultra", "diesel") == 0.0
    toy_like = dm.TransportScenario(
        out.vehicles,
        (dm.DrivetrainShare("hdv_ultra", "diesel", 0.6, {("diesel", "highway"): 13.87}),
         dm.DrivetrainShare("hdv_ultra", "h2", 0.0, {(dm.HYDROGEN, "highway"): 9.12}),
         dm.DrivetrainShare("hdv_ultra", "phev", 0.4, {("diesel", "highway"): 13.87})),
        out.service,
    )
    moved = dm.apply_fuel_switch(toy_like, "HDV", "diesel", "h2", 1.0)
    assert moved.share("hdv_ultra", "h2") == pytest.approx(0.6)
    assert moved.share("hdv_ultra", "diesel") == 0.0
    assert moved.share("hdv_ultra", "phev") == 0.4


def test_two_half_switches_compound():
    scn = dm.apply_fuel_switch(cargo(), "hdv_ultra", "diesel", "h2", 0.5)
    scn = dm.apply_fuel_switch(scn, "hdv_ultra", "diesel", "h2", 0.5)
    assert scn.share("hdv_ultra", "diesel") == pytest.approx(0.15)
    assert scn.share("hdv_ultra", "h2") == pytest.approx(0.85)


@pytest.mark.parametrize("fraction", [-0.1, 1.5, float("nan")])
def test_switch_fraction_out_of_range(fraction):
    with pytest.raises(dm.DemandError, match="insufficient"):
        dm.apply_fuel_switch(cargo(), "HDV", "diesel", "h2", fraction)


def test_switch_needs_a_target_drivetrain():
    with pytest.raises(dm.DemandError, match="electric"):
        dm.apply_fuel_switch(cargo(), "HDV", "diesel", "electric", 0.5)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.0, 1.0), st.floats(0.1, 10.0))
def test_switch_conserves_distance_and_demand_is_linear(fraction, factor):
    scn = cargo(amount=5e8)
    switched = dm.apply_fuel_switch(scn, "HDV", "diesel", "h2", fraction)
    before = dm.vehicle_distance(scn)
    after = dm.vehicle_distance(switched)
    assert after == pytest.approx(before, rel=1e-12)
    base = dm.compute_energy_demand(switched, TWO_STEPS)
    scaled = dm.compute_energy_demand(dm.scale_service(switched, factor), TWO_STEPS)
    for key, arr in base.items():
        np.testing.assert_allclose(scaled[key], factor * arr, rtol=1e-12)


def test_transport_demand_lands_in_the_right_vectors():
    scn = cargo(amount=3.6e9)
    s = sm.EnergySystem(zones=(sm.Zone("z"),), grid=TWO_STEPS,
                        fuels={"diesel": sm.FuelSpec("diesel", 90.0, 0.25, "liquid")})
    out = dm.add_transport_demand(s, dm.compute_energy_demand(scn, TWO_STEPS))
    assert set(out.demand_fuels) == {("z", "diesel")}
    assert float(out.demand_h2["z"].sum()) > 0


def test_bundled_transport_loads(transport_dir):
    grid = sm.TimeGrid.uniform(8760)
    scn = dm.load_transport(transport_dir, grid)
    assert dm.validate_scenario(scn) == []
    demand = dm.compute_energy_demand(scn, grid)
    for arr in demand.values():
        assert arr.shape == (8760,)
        assert np.all(arr >= 0)
