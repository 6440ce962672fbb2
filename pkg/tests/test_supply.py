import math

import numpy as np
import pytest

from multivec import system as sm
from multivec.lp import OPTIMAL, solve
from multivec.reporting import build_report
from multivec.supply import DAC_ATMOSPHERIC, SEQUESTERED, VENTED_DAC, VENTED_H2, build_model
from multivec.units import GJ_PER_MMBTU, GJ_PER_MWH, annualize
from conftest import one_zone

W = 4380.0  # weight of each of the two steps


def solved(system):
    m = build_model(system)
    sol = solve(m.lp)
    assert sol.status == OPTIMAL
    return m, sol


def val(m, sol, name):
    return sol.value(m.lp, name)


def test_single_thermal_unit_by_hand():
    m, sol = solved(one_zone())
    assert val(m, sol, "generation/ccgt/z/0") == pytest.approx(10.0)
    assert val(m, sol, "generation/ccgt/z/1") == pytest.approx(10.0)
    assert val(m, sol, "capacity/ccgt/z/-") == pytest.approx(10.0)
    expected = 10 * (annualize(800e3, 30, 0.045) + 20e3) + 2 * W * 10 * (2.0 + 1.6 * 30.0)
    assert sol.objective == pytest.approx(expected, rel=1e-9)
    r = build_report(m, sol)
    assert r.co2_balance["vented_power"] == pytest.approx(2 * W * 10 * 1.6 * 0.2, rel=1e-9)
    assert sum(r.costs.values()) == pytest.approx(sol.objective, rel=1e-9)


def test_vre_without_wind_produces_nothing():
    wind = sm.VreGenerator("wind", "z", capex=1.0, fom=0.0, profile=np.zeros(2))
    m, sol = solved(one_zone(vre=(wind,)))
    assert val(m, sol, "generation/wind/z/0") == 0.0
    assert val(m, sol, "generation/wind/z/1") == 0.0


def test_battery_loses_its_round_trip_share():
    wind = sm.VreGenerator("wind", "z", capex=1e5, fom=0.0, profile=np.array([1.0, 0.0]))
    batt = sm.ElectricStorage("batt", "z", power_capex=1e4, energy_capex=1e4, fom=0.0, round_trip_efficiency=0.85)
    m, sol = solved(one_zone(thermal=(), vre=(wind,), storage=(batt,), demand_elec={"z": np.array([0.0, 10.0])}))
    charged = val(m, sol, "storage_charge/batt/z/0") + val(m, sol, "storage_charge/batt/z/1")
    discharged = val(m, sol, "storage_discharge/batt/z/0") + val(m, sol, "storage_discharge/batt/z/1")
    assert discharged == pytest.approx(10.0)
    assert charged * 0.85 == pytest.approx(discharged)


def electrolyzer(**kw):
    return sm.H2Technology("pem", "z", capex=1e6, fom=1e4, vom=0.0, electricity_input=45.0, **kw)


def test_electrolyzer_adds_its_power_load():
    m, sol = solved(one_zone(h2_techs=(electrolyzer(),), demand_h2={"z": np.array([1.0, 1.0])}))
    assert val(m, sol, "h2_production/pem/z/0") == pytest.approx(1.0)
    assert val(m, sol, "generation/ccgt/z/0") == pytest.approx(10.0 + 45.0)


def smr_ccs():
    gas = 196.1 / GJ_PER_MWH
    return sm.H2Technology("smr_ccs", "z", capex=1e5, fom=1e3, vom=1.0, electricity_input=0.0,
                           gas_input=gas, capture_rate=0.962)


def test_smr_ccs_captures_its_share():
    zone = sm.Zone("z", co2_injection_limit=1e9)
    m, sol = solved(one_zone(zones=(zone,), h2_techs=(smr_ccs(),), demand_h2={"z": np.array([1.0, 1.0])}))
    r = build_report(m, sol)
    burned = 196.1 / GJ_PER_MWH * 0.2 * 2 * W
    assert 196.1 / GJ_PER_MWH == pytest.approx(54.47, abs=5e-3)
    assert r.co2_balance[VENTED_H2] == pytest.approx(burned * 0.038, rel=1e-9)
    assert r.co2_balance[SEQUESTERED] == pytest.approx(burned * 0.962, rel=1e-9)


def test_without_storage_nothing_is_captured():
    m, sol = solved(one_zone(h2_techs=(smr_ccs(), electrolyzer()), demand_h2={"z": np.array([1.0, 1.0])},
                             policy=sm.PolicyConfig(co2_storage_enabled=False)))
    r = build_report(m, sol)
    assert val(m, sol, "h2_production/smr_ccs/z/0") == 0.0
    assert r.co2_balance[SEQUESTERED] == 0.0
    assert not any(name.startswith("injection") for name in m.lp.col_names)


def test_solvent_dac_removes_a_tonne_and_captures_its_gas():
    gas = 12.2 * GJ_PER_MMBTU / GJ_PER_MWH
    dac = sm.DacTechnology("dac", "z", capex=1e5, fom=1e3, vom=10.0, gas_input=gas, electricity_input=0.0,
                           combustion_capture_rate=0.99)
    zone = sm.Zone("z", co2_injection_limit=1e9)
    system = one_zone(zones=(zone,), dac=(dac,), policy=sm.PolicyConfig(emissions_cap=0.0))
    m, sol = solved(system)
    r = build_report(m, sol)
    captured = r.co2_balance[DAC_ATMOSPHERIC]
    burned_per_t = gas * 0.2
    assert captured > 0
    assert r.co2_balance[VENTED_DAC] == pytest.approx(captured * burned_per_t * 0.01, rel=1e-9)
    assert r.co2_balance[SEQUESTERED] == pytest.approx(captured * (1 + burned_per_t * 0.99), rel=1e-9)
    assert r.net_emissions == pytest.approx(0.0, abs=1e-6)


def test_binding_injection_limit_has_a_shadow_price():
    ccs = sm.ThermalGenerator("ccgt_ccs", "z", "natural_gas", capex=900e3, fom=20e3, vom=3.0, heat_rate=2.0,
                              capture_rate=0.9)
    nuke = sm.ThermalGenerator("nuclear", "z", "uranium", capex=9e6, fom=1e5, vom=10.0, heat_rate=3.0)
    fuels = {"natural_gas": sm.FuelSpec("natural_gas", 30.0, 0.2), "uranium": sm.FuelSpec("uranium", 1.5)}
    zone = sm.Zone("z", co2_injection_limit=0.199e6)
    m, sol = solved(one_zone(zones=(zone,), fuels=fuels, thermal=(ccs, nuke),
                             demand_elec={"z": np.array([1000.0, 1000.0])}))
    cap = "injection_capacity/co2_storage/z/-"
    assert val(m, sol, cap) == pytest.approx(0.199e6)
    assert -sol.reduced_costs[m.lp.col_index(cap)] > 0
    assert val(m, sol, "generation/nuclear/z/0") > 0


def test_infinite_cap_has_no_row_and_no_price():
    m, sol = solved(one_zone())
    assert m.cap_row is None
    assert build_report(m, sol).marginal_abatement == 0.0


def test_slack_cap_has_zero_dual():
    m, sol = solved(one_zone(policy=sm.PolicyConfig(emissions_cap=1e12)))
    assert sol.row_duals[m.cap_row] == pytest.approx(0.0, abs=1e-9)


def test_binding_cap_meets_the_ledger():
    wind = sm.VreGenerator("wind", "z", capex=8e6, fom=0.0, profile=np.array([0.5, 0.5]))
    assert build_report(*solved(one_zone(vre=(wind,)))).net_emissions > 10000.0
    m, sol = solved(one_zone(vre=(wind,), policy=sm.PolicyConfig(emissions_cap=10000.0)))
    r = build_report(m, sol)
    assert r.net_emissions == pytest.approx(10000.0, rel=1e-9)
    assert r.marginal_abatement > 0


def test_existing_capacity_pays_only_fixed_costs():
    g = sm.ThermalGenerator("old", "z", "natural_gas", capex=800e3, fom=20e3, vom=2.0, heat_rate=1.6,
                            existing_capacity=10.0)
    m, sol = solved(one_zone(thermal=(g,)))
    assert sol.objective == pytest.approx(10 * 20e3 + 2 * W * 10 * (2.0 + 48.0), rel=1e-9)


def test_transmission_serves_the_other_zone():
    zones = (sm.Zone("a"), sm.Zone("b"))
    line = sm.TransmissionLine("ab", "a", "b", existing_capacity=5.0, capex=1e5)
    m, sol = solved(one_zone(zones=zones, lines=(line,),
                             thermal=(sm.ThermalGenerator("g", "a", "natural_gas", 8e5, 2e4, 2.0, 1.6),),
                             demand_elec={"a": np.zeros(2), "b": np.array([8.0, 8.0])}))
    assert val(m, sol, "line_flow/ab/a>b/0") == pytest.approx(8.0)
    assert val(m, sol, "capacity/ab/-/-") == pytest.approx(8.0)
    assert math.isclose(val(m, sol, "capacity/g/a/-"), 8.0)


def test_balance_row_names_are_stable():
    m = build_model(one_zone())
    names = m.lp.row_names
    assert names[:6] == ["power_balance/-/z/0", "power_balance/-/z/1", "h2_balance/-/z/0", "h2_balance/-/z/1",
                         "co2_balance/-/z/0", "co2_balance/-/z/1"]
