import dataclasses

import numpy as np
import pytest

from multivec import liquid_fuels as lf
from multivec import system as sm
from multivec import toy
from multivec.lp import OPTIMAL, solve
from multivec.reporting import build_report
from multivec.supply import COST_BYPRODUCT, ModelError, build_model
from multivec.units import GJ_PER_MMBTU, GJ_PER_MWH, H2_LHV_GJ_PER_T, annualize
from conftest import two_step_grid

OPT_A, OPT_B, OPT_C = toy.synfuel_options("z")
FUELS = toy.fuels()


def mini(demand_mwh=100.0, mandate=None, jet_price=None, synfuel=(OPT_A,)):
    """One zone with gas power, electrolysis, DAC and synfuel serving a diesel demand."""
    fuels = dict(FUELS)
    if jet_price is not None:
        fuels["jet"] = dataclasses.replace(fuels["jet"], price=jet_price)
    per_step = np.full(2, demand_mwh / 8760.0)
    gas = 12.2 * GJ_PER_MMBTU / GJ_PER_MWH
    return sm.EnergySystem(
        zones=(sm.Zone("z"),), grid=two_step_grid(), fuels=fuels,
        thermal=(sm.ThermalGenerator("ccgt", "z", "natural_gas", 8e5, 2e4, 2.0, 1.6),),
        h2_techs=(sm.H2Technology("pem", "z", 1e6, 1e4, 0.0, 45.0),),
        dac=(sm.DacTechnology("dac", "z", 1e5, 1e3, 10.0, gas, 0.0, 0.99),),
        synfuel=synfuel,
        demand_elec={"z": np.array([10.0, 10.0])},
        demand_fuels={("z", "diesel"): per_step},
        policy=sm.PolicyConfig(mandates=() if mandate is None else (("diesel", mandate),)),
    )


def coeff(m, row, col):
    return m.lp.A[row, col]


def test_option_a_per_tonne_of_feed():
    s = lf.synfuel_stoichiometry(OPT_A, 1.0, FUELS)
    gj = {k: v * GJ_PER_MWH for k, v in s.fuels.items()}
    assert gj == pytest.approx({"diesel": 1.889, "gasoline": 1.784})
    assert s.byproducts["jet"] * GJ_PER_MWH == pytest.approx(3.225)
    assert s.h2_in * H2_LHV_GJ_PER_T == pytest.approx(11.2)
    assert s.elec_in * GJ_PER_MWH == pytest.approx(0.13)
    assert s.emitted == 0.52
    assert s.captured == 0.0


def test_zero_feed_gives_nothing():
    s = lf.synfuel_stoichiometry(OPT_C, 0.0, FUELS)
    assert set(s.fuels.values()) == {0.0}
    assert (s.h2_in, s.elec_in, s.emitted, s.captured) == (0.0, 0.0, 0.0, 0.0)


def test_negative_feed():
    with pytest.raises(ValueError):
        lf.synfuel_stoichiometry(OPT_A, -1.0)


@pytest.mark.parametrize("tech, product_carbon", [(OPT_A, 0.472), (OPT_C, 0.899)])
def test_carbon_closes(tech, product_carbon):
    products = lf.carbon_closure(tech, FUELS) - tech.mu_emit - tech.mu_capture
    assert products == pytest.approx(product_carbon, abs=5e-4)
    assert abs(lf.carbon_closure(tech, FUELS) - 1.0) <= lf.CLOSURE_TOLERANCE


def test_toy_synfuels_pass_the_closure_check():
    assert lf.check_carbon_closure(toy.toy_system()) == []
    leaky = dataclasses.replace(OPT_A, mu_emit=0.2)
    bad = toy.toy_system().replace(synfuel=(leaky,))
    assert len(lf.check_carbon_closure(bad)) == 1


def test_conventional_diesel_intensity():
    m = build_model(mini())
    col = m.conventional[("z", "diesel")][0]
    terms = [c for cat, _, j, c in m.carbon.terms if j == col]
    assert terms == [pytest.approx(4380.0 * 0.2495, rel=2e-4)]


def test_capacity_cost_uses_the_plant_life():
    m = build_model(mini())
    cap = m.synfuel_cap[OPT_A.id]
    assert m.lp.cost[cap] == pytest.approx(annualize(OPT_A.capex, 40, 0.045) + OPT_A.fom, rel=1e-12)


def test_jet_is_a_credit():
    m = build_model(mini())
    credits = [c for cat, _, c in m.costs.terms if cat == COST_BYPRODUCT]
    assert credits and all(c < 0 for c in credits)
    assert credits[0] == pytest.approx(-4380.0 * 3.225 / GJ_PER_MWH * FUELS["jet"].price)


def test_fuel_balance_without_synfuel():
    m = build_model(mini(synfuel=()))
    sol = solve(m.lp)
    assert sol.status == OPTIMAL
    bought = sum(m.w[t] * sol.x[j] for t, j in enumerate(m.conventional[("z", "diesel")]))
    assert bought == pytest.approx(100.0, rel=1e-9)
    assert m.lp.rhs[m.fuel_balance["diesel"]] == pytest.approx(100.0)


def test_zero_demand_costs_nothing():
    m = build_model(mini(demand_mwh=0.0))
    sol = solve(m.lp)
    r = build_report(m, sol)
    assert r.fuel_supply["diesel"]["conventional"] == 0.0
    assert r.costs["conventional_fuel"] == 0.0


def test_mandate_row_at_the_extremes():
    m0 = build_model(mini(mandate=0.0))
    feed = m0.synfuel_feed[OPT_A.id][0]
    conv = m0.conventional[("z", "diesel")][0]
    assert coeff(m0, m0.mandate_row, conv) == 0.0
    assert coeff(m0, m0.mandate_row, feed) == pytest.approx(-4380.0 * OPT_A.yields["diesel"])
    m1 = build_model(mini(mandate=1.0))
    assert coeff(m1, m1.mandate_row, conv) == 4380.0
    assert coeff(m1, m1.mandate_row, feed) == 0.0
    assert m1.lp.sense[m1.mandate_row] == "="


@pytest.mark.parametrize("zeta", [0.0, 0.25, 1.0])
def test_mandate_share_is_met(zeta):
    m = build_model(mini(demand_mwh=5000.0, mandate=zeta))
    sol = solve(m.lp)
    assert sol.status == OPTIMAL
    d = build_report(m, sol).fuel_supply["diesel"]
    total = d["synthetic"] + d["conventional"]
    assert total > 0
    assert d["synthetic"] / total == pytest.approx(zeta, abs=1e-6)


def test_second_mandate_is_refused():
    m = build_model(mini(mandate=0.5))
    with pytest.raises(ModelError, match="only one"):
        lf.build_mandate(m, "gasoline", 0.1)


def test_mandate_share_must_be_a_fraction():
    m = build_model(mini())
    with pytest.raises(ModelError):
        lf.build_mandate(m, "diesel", 1.2)


def test_coupling_coefficients():
    m = build_model(mini(synfuel=(OPT_A, OPT_B)))
    fa, fb = m.synfuel_feed[OPT_A.id][0], m.synfuel_feed[OPT_B.id][0]
    assert -coeff(m, m.power_balance[("z", 0)], fb) == pytest.approx(0.5833, abs=1e-4)
    h2 = m.h2_balance[("z", 0)]
    assert coeff(m, h2, fa) == coeff(m, h2, fb) == pytest.approx(-11.2 / H2_LHV_GJ_PER_T)
    co2 = m.co2_balance[("z", 0)]
    assert coeff(m, co2, fb) == pytest.approx(-1 + 0.475)
    assert coeff(m, co2, fa) == -1.0


def test_zero_feed_zero_coupling():
    m = build_model(mini())
    sol = solve(m.lp)
    feeds = m.synfuel_feed[OPT_A.id]
    assert all(sol.x[j] == 0.0 for j in feeds)
    r = build_report(m, sol)
    assert r.co2_balance["synfuel_process"] == 0.0


def test_no_fuels_no_ledger_terms():
    s = mini(synfuel=()).replace(fuels={"natural_gas": FUELS["natural_gas"]}, demand_fuels={})
    m = build_model(s)
    assert not m.conventional
    fuel_terms = {"conventional_combustion", "synfuel_process", "synfuel_combustion", "byproduct_combustion"}
    assert not fuel_terms & {cat for cat, *_ in m.carbon.terms}


def test_dropping_the_byproduct_credit_never_helps():
    for zeta in (0.0, 0.5, 1.0):
        with_credit = solve(build_model(mini(demand_mwh=5000.0, mandate=zeta)).lp)
        without = solve(build_model(mini(demand_mwh=5000.0, mandate=zeta, jet_price=0.0)).lp)
        assert without.objective >= with_credit.objective - 1e-6 * abs(with_credit.objective)
