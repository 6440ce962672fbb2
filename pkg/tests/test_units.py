import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from multivec.units import UnitError, annualize, capital_recovery_factor, convert_units
from oracles import annuity_factor


def test_one_year_life_is_the_capex():
    assert annualize(1000, 1, 0.0) == 1000


@pytest.mark.parametrize("capex, life, rate", [(1000, 20, 0.045), (851000, 30, 0.045), (3635e3, 40, 0.07)])
def test_annualize_matches_annuity_oracle(capex, life, rate):
    assert math.isclose(annualize(capex, life, rate), capex * annuity_factor(life, rate), rel_tol=1e-9)


def test_annualize_frozen_values():
    assert math.isclose(annualize(1000, 20, 0.045), 76.87614432, rel_tol=1e-9)
    assert round(annualize(851000, 30, 0.045), 1) == 52244.2


def test_zero_rate_is_straight_line():
    assert capital_recovery_factor(25, 0.0) == pytest.approx(0.04)


@pytest.mark.parametrize("life, rate", [(0, 0.05), (0.5, 0.05), (-3, 0.0), (10, -0.01), (10, 1.0)])
def test_bad_lifetime_or_rate(life, rate):
    with pytest.raises(ValueError):
        annualize(1000, life, rate)


@given(st.floats(1, 80), st.floats(0.001, 0.3))
def test_longer_life_is_cheaper(life, rate):
    assert annualize(1.0, life + 1, rate) < annualize(1.0, life, rate)


def test_gas_price_per_gj_to_mwh():
    assert convert_units(8.56, "EUR/GJ", "EUR/MWh") == pytest.approx(30.816, rel=1e-12)


def test_h2_consumption_per_tonne():
    assert convert_units(11.2, "GJ/t", "MWh/t") == pytest.approx(3.1111111, rel=1e-7)


def test_mmbtu_and_kg():
    assert convert_units(1, "MMBTU", "GJ") == pytest.approx(1.055056)
    assert convert_units(2.5, "EUR/kg", "EUR/t") == pytest.approx(2500.0)
    assert convert_units(1, "kEUR/MW", "EUR/kW") == pytest.approx(1.0)


@given(st.floats(-1e9, 1e9, allow_nan=False))
def test_round_trip_through_gj(q):
    back = convert_units(convert_units(q, "MWh", "GJ"), "GJ", "MWh")
    assert back == pytest.approx(q, rel=1e-12, abs=1e-12)


@given(st.floats(-1e6, 1e6, allow_nan=False))
def test_conversions_compose(q):
    direct = convert_units(q, "MMBTU", "kWh")
    chained = convert_units(convert_units(q, "MMBTU", "MJ"), "MJ", "kWh")
    assert chained == pytest.approx(direct, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("src, dst", [("MWh", "t"), ("EUR/MWh", "EUR/t"), ("MW", "MWh")])
def test_incompatible_dimensions(src, dst):
    with pytest.raises(UnitError):
        convert_units(1.0, src, dst)


def test_unknown_unit():
    with pytest.raises(UnitError, match="furlong"):
        convert_units(1.0, "furlong", "km")
