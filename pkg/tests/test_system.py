import numpy as np
import pytest

from multivec import io, toy
from multivec import system as sm
from multivec.supply import ModelError, build_model
from conftest import one_zone


def test_bundled_toy_is_valid(toy_dir):
    report = sm.validate(io.load_system(toy_dir))
    assert report.ok, report.violations


def test_profile_length_mismatch():
    grid = sm.TimeGrid((sm.Period(12, 730.0),))
    wind = sm.VreGenerator("wind", "z", 1e6, 1e4, np.full(10, 0.3))
    s = one_zone(grid=grid, vre=(wind,), demand_elec={"z": np.ones(12)})
    report = sm.validate(s)
    assert len(report) == 1
    assert report.violations[0].startswith("length-mismatch")


def test_two_mandates_violate_the_single_mandate_rule():
    s = toy.toy_system().with_policy(mandates=(("diesel", 0.2), ("gasoline", 0.2)))
    msgs = [v for v in sm.validate(s) if v.startswith("mandate")]
    assert len(msgs) == 1
    assert "at most one" in msgs[0]


def test_invalid_system_is_refused_by_the_model():
    s = one_zone(thermal=(sm.ThermalGenerator("g", "nowhere", "natural_gas", 1.0, 1.0, 1.0, 1.0),))
    with pytest.raises(ModelError, match="dangling-zone"):
        build_model(s)


def test_weights_must_cover_a_year():
    s = one_zone(grid=sm.TimeGrid((sm.Period(2, 1.0),)))
    assert any(v.startswith("grid") for v in sm.validate(s))


def test_round_trip_through_csv(tmp_path):
    s = toy.toy_system()
    io.write_system(s, tmp_path)
    back = io.load_system(tmp_path)
    assert back.zone_ids == s.zone_ids
    assert back.fuels == s.fuels
    for a, b in zip(back.synfuel, s.synfuel):
        assert a.id == b.id
        assert a.h2_in == pytest.approx(b.h2_in, rel=1e-12)
        assert a.yields == pytest.approx(b.yields, rel=1e-12)
    for z in s.demand_elec:
        np.testing.assert_allclose(back.demand_elec[z], s.demand_elec[z], rtol=1e-12)


def test_unknown_column_is_rejected(tmp_path, toy_dir):
    io.write_system(io.load_system(toy_dir), tmp_path)
    path = tmp_path / "zones.csv"
    lines = path.read_text().splitlines()
    lines[0] += ",colour"
    lines[1:] = [ln + ",red" for ln in lines[1:]]
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(io.InputError, match="colour"):
        io.load_system(tmp_path)


def test_missing_column_is_named(tmp_path, toy_dir):
    io.write_system(io.load_system(toy_dir), tmp_path)
    path = tmp_path / "fuels.csv"
    rows = [ln.split(",") for ln in path.read_text().splitlines()]
    k = rows[0].index("price_eur_per_mwh")
    path.write_text("\n".join(",".join(r[:k] + r[k + 1:]) for r in rows) + "\n")
    with pytest.raises(io.InputError, match="price_eur_per_mwh"):
        io.load_system(tmp_path)
