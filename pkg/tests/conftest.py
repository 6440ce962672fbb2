import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from multivec import system as sm  # noqa: E402
from multivec import toy  # noqa: E402


@pytest.fixture(scope="session")
def toy_dir() -> Path:
    return toy.data_path("toy")


@pytest.fixture(scope="session")
def transport_dir() -> Path:
    return toy.data_path("transport_toy")


def two_step_grid() -> sm.TimeGrid:
    """Two hourly steps standing in for the whole year."""
    return sm.TimeGrid((sm.Period(2, 4380.0),))


def one_zone(**changes) -> sm.EnergySystem:
    """Single zone, flat 10 MWh demand, one gas unit; fields overridable."""
    fuels = {"natural_gas": sm.FuelSpec("natural_gas", 30.0, 0.2)}
    base = dict(
        zones=(sm.Zone("z"),),
        grid=two_step_grid(),
        fuels=fuels,
        thermal=(sm.ThermalGenerator("ccgt", "z", "natural_gas", capex=800e3, fom=20e3, vom=2.0, heat_rate=1.6),),
        demand_elec={"z": np.array([10.0, 10.0])},
    )
    base.update(changes)
    return sm.EnergySystem(**base)


# one summary line per acceptance criterion ------------------------------------

_CRITERIA: dict[int, tuple[str, str, float]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or not mark.args:
        return
    number, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        status = "PASS" if rep.passed else "FAIL"
        prev = _CRITERIA.get(number)
        if prev is None or prev[1] == "PASS":
            _CRITERIA[number] = (title, status, rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, status, secs = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d} {status}  {title}  ({secs:.1f}s)")
