"""Rebuild the frozen report fixtures under tests/golden.

Run with the compiled kernels; the fixtures record that backend's optimum.
"""
import shutil
import sys
from pathlib import Path

from multivec import kernels, toy
from multivec import scenario as sc

GOLDEN = Path(__file__).parent / "golden"
CASES = {"binding_cap": {}, "h2_high": {"h2_hdv": "high"}, "loose_cap": {"cap": 1e12}}
FILES = ("generation.csv", "h2.csv", "co2_balance.csv", "costs.csv", "fuels.csv", "fuel_consumption.csv")


def spec(name: str) -> sc.ScenarioSpec:
    return sc.ScenarioSpec(toy.data_path("toy"), toy.data_path("transport_toy"), id=name, **CASES[name])


def main(tmp: str) -> None:
    if kernels.BACKEND != "cython":
        sys.exit("build the compiled kernels first")
    for name in CASES:
        out = Path(tmp) / name
        res = sc.run_scenario(spec(name), out)
        assert res.exit_code == 0, res.message
        (GOLDEN / name).mkdir(parents=True, exist_ok=True)
        for f in FILES:
            shutil.copy(out / f, GOLDEN / name / f)


if __name__ == "__main__":
    main(sys.argv[1])
