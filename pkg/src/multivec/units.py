"""Unit handling and capital cost annualization.

Internally everything is MWh, tonne, EUR and hour. Input tables mix GJ,
MMBTU, kW and kg, so values are converted once at ingestion.
"""
from __future__ import annotations

import math
import re

GJ_PER_MWH = 3.6
GJ_PER_MMBTU = 1.055056
MJ_PER_MWH = 3600.0
# lower heating value of hydrogen; reproduces 11.2 GJ -> 0.093 t used by the synfuel tables
H2_LHV_GJ_PER_T = 120.0
H2_LHV_MWH_PER_T = H2_LHV_GJ_PER_T / GJ_PER_MWH
HOURS_PER_YEAR = 8760


class UnitError(ValueError):
    """Raised for unknown units or dimensionally incompatible conversions."""


# unit -> (dimension, factor to canonical unit of that dimension)
_BASE_UNITS: dict[str, tuple[str, float]] = {
    # energy, canonical MWh
    "MWh": ("energy", 1.0),
    "kWh": ("energy", 1e-3),
    "GWh": ("energy", 1e3),
    "TWh": ("energy", 1e6),
    "MJ": ("energy", 1.0 / MJ_PER_MWH),
    "GJ": ("energy", 1.0 / GJ_PER_MWH),
    "MMBTU": ("energy", GJ_PER_MMBTU / GJ_PER_MWH),
    # power, canonical MW
    "MW": ("power", 1.0),
    "kW": ("power", 1e-3),
    "GW": ("power", 1e3),
    # mass, canonical tonne
    "t": ("mass", 1.0),
    "kg": ("mass", 1e-3),
    "kt": ("mass", 1e3),
    "Mt": ("mass", 1e6),
    # money, canonical EUR
    "EUR": ("money", 1.0),
    "kEUR": ("money", 1e3),
    "MEUR": ("money", 1e6),
    # time, canonical hour
    "h": ("time", 1.0),
    "y": ("time", float(HOURS_PER_YEAR)),
    # distance and service units (no conversion between them)
    "km": ("distance", 1.0),
    "vkm": ("vkm", 1.0),
    "pkm": ("pkm", 1.0),
    "tkm": ("tkm", 1.0),
}
_ALIASES = {
    "tonne": "t", "tonnes": "t", "mmbtu": "MMBTU", "MMBtu": "MMBTU",
    "hr": "h", "yr": "y", "year": "y", "Eur": "EUR", "kTonne": "kt",
}
_TOKEN = re.compile(r"^([A-Za-z]+)(?:\^(-?\d+))?$")


def _parse(unit: str) -> tuple[dict[str, int], float]:
    """Return (dimension exponents, factor to canonical) for a compound unit."""
    dims: dict[str, int] = {}
    factor = 1.0
    unit = unit.strip()
    if unit in ("", "1"):
        return dims, factor
    numerator, *denominators = unit.split("/")
    parts = [(p, 1) for p in numerator.split("*")]
    for d in denominators:
        parts.extend((p, -1) for p in d.split("*"))
    for token, sign in parts:
        token = token.strip()
        if token in ("", "1"):
            continue
        m = _TOKEN.match(token)
        if m is None:
            raise UnitError(f"cannot parse unit {unit!r}")
        name = _ALIASES.get(m.group(1), m.group(1))
        if name not in _BASE_UNITS:
            raise UnitError(f"unknown unit {m.group(1)!r} in {unit!r}")
        exp = sign * int(m.group(2) or 1)
        dim, f = _BASE_UNITS[name]
        dims[dim] = dims.get(dim, 0) + exp
        factor *= f**exp
    return {k: v for k, v in dims.items() if v}, factor


def convert_units(quantity: float, from_unit: str, to_unit: str) -> float:
    """Convert ``quantity`` between dimensionally compatible units.

    Compound units are written with ``/`` and ``*``, e.g. ``"EUR/GJ"`` or
    ``"GJ/t"``.

    >>> round(convert_units(8.56, "EUR/GJ", "EUR/MWh"), 6)
    30.816
    """
    dims_from, f_from = _parse(from_unit)
    dims_to, f_to = _parse(to_unit)
    if dims_from != dims_to:
        raise UnitError(f"cannot convert {from_unit!r} to {to_unit!r}: incompatible dimensions")
    return quantity * (f_from / f_to)


def capital_recovery_factor(lifetime: float, discount_rate: float) -> float:
    if lifetime < 1:
        raise ValueError(f"lifetime must be >= 1 year, got {lifetime}")
    if not 0.0 <= discount_rate < 1.0:
        raise ValueError(f"discount rate must be in [0, 1), got {discount_rate}")
    if discount_rate == 0.0:
        return 1.0 / lifetime
    growth = math.pow(1.0 + discount_rate, lifetime)
    return discount_rate * growth / (growth - 1.0)


def annualize(capex: float, lifetime: float, discount_rate: float) -> float:
    """Equivalent annual payment for ``capex`` over ``lifetime`` years."""
    return capex * capital_recovery_factor(lifetime, discount_rate)
