"""dB / dBm / linear conversions and physical constants.

Everything downstream computes in watts and linear ratios; the helpers here
are the only place logarithms of power quantities are taken.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

SPEED_OF_LIGHT = 299_792_458.0
REFERENCE_DISTANCE = 1.0


@dataclass(frozen=True)
class PhysicalConstants:
    speed_of_light: float = SPEED_OF_LIGHT
    reference_distance: float = REFERENCE_DISTANCE


CONSTANTS = PhysicalConstants()


def _finite(value: float, what: str) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{what} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class DB:
    """A power ratio in decibels."""

    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", _finite(self.value, "dB value"))

    def __add__(self, other):
        if isinstance(other, DB):
            return DB(self.value + other.value)
        if isinstance(other, DBm):
            return DBm(self.value + other.value)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, DB):
            return DB(self.value - other.value)
        return NotImplemented

    def __neg__(self):
        return DB(-self.value)

    def linear(self) -> float:
        return db_to_linear(self.value)


@dataclass(frozen=True)
class DBm:
    """An absolute power in dB referenced to 1 mW."""

    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", _finite(self.value, "dBm value"))

    def __add__(self, other):
        if isinstance(other, DB):
            return DBm(self.value + other.value)
        if isinstance(other, DBm):
            raise TypeError("cannot add two absolute powers in dBm")
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, DB):
            return DBm(self.value - other.value)
        if isinstance(other, DBm):
            # ratio of two absolute powers
            return DB(self.value - other.value)
        return NotImplemented

    def watts(self) -> float:
        return dbm_to_watts(self.value)


def _plain(x) -> float:
    if isinstance(x, (DB, DBm)):
        return x.value
    return x


def dbm_to_watts(p) -> float:
    """Convert a power in dBm to watts."""
    p = _finite(_plain(p), "power in dBm")
    return 1e-3 * 10.0 ** (p / 10.0)


def watts_to_dbm(w: float) -> float:
    w = _finite(w, "power in watts")
    if w <= 0.0:
        raise ValueError(f"power must be positive to express in dBm, got {w!r}")
    return 10.0 * math.log10(w) + 30.0


def db_to_linear(g) -> float:
    """Convert a ratio in dB to a linear ratio."""
    g = _finite(_plain(g), "gain in dB")
    return 10.0 ** (g / 10.0)


def linear_to_db(x: float) -> float:
    x = _finite(x, "linear ratio")
    if x <= 0.0:
        raise ValueError(f"linear ratio must be positive to express in dB, got {x!r}")
    return 10.0 * math.log10(x)


def wavelength(carrier_frequency: float) -> float:
    """Free-space wavelength in meters for a carrier frequency in Hz."""
    f = _finite(carrier_frequency, "carrier frequency")
    if f <= 0.0:
        raise ValueError(f"carrier frequency must be positive, got {f!r}")
    return SPEED_OF_LIGHT / f
