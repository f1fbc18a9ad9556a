"""Channel-gain models: path loss, shadowing, fading, PA and waveguide gains, FD self-interference."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import Point3, distance
from .units import REFERENCE_DISTANCE, db_to_linear, dbm_to_watts, wavelength

NEAR_FIELD_GUARD = 0.1

SI_CONVENTIONAL = "conventional"
SI_SEPARATED = "wipass"


@dataclass(frozen=True)
class ChannelParams:
    """Physical link constants. Defaults are the canonical 28 GHz set.

    ``fading=False`` replaces every small-scale fading coefficient by its
    unit-magnitude mean so that the array gain becomes the antenna count.
    """

    carrier_frequency: float = 28e9
    noise_power: float = dbm_to_watts(-90.0)
    ple_relay_links: float = 2.55
    ple_direct: float = 4.0
    shadowing_variance_db2: float = 11.0
    rician_k: float = db_to_linear(10.0)
    waveguide_loss_db_per_m: float = 0.08
    si_cancellation: float = db_to_linear(-85.0)
    n_bs_antennas: int = 12
    n_relay_tx_antennas: int = 12
    fading: bool = True

    def __post_init__(self):
        positive = ("carrier_frequency", "noise_power", "ple_relay_links", "ple_direct")
        for name in positive:
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite, got {v!r}")
        non_negative = ("shadowing_variance_db2", "rician_k", "waveguide_loss_db_per_m",
                        "si_cancellation")
        for name in non_negative:
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be non-negative and finite, got {v!r}")
        for name in ("n_bs_antennas", "n_relay_tx_antennas"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise ValueError(f"{name} must be an integer >= 1, got {v!r}")
            object.__setattr__(self, name, int(v))

    @property
    def wavelength(self) -> float:
        return wavelength(self.carrier_frequency)

    @property
    def shadowing_sigma_db(self) -> float:
        return math.sqrt(self.shadowing_variance_db2)


def free_space_intercept(params: ChannelParams) -> float:
    """Friis power gain at the 1 m reference distance, ``(lambda / 4 pi)^2``."""
    return (params.wavelength / (4.0 * math.pi)) ** 2


def path_loss(dist: float, exponent: float, params: ChannelParams) -> float:
    """Close-in path-loss model anchored at the free-space gain at 1 m."""
    if not exponent > 0:
        raise ValueError(f"path-loss exponent must be positive, got {exponent!r}")
    if not dist >= REFERENCE_DISTANCE:
        raise ValueError(
            f"link distance {dist!r} m is below the {REFERENCE_DISTANCE} m reference distance"
        )
    return free_space_intercept(params) * dist ** (-exponent)


def shadowing_factor(sigma_db: float, z: float) -> float:
    return 10.0 ** (sigma_db * z / 10.0)


def sample_shadowing(params: ChannelParams, rng_stream) -> float:
    """Log-normal shadowing factor; consumes one block."""
    z0, _ = rng_stream.normal_pairs(1)
    return shadowing_factor(params.shadowing_sigma_db, float(z0[0]))


def sample_rician_vector(n: int, k: float, rng_stream) -> np.ndarray:
    """Unit-power Rician coefficients with a zero-phase specular part; one block per entry."""
    if n < 1:
        raise ValueError("need at least one antenna")
    if not k >= 0:
        raise ValueError(f"Rician K must be non-negative, got {k!r}")
    w = rng_stream.complex_normal(n)
    return math.sqrt(k / (k + 1.0)) + math.sqrt(1.0 / (k + 1.0)) * w


def sample_rayleigh_vector(n: int, rng_stream) -> np.ndarray:
    if n < 1:
        raise ValueError("need at least one antenna")
    return rng_stream.complex_normal(n)


def mrt_power_gain(h) -> float:
    """Array gain of maximum-ratio transmission toward one receive antenna."""
    h = np.asarray(h)
    if h.size == 0:
        raise ValueError("channel vector is empty")
    return float(np.sum(h.real ** 2 + h.imag ** 2))


def free_space_gain(d: float, params: ChannelParams) -> float:
    return free_space_intercept(params) / d ** 2


def pa_user_gain(pa: Point3, user: Point3, params: ChannelParams) -> float:
    """Line-of-sight power gain of the spherical wave radiated by the active PA."""
    d = distance(pa, user)
    if d < NEAR_FIELD_GUARD:
        raise ValueError(
            f"PA-user distance {d:.4g} m is inside the {NEAR_FIELD_GUARD} m near-field guard"
        )
    return free_space_gain(d, params)


def waveguide_gain(arc_length: float, params: ChannelParams) -> float:
    if arc_length < 0:
        raise ValueError(f"arc length must be non-negative, got {arc_length!r}")
    return 10.0 ** (-params.waveguide_loss_db_per_m * arc_length / 10.0)


def separation_gain(d: float, params: ChannelParams) -> float:
    """Free-space isolation between two antennas ``d`` meters apart.

    Below the reference distance the gain is held at the 1 m intercept.
    """
    return free_space_gain(max(d, REFERENCE_DISTANCE), params)


def si_power(relay_tx_power: float, tx_pos: Point3, rx_pos: Point3,
             params: ChannelParams, scheme_kind: str) -> float:
    """Residual self-interference power at the relay receiver, in watts."""
    if relay_tx_power < 0:
        raise ValueError("transmit power must be non-negative")
    residual = relay_tx_power * params.si_cancellation
    if scheme_kind == SI_CONVENTIONAL:
        return residual
    if scheme_kind == SI_SEPARATED:
        return residual * separation_gain(distance(tx_pos, rx_pos), params)
    raise ValueError(f"unknown self-interference kind {scheme_kind!r}")
