"""Per-trial evaluators for the five transmission schemes.

Each evaluator turns one user drop and one random stream into per-hop SINRs
and a spectral efficiency. The order in which a scheme consumes its stream is
fixed (see ``STREAM_LAYOUT``) so that the vectorized engine in
:mod:`wipass.montecarlo` can regenerate exactly the same draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .channel import (
    SI_CONVENTIONAL,
    SI_SEPARATED,
    ChannelParams,
    mrt_power_gain,
    pa_user_gain,
    path_loss,
    sample_rayleigh_vector,
    sample_rician_vector,
    sample_shadowing,
    si_power,
    waveguide_gain,
)
from .geometry import Point3, SystemGeometry, arc_length_to_pa, distance, pa_position_for_user
from .units import dbm_to_watts

USER_TAG = 0


class Scheme(str, Enum):
    WiPass = "WiPass"
    Pass = "Pass"
    FdRelayIdeal = "FdRelayIdeal"
    FdRelayPractical = "FdRelayPractical"
    DirectConventional = "DirectConventional"

    @property
    def tag(self) -> int:
        return _TAGS[self]

    @classmethod
    def parse(cls, name: str) -> "Scheme":
        key = name.strip().lower().replace("-", "").replace("_", "")
        for s in cls:
            if key in (s.value.lower(), *_ALIASES.get(s, ())):
                return s
        raise ValueError(f"unknown scheme {name!r}; expected one of {[s.value for s in cls]}")

    def __str__(self):
        return self.value


_TAGS = {
    Scheme.WiPass: 1,
    Scheme.Pass: 2,
    Scheme.FdRelayIdeal: 3,
    Scheme.FdRelayPractical: 4,
    Scheme.DirectConventional: 5,
}

_ALIASES = {
    Scheme.WiPass: ("wipass",),
    Scheme.Pass: ("pass",),
    Scheme.FdRelayIdeal: ("fdideal", "fdrelayideal", "ideal"),
    Scheme.FdRelayPractical: ("fdpractical", "fdrelaypractical", "practical"),
    Scheme.DirectConventional: ("direct", "conventional", "directconventional"),
}

ALL_SCHEMES = tuple(Scheme)

# Fading hops in stream order: (link, transmit array).  A hop with n antennas
# takes n blocks of fading followed by one block of shadowing.
STREAM_LAYOUT = {
    Scheme.WiPass: (("bs_relay", "bs"),),
    Scheme.Pass: (),
    Scheme.FdRelayIdeal: (("bs_relay", "bs"), ("relay_user", "relay")),
    Scheme.FdRelayPractical: (("bs_relay", "bs"), ("relay_user", "relay")),
    Scheme.DirectConventional: (("bs_user", "bs"),),
}

RELAY_MODES = ("af", "df")


@dataclass(frozen=True)
class PowerConfig:
    bs_power: float
    relay_power: float

    def __post_init__(self):
        if self.bs_power < 0 or self.relay_power < 0:
            raise ValueError("transmit powers must be non-negative")

    @classmethod
    def from_dbm(cls, bs_dbm: float, relay_dbm: float | None = None) -> "PowerConfig":
        if relay_dbm is None:
            relay_dbm = bs_dbm
        return cls(dbm_to_watts(bs_dbm), dbm_to_watts(relay_dbm))


@dataclass(frozen=True)
class TrialOutcome:
    scheme: Scheme
    gamma_hop1: float
    gamma_hop2: float
    rate: float


def af_end_to_end_sinr(g1: float, g2: float) -> float:
    """End-to-end SINR of a variable-gain amplify-and-forward relay."""
    if g1 < 0 or g2 < 0:
        raise ValueError("SINRs must be non-negative")
    return g1 * g2 / (g1 + g2 + 1.0)


def df_end_to_end_sinr(g1: float, g2: float) -> float:
    if g1 < 0 or g2 < 0:
        raise ValueError("SINRs must be non-negative")
    return min(g1, g2)


def _combine(g1: float, g2: float, relay_mode: str) -> float:
    if relay_mode == "af":
        return af_end_to_end_sinr(g1, g2)
    if relay_mode == "df":
        return df_end_to_end_sinr(g1, g2)
    raise ValueError(f"relay mode must be one of {RELAY_MODES}, got {relay_mode!r}")


def _rate(gamma: float) -> float:
    return math.log2(1.0 + gamma)


def _faded_array_gain(params: ChannelParams, n: int, rng_stream, rician: bool) -> float:
    # draws are consumed even with fading off so the stream layout never moves
    if rician:
        h = sample_rician_vector(n, params.rician_k, rng_stream)
    else:
        h = sample_rayleigh_vector(n, rng_stream)
    gain = mrt_power_gain(h) if params.fading else float(n)
    return gain * sample_shadowing(params, rng_stream)


def _bs_relay_snr_numerator(geom: SystemGeometry, params: ChannelParams,
                            powers: PowerConfig, rng_stream) -> float:
    d = distance(geom.bs_position, geom.relay_rx_position)
    g = _faded_array_gain(params, params.n_bs_antennas, rng_stream, rician=True)
    return powers.bs_power * g * path_loss(d, params.ple_relay_links, params)


def eval_wipass(geom: SystemGeometry, params: ChannelParams, powers: PowerConfig,
                user: Point3, rng_stream, relay_mode: str = "af") -> TrialOutcome:
    pa = pa_position_for_user(geom.waveguide, user)
    arc = arc_length_to_pa(geom.waveguide, pa)
    si = si_power(powers.relay_power, pa, geom.relay_rx_position, params, SI_SEPARATED)
    g1 = _bs_relay_snr_numerator(geom, params, powers, rng_stream) / (params.noise_power + si)
    g2 = (powers.relay_power * waveguide_gain(arc, params)
          * pa_user_gain(pa, user, params) / params.noise_power)
    return TrialOutcome(Scheme.WiPass, g1, g2, _rate(_combine(g1, g2, relay_mode)))


def eval_pass(geom: SystemGeometry, params: ChannelParams, powers: PowerConfig,
              user: Point3, rng_stream=None) -> TrialOutcome:
    """Wired PASS: the waveguide runs from the BS, so the feed-to-PA length
    is the BS-relay distance plus the in-area offset."""
    pa = pa_position_for_user(geom.waveguide, user)
    arc = geom.bs_relay_distance + arc_length_to_pa(geom.waveguide, pa)
    g = (powers.bs_power * waveguide_gain(arc, params)
         * pa_user_gain(pa, user, params) / params.noise_power)
    return TrialOutcome(Scheme.Pass, g, 0.0, _rate(g))


def eval_fd_relay(geom: SystemGeometry, params: ChannelParams, powers: PowerConfig,
                  user: Point3, ideal: bool, rng_stream,
                  relay_mode: str = "af") -> TrialOutcome:
    if ideal:
        si = 0.0
    else:
        si = si_power(powers.relay_power, geom.relay_rx_position, geom.relay_rx_position,
                      params, SI_CONVENTIONAL)
    g1 = _bs_relay_snr_numerator(geom, params, powers, rng_stream) / (params.noise_power + si)
    d = distance(geom.relay_rx_position, user)
    g_relay = _faded_array_gain(params, params.n_relay_tx_antennas, rng_stream, rician=False)
    g2 = (powers.relay_power * g_relay * path_loss(d, params.ple_relay_links, params)
          / params.noise_power)
    scheme = Scheme.FdRelayIdeal if ideal else Scheme.FdRelayPractical
    return TrialOutcome(scheme, g1, g2, _rate(_combine(g1, g2, relay_mode)))


def eval_direct(geom: SystemGeometry, params: ChannelParams, powers: PowerConfig,
                user: Point3, rng_stream) -> TrialOutcome:
    d = distance(geom.bs_position, user)
    g_bs = _faded_array_gain(params, params.n_bs_antennas, rng_stream, rician=False)
    g = powers.bs_power * g_bs * path_loss(d, params.ple_direct, params) / params.noise_power
    return TrialOutcome(Scheme.DirectConventional, g, 0.0, _rate(g))


def evaluate(scheme: Scheme, geom: SystemGeometry, params: ChannelParams,
             powers: PowerConfig, user: Point3, rng_stream,
             relay_mode: str = "af") -> TrialOutcome:
    if scheme is Scheme.WiPass:
        return eval_wipass(geom, params, powers, user, rng_stream, relay_mode)
    if scheme is Scheme.Pass:
        return eval_pass(geom, params, powers, user, rng_stream)
    if scheme is Scheme.FdRelayIdeal:
        return eval_fd_relay(geom, params, powers, user, True, rng_stream, relay_mode)
    if scheme is Scheme.FdRelayPractical:
        return eval_fd_relay(geom, params, powers, user, False, rng_stream, relay_mode)
    if scheme is Scheme.DirectConventional:
        return eval_direct(geom, params, powers, user, rng_stream)
    raise ValueError(f"unknown scheme {scheme!r}")
