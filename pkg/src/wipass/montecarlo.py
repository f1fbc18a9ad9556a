"""Deterministic Monte Carlo engine.

Trials are split into contiguous chunks that may run on any number of
threads. Every random quantity comes from counter-based substreams keyed by
``(seed, trial, scheme tag)``, and the per-trial rates are reassembled in
trial order before any reduction, so results do not depend on the thread
count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .channel import NEAR_FIELD_GUARD, ChannelParams, free_space_intercept
from .geometry import SystemGeometry, pa_arc_lengths, user_from_uniforms
from .rng import split_seed, substream
from .schemes import (
    ALL_SCHEMES,
    RELAY_MODES,
    USER_TAG,
    PowerConfig,
    Scheme,
    TrialOutcome,
    evaluate,
)
from .units import REFERENCE_DISTANCE

Z95 = 1.96
DEFAULT_TRIALS = 10_000


class SimulationError(RuntimeError):
    pass


@dataclass(frozen=True)
class RunSpec:
    n_trials: int = DEFAULT_TRIALS
    master_seed: int = 1
    schemes: tuple = ALL_SCHEMES
    powers: PowerConfig = field(default_factory=lambda: PowerConfig.from_dbm(20.0))
    relay_mode: str = "af"

    def __post_init__(self):
        if int(self.n_trials) != self.n_trials or self.n_trials < 1:
            raise ValueError(f"n_trials must be an integer >= 1, got {self.n_trials!r}")
        split_seed(self.master_seed)
        if self.relay_mode not in RELAY_MODES:
            raise ValueError(f"relay mode must be one of {RELAY_MODES}")
        object.__setattr__(self, "schemes", tuple(Scheme(s) for s in self.schemes))
        if not self.schemes:
            raise ValueError("at least one scheme is required")


@dataclass(frozen=True)
class RateStatistics:
    mean: float
    std_error: float
    ci95_low: float
    ci95_high: float
    n: int

    @classmethod
    def from_rates(cls, rates) -> "RateStatistics":
        rates = np.asarray(rates, dtype=float)
        n = rates.size
        if n == 0:
            raise ValueError("no samples")
        mean = math.fsum(rates) / n
        se = float(np.std(rates, ddof=1)) / math.sqrt(n) if n > 1 else 0.0
        return cls(mean, se, mean - Z95 * se, mean + Z95 * se, n)


@dataclass
class PointSamples:
    """Per-trial outputs of one sweep point, in trial order."""

    users: np.ndarray
    gamma_hop1: dict
    gamma_hop2: dict
    rates: dict

    def statistics(self) -> dict:
        return {s: RateStatistics.from_rates(r) for s, r in self.rates.items()}

    def outcome(self, scheme: Scheme, trial: int) -> TrialOutcome:
        return TrialOutcome(scheme, float(self.gamma_hop1[scheme][trial]),
                            float(self.gamma_hop2[scheme][trial]),
                            float(self.rates[scheme][trial]))


def _require(ok, message: str, start: int):
    bad = np.flatnonzero(~np.asarray(ok))
    if bad.size:
        raise SimulationError(f"trial {start + int(bad[0])}: {message}")


def _path_loss(d, exponent, intercept, start):
    _require(d >= REFERENCE_DISTANCE,
             f"link distance below the {REFERENCE_DISTANCE} m reference distance", start)
    return intercept * d ** (-exponent)


def _combine(g1, g2, relay_mode):
    if relay_mode == "af":
        return g1 * g2 / (g1 + g2 + 1.0)
    return np.minimum(g1, g2)


class _ChunkEvaluator:
    """Vectorized evaluation of all schemes over one contiguous trial range."""

    def __init__(self, geom: SystemGeometry, params: ChannelParams, spec: RunSpec):
        self.geom = geom
        self.params = params
        self.spec = spec
        self.intercept = free_space_intercept(params)
        self.sigma = params.shadowing_sigma_db

    def __call__(self, bounds):
        start, stop = bounds
        g, spec = self.geom, self.spec
        area = g.service_area
        u1, u2 = kernels.user_uniforms(spec.master_seed, USER_TAG, start, stop)
        ux, uy = user_from_uniforms(area, u1, u2)
        uz = np.full_like(ux, area.origin.z)
        users = np.column_stack((ux, uy, uz))
        out = {}
        for scheme in spec.schemes:
            out[scheme] = getattr(self, "_" + scheme.value)(scheme, start, stop, users)
        return users, out

    def _hop(self, scheme, start, stop, offset, n_ant, k):
        p = self.params
        return kernels.hop_gain_factors(self.spec.master_seed, scheme.tag, start, stop,
                                        offset, n_ant, k, self.sigma, p.fading)

    def _pa(self, users, start):
        wg = self.geom.waveguide
        s = pa_arc_lengths(wg, users[:, 0], users[:, 1])
        f = wg.feed_point
        pa = np.column_stack((f.x + s * wg.axis.x, f.y + s * wg.axis.y,
                              np.full_like(s, f.z)))
        d = np.linalg.norm(pa - users, axis=1)
        _require(d >= NEAR_FIELD_GUARD, "PA-user distance inside the near-field guard", start)
        return s, pa, d

    def _bs_relay(self, scheme, start, stop):
        g, p = self.geom, self.params
        d = np.linalg.norm(g.bs_position.as_array() - g.relay_rx_position.as_array())
        pl = _path_loss(np.array([d]), p.ple_relay_links, self.intercept, start)[0]
        fad = self._hop(scheme, start, stop, 0, p.n_bs_antennas, p.rician_k)
        return self.spec.powers.bs_power * fad * pl

    def _WiPass(self, scheme, start, stop, users):
        p, pw = self.params, self.spec.powers
        s, pa, d_user = self._pa(users, start)
        sep = np.linalg.norm(pa - self.geom.relay_rx_position.as_array(), axis=1)
        iso = self.intercept / np.maximum(sep, REFERENCE_DISTANCE) ** 2
        si = pw.relay_power * p.si_cancellation * iso
        g1 = self._bs_relay(scheme, start, stop) / (p.noise_power + si)
        wg = 10.0 ** (-p.waveguide_loss_db_per_m * s / 10.0)
        g2 = pw.relay_power * wg * (self.intercept / d_user ** 2) / p.noise_power
        return g1, g2, _combine(g1, g2, self.spec.relay_mode)

    def _Pass(self, scheme, start, stop, users):
        p, pw = self.params, self.spec.powers
        s, _, d_user = self._pa(users, start)
        arc = self.geom.bs_relay_distance + s
        wg = 10.0 ** (-p.waveguide_loss_db_per_m * arc / 10.0)
        g = pw.bs_power * wg * (self.intercept / d_user ** 2) / p.noise_power
        return g, np.zeros_like(g), g

    def _fd(self, scheme, start, stop, users, ideal):
        p, pw = self.params, self.spec.powers
        si = 0.0 if ideal else pw.relay_power * p.si_cancellation
        g1 = self._bs_relay(scheme, start, stop) / (p.noise_power + si)
        d = np.linalg.norm(users - self.geom.relay_rx_position.as_array(), axis=1)
        pl = _path_loss(d, p.ple_relay_links, self.intercept, start)
        fad = self._hop(scheme, start, stop, p.n_bs_antennas + 1, p.n_relay_tx_antennas, -1.0)
        g2 = pw.relay_power * fad * pl / p.noise_power
        return g1, g2, _combine(g1, g2, self.spec.relay_mode)

    def _FdRelayIdeal(self, scheme, start, stop, users):
        return self._fd(scheme, start, stop, users, True)

    def _FdRelayPractical(self, scheme, start, stop, users):
        return self._fd(scheme, start, stop, users, False)

    def _DirectConventional(self, scheme, start, stop, users):
        p, pw = self.params, self.spec.powers
        d = np.linalg.norm(users - self.geom.bs_position.as_array(), axis=1)
        pl = _path_loss(d, p.ple_direct, self.intercept, start)
        fad = self._hop(scheme, start, stop, 0, p.n_bs_antennas, -1.0)
        g = pw.bs_power * fad * pl / p.noise_power
        return g, np.zeros_like(g), g


def chunk_bounds(n_trials: int, n_chunks: int) -> list:
    n_chunks = max(1, min(int(n_chunks), n_trials))
    edges = [n_trials * i // n_chunks for i in range(n_chunks + 1)]
    return list(zip(edges[:-1], edges[1:]))


def simulate_point(spec: RunSpec, geom: SystemGeometry, params: ChannelParams,
                   threads: int = 1, chunk_size: int = 50_000) -> PointSamples:
    """Run every trial of one sweep point and keep per-trial outputs."""
    n_chunks = max(int(threads), -(-spec.n_trials // chunk_size))
    bounds = chunk_bounds(spec.n_trials, n_chunks)
    evaluator = _ChunkEvaluator(geom, params, spec)
    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            parts = list(pool.map(evaluator, bounds))
    else:
        parts = [evaluator(b) for b in bounds]
    users = np.concatenate([u for u, _ in parts])
    g1, g2, rates = {}, {}, {}
    for scheme in spec.schemes:
        g1[scheme] = np.concatenate([out[scheme][0] for _, out in parts])
        g2[scheme] = np.concatenate([out[scheme][1] for _, out in parts])
        rates[scheme] = np.log2(1.0 + np.concatenate([out[scheme][2] for _, out in parts]))
    return PointSamples(users, g1, g2, rates)


def run_point(spec: RunSpec, geom: SystemGeometry, params: ChannelParams,
              threads: int = 1) -> dict:
    """Mean rate and 95 % confidence interval for every scheme of ``spec``."""
    return simulate_point(spec, geom, params, threads).statistics()


def run_point_scalar(spec: RunSpec, geom: SystemGeometry, params: ChannelParams) -> PointSamples:
    """Trial-by-trial reference path through the scalar evaluators.

    Orders of magnitude slower than :func:`simulate_point`; used to cross-check it.
    """
    from .geometry import draw_user

    users = []
    g1 = {s: [] for s in spec.schemes}
    g2 = {s: [] for s in spec.schemes}
    rates = {s: [] for s in spec.schemes}
    for t in range(spec.n_trials):
        user = draw_user(geom.service_area, substream(spec.master_seed, t, USER_TAG))
        users.append((user.x, user.y, user.z))
        for s in spec.schemes:
            try:
                o = evaluate(s, geom, params, spec.powers, user,
                             substream(spec.master_seed, t, s.tag), spec.relay_mode)
            except ValueError as exc:
                raise SimulationError(f"trial {t}: {exc}") from exc
            g1[s].append(o.gamma_hop1)
            g2[s].append(o.gamma_hop2)
            rates[s].append(o.rate)
    arr = lambda d: {k: np.array(v) for k, v in d.items()}  # noqa: E731
    return PointSamples(np.array(users), arr(g1), arr(g2), arr(rates))
