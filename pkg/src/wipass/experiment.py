"""Sweep orchestration, configuration files and result files.

Configuration is plain text, one ``key = value`` per line, ``#`` starts a
comment. Every key is optional and falls back to the canonical default in
``CONFIG_KEYS``; unknown keys are rejected.
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

from . import __version__
from .channel import ChannelParams
from .geometry import SystemGeometry, canonical_geometry
from .montecarlo import RunSpec, run_point
from .rng import SEED_MAX
from .schemes import ALL_SCHEMES, RELAY_MODES, PowerConfig, Scheme
from .units import db_to_linear, dbm_to_watts

CSV_HEADER = ("sweep_value", "scheme", "mean_rate_bps_hz", "ci95_low", "ci95_high", "n_trials")
POWER_MODES = ("joint", "bs", "relay")
_META_ONLY_KEYS = ("sweep", "artifact_version")


class ConfigError(ValueError):
    pass


class SweepKind(str, Enum):
    POWER = "power"
    DISTANCE = "distance"
    POINT = "point"


def _fmt_float(v: float) -> str:
    return repr(float(v))


def _fmt_grid(values) -> str:
    return ",".join(_fmt_float(v) for v in values)


def _parse_float(text: str) -> float:
    v = float(text)
    if not math.isfinite(v):
        raise ValueError("must be finite")
    return v


def _parse_int(text: str) -> int:
    if not re.fullmatch(r"[+-]?\d+", text.strip()):
        raise ValueError("must be an integer")
    return int(text)


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("on", "true", "yes", "1"):
        return True
    if t in ("off", "false", "no", "0"):
        return False
    raise ValueError("must be on or off")


def _parse_grid(text: str) -> tuple:
    """Comma-separated values, or ``start:step:stop`` with inclusive stop."""
    text = text.strip()
    if ":" in text:
        parts = [_parse_float(p) for p in text.split(":")]
        if len(parts) != 3:
            raise ValueError("range must be start:step:stop")
        start, step, stop = parts
        if step <= 0 or stop < start:
            raise ValueError("range needs a positive step and stop >= start")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(round(start + i * step, 12) for i in range(n))
    values = tuple(_parse_float(p) for p in text.split(",") if p.strip())
    if not values:
        raise ValueError("grid is empty")
    return values


def _parse_schemes(text: str) -> tuple:
    schemes = tuple(Scheme.parse(s) for s in text.split(",") if s.strip())
    if not schemes:
        raise ValueError("no schemes given")
    if len(set(schemes)) != len(schemes):
        raise ValueError("duplicate scheme")
    return schemes


def _choice(options):
    def parse(text):
        t = text.strip().lower()
        if t not in options:
            raise ValueError(f"must be one of {', '.join(options)}")
        return t
    return parse


def _check(pred, message):
    def check(v):
        if not pred(v):
            raise ValueError(message)
    return check


_positive = _check(lambda v: v > 0, "must be positive")
_non_negative = _check(lambda v: v >= 0, "must be non-negative")
_at_least_one = _check(lambda v: v >= 1, "must be at least 1")
_grid_at_least_one = _check(lambda vs: all(v >= 1 for v in vs), "every distance must be >= 1 m")


@dataclass(frozen=True)
class _Key:
    default: object
    parse: object
    fmt: object = _fmt_float
    check: object = None
    help: str = ""


CONFIG_KEYS = {
    "pass_height_m": _Key(3.0, _parse_float, check=_positive,
                          help="waveguide height above the ground plane"),
    "coverage_side_m": _Key(10.0, _parse_float, check=_positive,
                            help="side of the square service area"),
    "bs_relay_distance_m": _Key(50.0, _parse_float, check=_at_least_one,
                                help="BS to relay receive antenna distance"),
    "carrier_frequency_ghz": _Key(28.0, _parse_float, check=_positive, help="carrier frequency"),
    "noise_power_dbm": _Key(-90.0, _parse_float, help="receiver noise power"),
    "waveguide_loss_db_per_m": _Key(0.08, _parse_float, check=_non_negative,
                                    help="in-waveguide propagation loss"),
    "n_bs_antennas": _Key(12, _parse_int, str, _at_least_one, "BS transmit antennas"),
    "n_relay_antennas": _Key(12, _parse_int, str, _at_least_one, "relay transmit antennas"),
    "ple_relay_links": _Key(2.55, _parse_float, check=_positive,
                            help="path-loss exponent of BS-relay and relay-user links"),
    "ple_direct": _Key(4.0, _parse_float, check=_positive,
                       help="path-loss exponent of the direct BS-user link"),
    "shadowing_variance_db2": _Key(11.0, _parse_float, check=_non_negative,
                                   help="variance of log-normal shadowing in dB^2 (0 disables)"),
    "rician_k_db": _Key(10.0, _parse_float, help="Rician K factor of the BS-relay link"),
    "si_cancellation_db": _Key(-85.0, _parse_float, help="FD self-interference cancellation level"),
    "fading": _Key(True, _parse_bool, lambda v: "on" if v else "off",
                   help="small-scale fading on/off (off uses unit-magnitude coefficients)"),
    "bs_power_dbm": _Key(20.0, _parse_float, help="BS power for distance sweeps and points"),
    "relay_power_dbm": _Key(20.0, _parse_float,
                            help="relay power for distance sweeps, points and non-joint power sweeps"),
    "power_grid_dbm": _Key((0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0), _parse_grid, _fmt_grid,
                           help="power sweep grid"),
    "power_sweep_mode": _Key("joint", _choice(POWER_MODES), str,
                             help="joint: BS and relay follow the grid; bs/relay: only that one does"),
    "distance_grid_m": _Key(tuple(float(d) for d in range(10, 101, 10)), _parse_grid, _fmt_grid,
                            _grid_at_least_one, "distance sweep grid"),
    "schemes": _Key(ALL_SCHEMES, _parse_schemes, lambda v: ",".join(s.value for s in v),
                    help="schemes to simulate"),
    "relay_mode": _Key("af", _choice(RELAY_MODES), str, help="af or df relaying"),
    "trials": _Key(10_000, _parse_int, str, _at_least_one, help="Monte Carlo trials per point"),
    "seed": _Key(1, _parse_int, str, _check(lambda v: 0 <= v <= SEED_MAX, "must fit in 64 bits"),
                 "master seed"),
}


@dataclass(frozen=True)
class Config:
    values: dict = field(default_factory=lambda: {k: spec.default for k, spec in CONFIG_KEYS.items()})

    def __getitem__(self, key):
        return self.values[key]

    def updated(self, **overrides) -> "Config":
        v = dict(self.values)
        for key, value in overrides.items():
            if key not in CONFIG_KEYS:
                raise ConfigError(f"unknown configuration key {key!r}")
            spec = CONFIG_KEYS[key]
            if isinstance(value, str):
                value = _convert(key, value, "override")
            elif spec.check is not None:
                try:
                    spec.check(value)
                except ValueError as exc:
                    raise ConfigError(f"{key}: {exc} (override)") from None
            v[key] = value
        return Config(v)

    def lines(self) -> list:
        return [f"{k} = {CONFIG_KEYS[k].fmt(self.values[k])}" for k in CONFIG_KEYS]

    def geometry(self) -> SystemGeometry:
        return canonical_geometry(self["bs_relay_distance_m"], self["pass_height_m"],
                                  self["coverage_side_m"])

    def channel_params(self) -> ChannelParams:
        return ChannelParams(
            carrier_frequency=self["carrier_frequency_ghz"] * 1e9,
            noise_power=dbm_to_watts(self["noise_power_dbm"]),
            ple_relay_links=self["ple_relay_links"],
            ple_direct=self["ple_direct"],
            shadowing_variance_db2=self["shadowing_variance_db2"],
            rician_k=db_to_linear(self["rician_k_db"]),
            waveguide_loss_db_per_m=self["waveguide_loss_db_per_m"],
            si_cancellation=db_to_linear(self["si_cancellation_db"]),
            n_bs_antennas=self["n_bs_antennas"],
            n_relay_tx_antennas=self["n_relay_antennas"],
            fading=self["fading"],
        )

    def sweep_spec(self, kind) -> "SweepSpec":
        kind = SweepKind(kind)
        if kind is SweepKind.POWER:
            grid = self["power_grid_dbm"]
        elif kind is SweepKind.DISTANCE:
            grid = self["distance_grid_m"]
        else:
            grid = (self["bs_power_dbm"],)
        run = RunSpec(n_trials=self["trials"], master_seed=self["seed"],
                      schemes=self["schemes"], relay_mode=self["relay_mode"])
        return SweepSpec(kind, tuple(grid), self["bs_power_dbm"], self["relay_power_dbm"],
                         self["power_sweep_mode"], run)


def _convert(key: str, text: str, where: str):
    spec = CONFIG_KEYS[key]
    try:
        value = spec.parse(text)
        if spec.check is not None:
            spec.check(value)
    except ValueError as exc:
        raise ConfigError(f"{where}: {key}: invalid value {text.strip()!r}: {exc}") from None
    return value


def parse_config_text(text: str, source: str = "<config>", skip=()) -> Config:
    values = {k: spec.default for k, spec in CONFIG_KEYS.items()}
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        if "=" not in line:
            raise ConfigError(f"{where}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in skip:
            continue
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{where}: unknown configuration key {key!r}")
        if key in seen:
            raise ConfigError(f"{where}: {key} already set on line {seen[key]}")
        seen[key] = lineno
        values[key] = _convert(key, value, where)
    return Config(values)


def read_config(path) -> Config:
    """Read a configuration file, or the metadata block of a result CSV."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read configuration: {exc.strerror}") from None
    if path.suffix == ".csv":
        meta = [ln[1:] for ln in text.splitlines() if ln.startswith("#")]
        return parse_config_text("\n".join(meta), str(path), skip=_META_ONLY_KEYS)
    return parse_config_text(text, str(path))


def load_config(path=None, kind=SweepKind.POWER):
    """Return ``(geometry, channel params, sweep spec)`` for a config file."""
    cfg = read_config(path) if path is not None else Config()
    return cfg.geometry(), cfg.channel_params(), cfg.sweep_spec(kind)


@dataclass(frozen=True)
class SweepSpec:
    kind: SweepKind
    grid: tuple
    bs_power_dbm: float = 20.0
    relay_power_dbm: float = 20.0
    power_mode: str = "joint"
    run: RunSpec = field(default_factory=RunSpec)

    @property
    def schemes(self):
        return self.run.schemes

    def powers_at(self, value: float) -> PowerConfig:
        if self.kind is not SweepKind.POWER:
            return PowerConfig.from_dbm(self.bs_power_dbm, self.relay_power_dbm)
        if self.power_mode == "joint":
            return PowerConfig.from_dbm(value, value)
        if self.power_mode == "bs":
            return PowerConfig.from_dbm(value, self.relay_power_dbm)
        return PowerConfig.from_dbm(self.bs_power_dbm, value)

    def geometry_at(self, geom: SystemGeometry, value: float) -> SystemGeometry:
        if self.kind is SweepKind.DISTANCE:
            return geom.with_bs_relay_distance(value)
        return geom


@dataclass(frozen=True)
class SweepRow:
    sweep_value: float
    scheme: Scheme
    mean: float
    ci95_low: float
    ci95_high: float
    n_trials: int

    def cells(self) -> list:
        return [_fmt_float(self.sweep_value), self.scheme.value, f"{self.mean:.9g}",
                f"{self.ci95_low:.9g}", f"{self.ci95_high:.9g}", str(self.n_trials)]


@dataclass
class SweepResult:
    kind: SweepKind
    rows: list
    metadata: list = field(default_factory=list)

    def series(self, scheme: Scheme) -> list:
        return [r for r in self.rows if r.scheme is scheme]

    def mean(self, value: float, scheme: Scheme) -> float:
        for r in self.rows:
            if r.sweep_value == value and r.scheme is scheme:
                return r.mean
        raise KeyError((value, scheme))


def run_sweep(spec: SweepSpec, geom: SystemGeometry, params: ChannelParams,
              threads: int = 1, metadata=None) -> SweepResult:
    rows = []
    for value in spec.grid:
        run = replace(spec.run, powers=spec.powers_at(value))
        try:
            stats = run_point(run, spec.geometry_at(geom, value), params, threads)
        except (ValueError, RuntimeError) as exc:
            raise type(exc)(f"{spec.kind.value} sweep at {value!r}: {exc}") from exc
        for scheme, st in stats.items():
            rows.append(SweepRow(float(value), scheme, st.mean, st.ci95_low, st.ci95_high, st.n))
    rows.sort(key=lambda r: (r.sweep_value, r.scheme.value))
    return SweepResult(spec.kind, rows, list(metadata or []))


def sweep_metadata(cfg: Config, kind) -> list:
    return [f"artifact_version = {__version__}", f"sweep = {SweepKind(kind).value}", *cfg.lines()]


def run_config(cfg: Config, kind, threads: int = 1) -> SweepResult:
    return run_sweep(cfg.sweep_spec(kind), cfg.geometry(), cfg.channel_params(), threads,
                     sweep_metadata(cfg, kind))


def write_csv(result: SweepResult, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        for line in result.metadata:
            fh.write(f"# {line}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in result.rows:
            w.writerow(row.cells())
    return path


def read_csv_rows(path) -> list:
    with Path(path).open(newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.DictReader(lines)
    return list(reader)


def emit_plot_data(result: SweepResult, out_dir, prefix: str = "sweep") -> list:
    """One whitespace-delimited series file per scheme: value, mean, ci_low, ci_high."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    schemes = sorted({r.scheme for r in result.rows}, key=lambda s: s.value)
    for scheme in schemes:
        path = out_dir / f"{prefix}_{scheme.value}.dat"
        with path.open("w") as fh:
            fh.write(f"# {scheme.value}: sweep_value mean_rate_bps_hz ci95_low ci95_high\n")
            for r in result.series(scheme):
                c = r.cells()
                fh.write(f"{c[0]} {c[2]} {c[3]} {c[4]}\n")
        paths.append(path)
    return paths
