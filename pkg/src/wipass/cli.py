"""Command line entry point: ``wipass {power-sweep,distance-sweep,point}``."""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from . import __version__, kernels
from .experiment import (
    Config,
    ConfigError,
    SweepKind,
    emit_plot_data,
    read_config,
    run_config,
    write_csv,
)
from .montecarlo import SimulationError

log = logging.getLogger("wipass")

COMMANDS = {
    "power-sweep": SweepKind.POWER,
    "distance-sweep": SweepKind.DISTANCE,
    "point": SweepKind.POINT,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wipass",
        description="Monte Carlo rate comparison of Wi-PASS, PASS, FD relays and direct links.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "power-sweep": "mean rate versus transmit power",
        "distance-sweep": "mean rate versus BS-relay distance",
        "point": "mean rate at one configuration",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text, description=text)
        p.add_argument("--config", type=Path, help="key = value configuration file (or a result CSV)")
        p.add_argument("--seed", type=int, help="master seed (overrides config)")
        p.add_argument("--trials", type=int, help="trials per point (overrides config)")
        p.add_argument("--schemes", help="comma-separated scheme names (overrides config)")
        p.add_argument("--out-dir", type=Path, default=Path("."), help="output directory")
        p.add_argument("--threads", type=int, default=1, help="concurrent executors")
        p.add_argument("--relay-mode", choices=("af", "df"), help="relaying mode (overrides config)")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def _resolve(args) -> Config:
    cfg = read_config(args.config) if args.config else Config()
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = str(args.seed)
    if args.trials is not None:
        overrides["trials"] = str(args.trials)
    if args.schemes is not None:
        overrides["schemes"] = args.schemes
    if args.relay_mode is not None:
        overrides["relay_mode"] = args.relay_mode
    return cfg.updated(**overrides)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    kind = COMMANDS[args.command]
    if args.threads < 1:
        print("wipass: error: --threads must be at least 1", file=sys.stderr)
        return 2
    try:
        cfg = _resolve(args)
    except ConfigError as exc:
        print(f"wipass: config error: {exc}", file=sys.stderr)
        return 2
    stem = args.command.replace("-", "_")
    log.info("backend %s, %d trials per point, %d thread(s)", kernels.BACKEND, cfg["trials"],
             args.threads)
    t0 = time.perf_counter()
    try:
        result = run_config(cfg, kind, args.threads)
        args.out_dir.mkdir(parents=True, exist_ok=True)
        csv_path = write_csv(result, args.out_dir / f"{stem}.csv")
        emit_plot_data(result, args.out_dir, stem)
    except (SimulationError, ValueError) as exc:
        print(f"wipass: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"wipass: I/O error: {exc}", file=sys.stderr)
        return 1
    log.info("finished in %.2f s", time.perf_counter() - t0)
    print(f"{'value':>8}  {'scheme':<20} {'mean':>10} {'ci95':>23}")
    for r in result.rows:
        print(f"{r.sweep_value:>8g}  {r.scheme.value:<20} {r.mean:>10.4f} "
              f"[{r.ci95_low:>9.4f}, {r.ci95_high:>9.4f}]")
    print(f"wrote {csv_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
