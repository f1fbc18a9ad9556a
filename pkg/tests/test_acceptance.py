"""Acceptance criteria.

Each test prints one ``[PASS]``/``[FAIL]`` line (visible without ``-s``) and
then asserts. Run alone with ``pytest tests/test_acceptance.py`` or
``python3 tests/test_acceptance.py``.
"""

import math
import time

import numpy as np
import pytest

from wipass.channel import (
    SI_CONVENTIONAL,
    SI_SEPARATED,
    ChannelParams,
    free_space_intercept,
    sample_rayleigh_vector,
    sample_rician_vector,
    si_power,
)
from wipass.cli import main as cli_main
from wipass.experiment import Config, run_config
from wipass.geometry import Point3, Waveguide, canonical_geometry, distance, pa_position_for_user
from wipass.montecarlo import RunSpec, run_point, simulate_point
from wipass.rng import block_uniforms, substream
from wipass.schemes import ALL_SCHEMES, PowerConfig, Scheme, af_end_to_end_sinr, eval_pass, eval_wipass
from wipass.units import dbm_to_watts, linear_to_db, watts_to_dbm
from wipass import kernels

import linkbudget_oracle as oracle

SEED = 1
N_TRIALS = 20_000
WI, PA, FDI, FDP, DIR = (Scheme.WiPass, Scheme.Pass, Scheme.FdRelayIdeal,
                         Scheme.FdRelayPractical, Scheme.DirectConventional)


@pytest.fixture
def report(capsys):
    def emit(name, checks):
        ok = all(c for c, _ in checks)
        lines = [f"[{'PASS' if ok else 'FAIL'}] {name}"]
        lines += [f"       {'ok ' if c else 'BAD'} {d}" for c, d in checks]
        with capsys.disabled():
            print("\n" + "\n".join(lines))
        failed = [d for c, d in checks if not c]
        assert ok, "; ".join(failed)
    return emit


def _separated(lo, hi):
    """``hi`` strictly above ``lo`` with non-overlapping 95 % intervals."""
    return hi.ci95_low > lo.ci95_high


def test_criterion_1_rate_ordering(report):
    t0 = time.perf_counter()
    spec = RunSpec(n_trials=N_TRIALS, master_seed=SEED, powers=PowerConfig.from_dbm(20.0))
    st = run_point(spec, canonical_geometry(50.0), ChannelParams(), threads=8)
    elapsed = time.perf_counter() - t0

    def pair(hi, lo):
        return (_separated(st[lo], st[hi]),
                f"{hi.value} {st[hi].mean:.4f} [{st[hi].ci95_low:.4f}, {st[hi].ci95_high:.4f}] > "
                f"{lo.value} {st[lo].mean:.4f} [{st[lo].ci95_low:.4f}, {st[lo].ci95_high:.4f}]")

    checks = [pair(PA, WI), pair(WI, FDP), pair(FDI, FDP)]
    checks += [pair(s, DIR) for s in (WI, PA, FDI, FDP)]
    checks.append((st[WI].mean >= st[FDI].mean - 0.1,
                   f"WiPass {st[WI].mean:.4f} >= FdRelayIdeal {st[FDI].mean:.4f} - 0.1"))
    checks.append((elapsed < 30.0, f"runtime {elapsed:.2f} s < 30 s"))
    report("criterion 1: rate ordering at 20 dBm, D = 50 m, n = 20000", checks)


@pytest.fixture(scope="module")
def dist_sweep():
    cfg = Config().updated(trials=str(N_TRIALS), seed=str(SEED))
    return run_config(cfg, "distance", threads=8)


def test_criterion_2a_pass_declines_with_waveguide_loss(report, dist_sweep):
    grid = sorted({r.sweep_value for r in dist_sweep.rows})
    means = [dist_sweep.mean(d, PA) for d in grid]
    checks = [(all(a > b for a, b in zip(means, means[1:])),
               "PASS mean strictly decreasing: " + ", ".join(f"{m:.4f}" for m in means))]
    # rate drop a 0.08 dB/m * 90 m SNR loss produces on the D = 10 m trials
    spec = RunSpec(n_trials=N_TRIALS, master_seed=SEED, schemes=[PA])
    g10 = simulate_point(spec, canonical_geometry(grid[0]), ChannelParams()).gamma_hop1[PA]
    loss = 10 ** (-0.08 * (grid[-1] - grid[0]) / 10)
    required = float(np.mean(np.log2(1 + g10) - np.log2(1 + g10 * loss)))
    drop = means[0] - means[-1]
    checks.append((drop >= required - 1e-9,
                   f"drop {drop:.6f} b/s/Hz >= {required:.6f} (7.2 dB of SNR)"))
    report("criterion 2a: PASS rate declines with accumulated in-waveguide loss", checks)


def test_criterion_2b_direct_degrades_most(report, dist_sweep):
    rel = {s: 1 - dist_sweep.mean(100.0, s) / dist_sweep.mean(10.0, s) for s in ALL_SCHEMES}
    worst = max(rel, key=rel.get)
    detail = ", ".join(f"{s.value} {rel[s]:.4f}" for s in ALL_SCHEMES)
    report("criterion 2b: direct link has the largest relative drop 10 -> 100 m",
           [(worst is DIR, f"relative drops: {detail}")])


def test_criterion_2c_pinching_beats_fd_everywhere(report, dist_sweep):
    checks = []
    for d in sorted({r.sweep_value for r in dist_sweep.rows}):
        for s in (WI, PA):
            for fd in (FDI, FDP):
                a, b = dist_sweep.mean(d, s), dist_sweep.mean(d, fd)
                checks.append((a > b, f"D={d:g}: {s.value} {a:.4f} > {fd.value} {b:.4f}"))
    report("criterion 2c: Wi-PASS and PASS exceed both FD relays at every distance", checks)


def test_criterion_3_si_budget(report):
    p = ChannelParams()
    g = canonical_geometry(50.0)
    tx = dbm_to_watts(20.0)
    conv = watts_to_dbm(si_power(tx, g.relay_rx_position, g.relay_rx_position, p, SI_CONVENTIONAL))
    wg = g.waveguide
    worst = -math.inf
    for s in np.linspace(0.0, wg.span, 10_001):
        pa = wg.point_at(float(s))
        worst = max(worst, watts_to_dbm(si_power(tx, pa, g.relay_rx_position, p, SI_SEPARATED)))
    extra = conv - worst
    checks = [
        (abs(conv - (-65.0)) <= 0.01, f"conventional residual SI {conv:.4f} dBm = -65 dBm"),
        (worst < -120.0, f"worst Wi-PASS residual SI over PA positions {worst:.4f} dBm < -120 dBm"),
        (extra >= -linear_to_db(free_space_intercept(p)) - 0.01,
         f"separation suppression {extra:.4f} dB >= 61.39 dB"),
    ]
    report("criterion 3: self-interference budget at 20 dBm relay power", checks)


ORACLE_USERS = [(5.0, 5.0), (2.0, 3.0), (0.3, 8.0), (10.0, 10.0), (7.5, 1.2)]


def test_criterion_4_oracle_equivalence(report):
    p = ChannelParams(fading=False, shadowing_variance_db2=0.0)
    g = canonical_geometry(50.0)
    pw = PowerConfig.from_dbm(20.0)
    checks = []
    for ux, uy in ORACLE_USERS:
        u = Point3(ux, uy, 0.0)
        wi = eval_wipass(g, p, pw, u, substream(SEED, 0, WI.tag))
        pa = eval_pass(g, p, pw, u)
        want_wi = oracle.af_rate_from_db(oracle.wipass_hop1_snr_db(20, 20, 50, ux),
                                         oracle.wipass_hop2_snr_db(20, ux, uy))
        want_pa = oracle.rate_from_db(oracle.pass_snr_db(20, 50, ux, uy))
        checks.append((abs(wi.rate - want_wi) <= 1e-9,
                       f"user ({ux:g},{uy:g}) Wi-PASS {wi.rate:.12f} vs oracle {want_wi:.12f}"))
        checks.append((abs(pa.rate - want_pa) <= 1e-9,
                       f"user ({ux:g},{uy:g}) PASS {pa.rate:.12f} vs oracle {want_pa:.12f}"))
    c = Point3(5.0, 5.0, 0.0)
    g2 = linear_to_db(eval_wipass(g, p, pw, c, substream(SEED, 0, WI.tag)).gamma_hop2)
    gp = linear_to_db(eval_pass(g, p, pw, c).gamma_hop1)
    checks.append((abs(g2 - 38.67) < 0.005, f"worked Wi-PASS hop 2 SNR {g2:.4f} dB = 38.67 dB"))
    checks.append((abs(gp - 34.67) < 0.005, f"worked PASS SNR {gp:.4f} dB = 34.67 dB"))
    # the vectorized engine against the same oracle, deterministic mode
    spec = RunSpec(n_trials=200, master_seed=SEED, schemes=[WI, PA])
    sm = simulate_point(spec, g, p)
    errs = []
    for t in range(200):
        ux, uy, _ = sm.users[t]
        errs.append(abs(sm.rates[WI][t] - oracle.af_rate_from_db(
            oracle.wipass_hop1_snr_db(20, 20, 50, ux), oracle.wipass_hop2_snr_db(20, ux, uy))))
        errs.append(abs(sm.rates[PA][t] - oracle.rate_from_db(oracle.pass_snr_db(20, 50, ux, uy))))
    checks.append((max(errs) <= 1e-9, f"engine vs oracle over 200 drops, max error {max(errs):.2e}"))
    report("criterion 4: deterministic-mode oracle equivalence within 1e-9 b/s/Hz", checks)


def test_criterion_5_statistical_suite(report):
    checks = []
    for k in (0.0, 10.0, 1e12):
        h = sample_rician_vector(1_000_000, k, substream(SEED, 0, 1))
        m = float(np.mean(h.real ** 2 + h.imag ** 2))
        checks.append((abs(m - 1) <= 0.005, f"Rician k={k:g}: E|h|^2 = {m:.5f}"))
    h = sample_rayleigh_vector(1_000_000, substream(SEED, 0, 2))
    m = float(np.mean(h.real ** 2 + h.imag ** 2))
    checks.append((abs(m - 1) <= 0.005, f"Rayleigh: E|h|^2 = {m:.5f}"))
    # same draws through the Monte Carlo kernel path (single antenna, no shadowing)
    for k in (0.0, 10.0, 1e12, -1.0):
        f = kernels.hop_gain_factors(SEED, 3, 0, 1_000_000, 0, 1, k, 0.0, True)
        checks.append((abs(f.mean() - 1) <= 0.005,
                       f"kernel {'Rayleigh' if k < 0 else f'Rician k={k:g}'}: "
                       f"E|h|^2 = {f.mean():.5f}"))
    sigma = ChannelParams().shadowing_sigma_db
    x = 10 * np.log10(kernels.hop_gain_factors(SEED, 4, 0, 1_000_000, 0, 1, 0.0, sigma, False))
    v = float(x.var(ddof=1))
    checks.append((abs(v - 11) <= 0.1, f"shadowing dB-domain variance {v:.4f} = 11 +- 0.1"))

    rng = np.random.default_rng(SEED)
    pairs = 10 ** rng.uniform(-3, 6, size=(100_000, 2))
    violations = sum(af_end_to_end_sinr(a, b) > min(a, b) for a, b in pairs)
    checks.append((violations == 0, f"AF bound violations on 1e5 pairs: {violations}"))

    wg = Waveguide(Point3(0.0, 5.0, 3.0), Point3(1.0, 0.0, 0.0), 10.0)
    u1, u2 = block_uniforms(SEED, np.arange(1000, dtype=np.uint64), 9, 0)
    cand = np.arange(10_001) * 1e-3
    worst = -math.inf
    for x_, y_ in zip(-3.0 + 16.0 * u1, 10.0 * u2):
        user = Point3(x_, y_, 0.0)
        brute = float(np.sqrt((cand - x_) ** 2 + (5.0 - y_) ** 2 + 9.0).min())
        worst = max(worst, distance(pa_position_for_user(wg, user), user) - brute)
    checks.append((worst <= 1e-9, f"PA placement minus 1 mm brute force, worst {worst:.2e} m"))
    report("criterion 5: statistical property suite", checks)


def test_criterion_6_determinism_and_runtime(report, tmp_path):
    args = ["power-sweep", "--seed", str(SEED), "--trials", "10000"]
    t0 = time.perf_counter()
    assert cli_main(args + ["--threads", "1", "--out-dir", str(tmp_path / "t1")]) == 0
    t1 = time.perf_counter() - t0
    assert cli_main(args + ["--threads", "8", "--out-dir", str(tmp_path / "t8")]) == 0
    a = (tmp_path / "t1" / "power_sweep.csv").read_bytes()
    b = (tmp_path / "t8" / "power_sweep.csv").read_bytes()
    rows = [ln for ln in a.decode().splitlines() if ln and not ln.startswith("#")]
    checks = [
        (a == b, f"power_sweep.csv byte-identical for 1 and 8 threads ({len(a)} bytes)"),
        (len(rows) == 1 + 7 * 5, f"{len(rows) - 1} rows = 7 grid points x 5 schemes"),
        (t1 < 60.0, f"full power sweep (7 x 5 x 10000) took {t1:.2f} s < 60 s"),
    ]
    report(f"criterion 6: determinism across thread counts, runtime ({kernels.BACKEND} backend)",
           checks)


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
