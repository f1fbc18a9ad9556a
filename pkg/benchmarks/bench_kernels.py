"""Compare the compiled and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--trials N] [--repeat R]

Times ``hop_gain_factors`` directly and one full simulation point under each
backend, and reports the largest difference between the two outputs.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from wipass import kernels

POINT_SNIPPET = """
import time
from wipass.channel import ChannelParams
from wipass.geometry import canonical_geometry
from wipass.montecarlo import RunSpec, run_point
spec = RunSpec(n_trials={n}, master_seed=1)
best = min(
    (lambda t0: (run_point(spec, canonical_geometry(50.0), ChannelParams()),
                 time.perf_counter() - t0)[1])(time.perf_counter())
    for _ in range({r})
)
print(best)
"""


def time_kernel(mod, n, repeat):
    call = lambda: mod.hop_gain_factors(1, 1, 0, n, 0, 12, 10.0, 11 ** 0.5, True)
    return min(timeit.repeat(call, number=1, repeat=repeat)), call()


def time_point(backend, n, repeat):
    env = dict(os.environ, WIPASS_BACKEND=backend)
    out = subprocess.run([sys.executable, "-c", POINT_SNIPPET.format(n=n, r=repeat)],
                         env=env, check=True, capture_output=True, text=True)
    return float(out.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    if kernels.compiled_backend is None:
        print("compiled extension not built; only the numpy backend is available")
    backends = {"python": kernels.python_backend}
    if kernels.compiled_backend is not None:
        backends["cython"] = kernels.compiled_backend

    outputs = {}
    print(f"hop_gain_factors, {args.trials} trials x 12 antennas, Rician K=10")
    for name, mod in backends.items():
        t, outputs[name] = time_kernel(mod, args.trials, args.repeat)
        print(f"  {name:<7} {t * 1e3:9.1f} ms")
    if len(outputs) == 2:
        a, b = outputs["python"], outputs["cython"]
        print(f"  max relative difference {np.max(np.abs(a - b) / np.abs(a)):.2e}")

    n_point = args.trials // 10
    print(f"full point, 5 schemes, {n_point} trials")
    for name in backends:
        print(f"  {name:<7} {time_point(name, n_point, args.repeat) * 1e3:9.1f} ms")


if __name__ == "__main__":
    main()
