"""Pure-numpy Monte Carlo kernels (fallback for the compiled extension)."""

import math

import numpy as np

from .rng import SQRT_HALF, block_normals, block_uniforms

BACKEND = "python"


def user_uniforms(seed, tag, start, stop):
    trials = np.arange(start, stop, dtype=np.uint64)
    return block_uniforms(seed, trials, tag, 0)


def hop_gain_factors(seed, tag, start, stop, block_offset, n_ant, k, sigma_db, fading):
    """Per-trial MRT array gain times log-normal shadowing for one hop.

    ``k < 0`` selects Rayleigh fading, otherwise Rician with factor ``k``.
    """
    trials = np.arange(start, stop, dtype=np.uint64)
    if fading:
        blocks = np.arange(block_offset, block_offset + n_ant, dtype=np.uint64)
        z0, z1 = block_normals(seed, trials[:, None], tag, blocks[None, :])
        re = z0 * SQRT_HALF
        im = z1 * SQRT_HALF
        if k >= 0:
            a = math.sqrt(k / (k + 1.0))
            b = math.sqrt(1.0 / (k + 1.0))
            re = a + b * re
            im = b * im
        gain = np.sum(re * re + im * im, axis=1)
    else:
        gain = np.full(trials.shape, float(n_ant))
    z, _ = block_normals(seed, trials, tag, block_offset + n_ant)
    return gain * 10.0 ** (sigma_db * z / 10.0)
