import os
import subprocess
import sys

import numpy as np
import pytest

from wipass import kernels

compiled = pytest.mark.skipif(kernels.compiled_backend is None, reason="extension not built")


def _backend_under(env_value):
    env = dict(os.environ, WIPASS_BACKEND=env_value)
    out = subprocess.run([sys.executable, "-c", "from wipass import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    return out.stdout.strip()


def test_env_forces_python_backend():
    assert _backend_under("python") == "python"


@compiled
def test_auto_prefers_compiled():
    assert _backend_under("auto") == "cython"


@compiled
@pytest.mark.parametrize("k", [-1.0, 0.0, 10.0])
@pytest.mark.parametrize("fading", [True, False])
def test_backends_agree_on_gain_factors(k, fading):
    args = (7, 3, 5, 2005, 4, 12, k, 11 ** 0.5, fading)
    a = kernels.python_backend.hop_gain_factors(*args)
    b = kernels.compiled_backend.hop_gain_factors(*args)
    np.testing.assert_allclose(a, b, rtol=1e-12)


@compiled
def test_backends_agree_on_users():
    for pa, pb in zip(kernels.python_backend.user_uniforms(7, 0, 10, 1010),
                      kernels.compiled_backend.user_uniforms(7, 0, 10, 1010)):
        np.testing.assert_array_equal(pa, pb)
