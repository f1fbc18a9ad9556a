"""Kernel backend selection.

The compiled extension is used when it was built; otherwise, or when
``WIPASS_BACKEND=python`` is set, the numpy implementation is used.  Both
produce the same draws up to floating-point rounding in libm.
"""

import os

from . import _pykernels

python_backend = _pykernels

try:
    from . import _ckernels as compiled_backend
except ImportError:  # extension not built
    compiled_backend = None


def _select():
    wanted = os.environ.get("WIPASS_BACKEND", "auto").lower()
    if wanted == "python" or compiled_backend is None:
        if wanted == "cython":
            raise ImportError("WIPASS_BACKEND=cython but the compiled extension is not built")
        return python_backend
    return compiled_backend


backend = _select()
BACKEND = backend.BACKEND
user_uniforms = backend.user_uniforms
hop_gain_factors = backend.hop_gain_factors
