import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # fall back to the pure-numpy kernels
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("WIPASS_NO_EXTENSION"):
    ext_modules = cythonize(
        [
            Extension(
                "wipass._ckernels",
                ["src/wipass/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
