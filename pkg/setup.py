"""Build script for the compiled Monte Carlo kernels.

The extension is optional: if it cannot be built, the package installs
anyway and falls back to the pure-numpy kernels at import time.
"""

import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "rskmc._kernels._fast",
                sources=["src/rskmc/_kernels/_fast.pyx"],
                include_dirs=[np.get_include()],
                library_dirs=[os.path.join(os.path.dirname(np.random.__file__), "lib")],
                libraries=["npyrandom"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                # no -ffast-math: the kernels must match the pure-python
                # backend bit for bit, so IEEE semantics are required
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
