"""Build script for the optional compiled kernels.

The package works without the extension; ``wignerlab.kernels`` falls back to
the numpy implementations when ``wignerlab._core`` cannot be imported.
"""
import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install
    cythonize = None


def _extensions():
    if cythonize is None or os.environ.get("WIGNERLAB_NO_EXT"):
        return []
    ext = Extension(
        "wignerlab._core",
        ["src/wignerlab/_core.pyx"],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3", "-fopenmp"],
        extra_link_args=["-fopenmp"],
    )
    return cythonize(
        [ext],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )


setup(ext_modules=_extensions())
