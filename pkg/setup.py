import os

import numpy as np
from setuptools import Extension, setup

ext_modules = []
if os.environ.get("CMVRMT_NO_EXTENSION", "") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext = Extension(
            "cmvrmt._kernels",
            ["src/cmvrmt/_kernels.pyx"],
            include_dirs=[np.get_include()],
            # inline complex mul/div; inputs are finite so the NaN recovery path is unneeded
            extra_compile_args=["-O3", "-fcx-limited-range"],
        )
        ext_modules = cythonize(
            [ext],
            compiler_directives={
                "language_level": 3,
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
                "initializedcheck": False,
            },
        )

setup(ext_modules=ext_modules)
