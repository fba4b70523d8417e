"""Build script for the compiled simulation kernel.

The extension is optional: if no C toolchain is available the build falls
back to the pure-numpy kernel selected at import time in
``viscopath._kernels``.
"""

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
                "viscopath._kernels._native",
                ["src/viscopath/_kernels/_native.pyx"],
                optional=True,
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
