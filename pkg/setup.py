import os

from setuptools import Extension, setup

# The compiled kernel is an optional speedup: when Cython or a C compiler is
# unavailable the package falls back to the pure-Python implementation in
# corpusforge.kernels.pyfallback. Set CORPUSFORGE_PURE_PYTHON=1 to skip the
# extension build entirely.
ext_modules = []
if not os.environ.get("CORPUSFORGE_PURE_PYTHON"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "corpusforge.kernels._native",
                    ["src/corpusforge/kernels/_native.pyx"],
                    optional=True,
                )
            ],
            language_level="3",
        )

setup(ext_modules=ext_modules)
