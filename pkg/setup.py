"""Build hook: compiles the optional speedup kernels when Cython is available.

The package is pure Python first; a missing compiler or missing Cython must
never break installation, so every failure here degrades to a plain build.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/bsmg/_kernels/_speedups.pyx"],
        compiler_directives={"language_level": "3"},
    )
except Exception:
    ext_modules = []

setup(ext_modules=ext_modules)
