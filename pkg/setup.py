"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a pure-Python twin of every kernel
ships alongside); set STEINMERGE_NO_EXT=1 to skip compilation entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("STEINMERGE_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("steinmerge._kernels_cy", ["src/steinmerge/_kernels_cy.pyx"])],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
