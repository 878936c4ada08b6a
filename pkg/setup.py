"""Build hook for the optional compiled GF(2) kernel.

Without Cython or a C compiler the package installs as pure Python and
``ademcartan.gf2`` falls back to the reference implementation.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("ADEMCARTAN_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("ademcartan._gf2_kernel", ["src/ademcartan/_gf2_kernel.pyx"],
                       extra_compile_args=["-O3"])],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
