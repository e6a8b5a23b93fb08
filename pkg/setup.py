"""Build the optional compiled kernels.

Set CDNLAB_NO_EXT=1 to skip the extension; the package then runs on the
pure-Python kernels in cdnlab/_kernels_py.py.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("CDNLAB_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "cdnlab._kernels",
                    ["src/cdnlab/_kernels.pyx"],
                    extra_compile_args=["-O3"],
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
