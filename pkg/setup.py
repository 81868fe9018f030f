"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a pure-Python backend is selected
at import time), so a failed compile degrades to a warning rather than a
broken install.
"""

import os
import sys

from setuptools import setup

ext_modules = []
cmdclass = {}
try:
    if not os.path.exists("src/rspolar/_kernels.pyx"):
        raise ImportError("_kernels.pyx not present")
    import numpy
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    ext_modules = cythonize(
        [
            Extension(
                "rspolar._kernels",
                ["src/rspolar/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError as exc:  # pragma: no cover - build environment dependent
    print(f"warning: Cython/numpy unavailable ({exc}); building without the "
          "compiled kernels, the pure-Python backend will be used",
          file=sys.stderr)

setup(ext_modules=ext_modules, cmdclass=cmdclass)
