"""Build script: compiles the optional replicator integration kernel.

The package is fully functional without the compiled extension (a NumPy
fallback is selected at import time), so any failure here downgrades the
build to pure Python instead of aborting it.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    ext_modules = cythonize(
        [
            Extension(
                "normgame.replicator._kernels",
                sources=["src/normgame/replicator/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level="3",
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    import sys

    print(f"normgame: building without compiled kernels ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
