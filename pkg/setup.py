"""Build script: compiles the optional Cython solver kernel.

The package works without the extension (a NumPy fallback is selected at
import time), so a failed compile only costs speed.  Build in place with:

    python3 setup.py build_ext --inplace
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "revspy._core._attractor",
                sources=["src/revspy/_core/_attractor.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
