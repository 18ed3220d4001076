import os

from setuptools import Extension, setup

# The compiled kernels are optional: polyseg falls back to the NumPy
# implementation at import time if the extension is absent.  Set
# POLYSEG_NO_EXT=1 to force a pure-Python build.
ext_modules = []
if os.environ.get("POLYSEG_NO_EXT") != "1":
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "polyseg._core",
                    ["src/polyseg/_core.pyx"],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
