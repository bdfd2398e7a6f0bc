"""Build script for the optional compiled Numerov kernels.

The package stays fully functional without the extension (a pure-Python
fallback is selected at import); the extension is the fast path for the
mean-field solver's inner loops.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "ionlab._kernels",
                ["src/ionlab/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
