# Builds the optional compiled similarity kernels. The package works without
# them (a pure-Python fallback is selected at import time), so the extension
# is skipped when Cython or a C compiler is unavailable.
#
# To compile in place:
#   python setup.py build_ext --inplace

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "lrcat.harmonize._kernels",
                ["src/lrcat/harmonize/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
else:
    ext_modules = []

setup(ext_modules=ext_modules)
