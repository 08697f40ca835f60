"""Build hook for the optional compiled distance kernel.

The package is fully functional without the extension (a numpy fallback is
selected at import time), so a missing Cython or compiler is not fatal.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "bergman_lab._speedups",
                ["src/bergman_lab/_speedups.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
