"""Build script for the optional compiled eigensolver kernels.

The package is fully functional without the extension: a pure NumPy
implementation of the same kernels is selected automatically at import
time when ``isosweep._kernels_c`` is missing.  Building the extension
only makes the hot inner loops (batched Jacobi eigensolves inside the
positivity probes) faster.

Build in place with::

    python setup.py build_ext --inplace

or install with ``pip install --no-build-isolation -e .`` so the local
Cython is picked up.  If Cython or a C compiler is unavailable the
build degrades gracefully to the pure-Python wheel.
"""
import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

try:
    from setuptools.errors import CCompilerError, ExecError, PlatformError
except ImportError:  # setuptools < 60
    from distutils.errors import CCompilerError
    from distutils.errors import DistutilsExecError as ExecError
    from distutils.errors import DistutilsPlatformError as PlatformError

BUILD_ERRORS = (CCompilerError, ExecError, PlatformError, FileNotFoundError)


class OptionalBuildExt(build_ext):
    """build_ext that downgrades compiler failures to a warning."""

    def run(self):
        try:
            super().run()
        except BUILD_ERRORS as exc:
            warnings.warn(f"skipping compiled kernels ({exc}); "
                          "the pure NumPy fallback will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except BUILD_ERRORS as exc:
            warnings.warn(f"skipping {ext.name} ({exc}); "
                          "the pure NumPy fallback will be used")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "isosweep._kernels_c",
        ["src/isosweep/_kernels_c.pyx"],
        # No -ffast-math: the compiled and pure backends are meant to
        # agree to the last few ulps, so IEEE semantics stay on.
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
