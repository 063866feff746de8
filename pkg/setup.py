"""Build script for the compiled likelihood kernels.

The extension is optional: if Cython or a C toolchain is unavailable the
install still succeeds and the package falls back to the numpy kernels at
import time (see mixcat._kernels).
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """build_ext that degrades to a pure-Python install on failure."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # toolchain missing
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(f"warning: compiled kernels not built ({exc}); "
              "falling back to the numpy implementation")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        [Extension("mixcat._kernels._core",
                   ["src/mixcat/_kernels/_core.pyx"],
                   extra_compile_args=["-O3"])],
        language_level="3",
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
