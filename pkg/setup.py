"""Build script for the optional compiled simulation kernel.

The package is pure Python plus one Cython extension (guesswho._speedups).
The extension is a strict speedup: if Cython or a C compiler is missing the
build degrades to the pure-Python kernels and everything still works, so any
build failure here is demoted to a warning.
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("guesswho: Cython not available, building without the compiled kernel",
              file=sys.stderr)
        return []
    return cythonize(
        ["src/guesswho/_speedups.pyx"],
        language_level="3",
        compiler_directives={"boundscheck": False, "wraparound": False, "cdivision": True},
    )


class optional_build_ext(build_ext):
    """Never fail the install over the optional extension."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing or broken
            print(f"guesswho: compiled kernel skipped ({exc})", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"guesswho: compiled kernel skipped ({exc})", file=sys.stderr)


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
