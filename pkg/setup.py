"""Build glue for the optional compiled recurrence kernel.

The package is fully functional without the extension; a pure-Python
fallback is selected at import time (see specrange._kernels).  Set
SPECRANGE_SKIP_EXT=1 to skip the compile attempt entirely.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Never fail the install over the speedup module."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"specrange: skipping compiled kernel ({exc!r}); "
                  "pure-Python fallback will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"specrange: failed to build {ext.name} ({exc!r}); "
                  "pure-Python fallback will be used")


ext_modules = []
if os.environ.get("SPECRANGE_SKIP_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "specrange._recurrence",
                    ["src/specrange/_recurrence.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        print("specrange: Cython unavailable; pure-Python fallback will be used")

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
