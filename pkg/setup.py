"""Build script: compiles the optional edit-distance accelerator.

The package works without the extension (pure-Python kernels are selected
at import time), so a failed compile only costs speed, not functionality.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the accelerator if possible, otherwise install pure-Python only."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, broken toolchain
            print(f"warning: skipping _speedups build ({exc}); "
                  "falling back to pure-Python edit distance")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: skipping {ext.name} build ({exc}); "
                  "falling back to pure-Python edit distance")


try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("dialex._speedups", ["src/dialex/_speedups.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions, cmdclass={"build_ext": OptionalBuildExt})
