"""Build script: compiles the optional Cython integration kernel.

The package works without the extension (a pure-Python fallback is selected
at import time), so a missing compiler must not break installation.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """build_ext that degrades to the pure-Python kernel on any failure."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, broken toolchain, ...
            self._skip(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._skip(exc)

    @staticmethod
    def _skip(exc):
        print(f"WARNING: skipping compiled kernel ({exc}); "
              "the pure-Python fallback will be used")


ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "kgkratzer._radial_cy",
                ["src/kgkratzer/_radial_cy.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "cdivision": True,
        },
    )
except ImportError:
    print("WARNING: Cython not available; building without the compiled kernel")

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
