"""Build script: compiles the optional accumulation core.

The extension is a pure speed-up; if Cython or a C compiler is missing the
package installs anyway and falls back to the NumPy implementation at import.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the extension if possible, otherwise continue without it."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"reckern: skipping compiled core ({exc}); "
                  "the NumPy fallback will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"reckern: failed to build {ext.name} ({exc}); "
                  "the NumPy fallback will be used")


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "reckern._accel._core",
        ["src/reckern/_accel/_core.pyx"],
        include_dirs=[numpy.get_include()],
        # no -ffast-math: the compensated sums must not be re-associated
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
