"""Build script.

The packed bitset kernels live in a Cython extension.  The extension is
optional: when Cython or a C compiler is missing the build degrades to the
pure Python table backend, which implements the same operations.  Set
IGCHECK_NO_EXT=1 to skip the extension build explicitly.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Treat extension build failures as a soft degrade, not a hard error."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - toolchain dependent
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - toolchain dependent
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print("WARNING: building the packed kernel extension failed; "
              "the pure Python backend will be used (%s)" % (exc,))


def extensions():
    if os.environ.get("IGCHECK_NO_EXT") == "1":
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:  # pragma: no cover - toolchain dependent
        return []
    ext = Extension(
        "igcheck.backends._packedcore",
        sources=["src/igcheck/backends/_packedcore.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
