"""Build script.

The only compiled piece is the rational-point scan kernel
(``padicann._scanfast``).  Everything else is pure Python, and the scan has a
NumPy fallback, so a failed extension build must never make the install fail.
We therefore wrap build_ext and degrade to the fallback with a warning.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """build_ext that treats the extension as a nice-to-have."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - any build failure is non-fatal
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            "WARNING: building the compiled scan kernel failed; "
            "padicann will use the NumPy fallback.\n  reason: %s" % exc,
            file=sys.stderr,
        )


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print(
            "WARNING: Cython not available; skipping the compiled scan kernel.",
            file=sys.stderr,
        )
        return []
    ext = Extension(
        "padicann._scanfast",
        sources=["src/padicann/_scanfast.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], language_level=3)


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
