"""Build script: compiles the optional word-kernel extension.

The package is fully functional without the extension (a pure-Python
fallback is selected at import time), so any compiler or Cython failure
downgrades to a plain build instead of aborting the install.
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, etc.
            print(f"warning: building isofree._kernel failed ({exc}); "
                  "falling back to the pure-Python kernels", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: {ext.name} failed to compile ({exc}); "
                  "falling back to the pure-Python kernels", file=sys.stderr)


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    from setuptools import Extension
    return cythonize(
        [Extension("isofree._kernel", ["src/isofree/_kernel.pyx"])],
        language_level="3",
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
