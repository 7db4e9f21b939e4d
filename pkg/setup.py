import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the accelerator extension, but never fail the install over it.

    The package is fully functional on the pure-numpy fallback; a missing
    compiler or Cython just means slower idempotent searches.
    """

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"warning: skipping compiled kernel ({exc}); "
                  "pure-python fallback will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: could not build {ext.name} ({exc}); "
                  "pure-python fallback will be used")


ext_modules = []
if os.environ.get("SIDECOMP_SKIP_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "sidecomp._kernels._newton",
                    ["src/sidecomp/_kernels/_newton.pyx"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        print("warning: Cython not available; building without compiled kernel")

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
