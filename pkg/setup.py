import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("THERMORATE_NO_EXT", "") in ("", "0"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "thermorate._ckernels",
                    ["src/thermorate/_ckernels.pyx"],
                    # double-double arithmetic breaks under fma contraction / fast-math
                    extra_compile_args=["-O2", "-ffp-contract=off", "-fno-fast-math"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
