"""Builds the optional compiled SAT kernel; the package works without it."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("RESSYNTH_NO_EXT", "") in ("", "0"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("ressynth.sat._cdcl", ["src/ressynth/sat/_cdcl.pyx"], language="c++",
                       extra_compile_args=["-O2"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
