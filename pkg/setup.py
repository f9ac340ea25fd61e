"""Build script: compiles the optional _speedups extension.

The package works without the extension (pure-Python kernels are selected at
import time); a failed compile therefore degrades gracefully instead of
breaking the install.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/cctu/_speedups.pyx",
        compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
    )
except Exception as exc:  # pragma: no cover - only hit on broken toolchains
    print(f"cctu: building without compiled kernels ({exc})")

setup(ext_modules=ext_modules)
