"""Build script for the optional compiled Gibbs-sampling kernel.

The package is pure Python except for ``docstruct._gibbs``, a Cython
extension holding the hot inner loop of LDA training/inference.  If
Cython or a C compiler is unavailable the build falls back to a pure
Python wheel; ``docstruct`` selects the equivalent fallback kernel at
import time.
"""

import sys

from setuptools import Extension, setup


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        sys.stderr.write("Cython not available; building without compiled kernels\n")
        return []
    ext = Extension(
        "docstruct._gibbs",
        sources=["src/docstruct/_gibbs.pyx"],
    )
    return cythonize([ext], language_level="3")


setup(ext_modules=extensions())
