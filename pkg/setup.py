"""Build the optional compiled kernel; fall back to pure python cleanly.

The package works without the extension (the numpy fallback in
`patcalc._kernel.slowcheck` has the same interface), so any failure to
cythonize or compile only prints a notice.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/patcalc/_kernel/_fastcheck.pyx"],
        language_level=3,
    )
except Exception as e:  # no cython, no compiler: fallback kernel is fine
    print("patcalc: building without compiled kernel (%s)" % e, file=sys.stderr)

setup(ext_modules=ext_modules)
