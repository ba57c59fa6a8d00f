import numpy as np
from setuptools import setup

# The compiled kernels are optional: without a C toolchain the package
# falls back to the pure-Python implementations in maxrand._pykernels.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/maxrand/_ckernels.pyx"],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = None

setup(
    ext_modules=ext_modules,
    include_dirs=[np.get_include()],
)
