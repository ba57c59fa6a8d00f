"""Kernel backend selection.

Imports the compiled extension ``maxrand._ckernels`` when it was built,
otherwise falls back to the pure-Python twin ``maxrand._pykernels``.
Everything downstream goes through ``kernels``; ``benchmarks/`` and the
backend-equivalence tests import both modules explicitly.
"""

try:
    from maxrand import _ckernels as kernels

    COMPILED = True
except ImportError:  # no C toolchain at install time
    from maxrand import _pykernels as kernels

    COMPILED = False

BACKEND_NAME = "compiled" if COMPILED else "python"
