"""maxrand: device-independent certification of maximal randomness.

Builds quantum-realization families with maximally random outcomes,
evaluates the closed-form bounds that govern them, bounds an
eavesdropper's guessing probability through moment-matrix relaxations,
and quantifies the measurement-incompatibility trade-off between users.
"""

from maxrand.backend import BACKEND_NAME, COMPILED

__version__ = "0.1.0"

__all__ = ["BACKEND_NAME", "COMPILED", "__version__"]
