"""Dense complex-matrix kernel.

Matrices store explicit (re, im) float64 pairs in row-major order; no
code in the package relies on a native complex dtype for these values.
Eigendecompositions use cyclic Jacobi rotations (robust at the sizes
that occur here, everything is well under 100x100), with the rotation
loop supplied by the selected kernel backend.
"""

from dataclasses import dataclass, field

import numpy as np

from maxrand.backend import kernels

#: Global Hermiticity tolerance: max entrywise |M - M^dagger| accepted.
HERMITICITY_TOL = 1e-10


@dataclass(frozen=True)
class ComplexMatrix:
    """Dense complex matrix as paired real/imaginary float64 arrays."""

    re: np.ndarray
    im: np.ndarray

    def __post_init__(self):
        re = np.ascontiguousarray(self.re, dtype=np.float64)
        im = np.ascontiguousarray(self.im, dtype=np.float64)
        if re.ndim != 2 or re.shape != im.shape:
            raise ValueError(f"re/im must be equal-shape 2-d arrays, got {re.shape} and {im.shape}")
        re.flags.writeable = False
        im.flags.writeable = False
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    @property
    def rows(self):
        return self.re.shape[0]

    @property
    def cols(self):
        return self.re.shape[1]

    @classmethod
    def from_complex(cls, a) -> "ComplexMatrix":
        a = np.asarray(a, dtype=np.complex128)
        return cls(a.real.copy(), a.imag.copy())

    @classmethod
    def identity(cls, n: int) -> "ComplexMatrix":
        return cls(np.eye(n), np.zeros((n, n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ComplexMatrix":
        return cls(np.zeros((rows, cols)), np.zeros((rows, cols)))

    def to_complex(self) -> np.ndarray:
        return self.re + 1j * self.im

    def dagger(self) -> "ComplexMatrix":
        return ComplexMatrix(self.re.T.copy(), -self.im.T.copy())

    def __matmul__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        return ComplexMatrix(self.re @ other.re - self.im @ other.im,
                             self.re @ other.im + self.im @ other.re)

    def __add__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        return ComplexMatrix(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        return ComplexMatrix(self.re - other.re, self.im - other.im)

    def scale(self, c: complex) -> "ComplexMatrix":
        c = complex(c)
        return ComplexMatrix(c.real * self.re - c.imag * self.im,
                             c.real * self.im + c.imag * self.re)

    def trace(self) -> complex:
        return complex(np.trace(self.re), np.trace(self.im))

    def frobenius(self) -> float:
        return float(np.sqrt(np.sum(self.re ** 2) + np.sum(self.im ** 2)))

    def max_abs(self) -> float:
        if self.re.size == 0:
            return 0.0
        return float(np.max(np.hypot(self.re, self.im)))

    def hermiticity_defect(self) -> float:
        """Max entrywise magnitude of M - M^dagger."""
        return float(np.max(np.hypot(self.re - self.re.T, self.im + self.im.T)))

    def is_hermitian(self, tol: float = HERMITICITY_TOL) -> bool:
        return self.rows == self.cols and self.hermiticity_defect() <= tol


def sigma_x() -> ComplexMatrix:
    return ComplexMatrix(np.array([[0.0, 1.0], [1.0, 0.0]]), np.zeros((2, 2)))


def sigma_y() -> ComplexMatrix:
    return ComplexMatrix(np.zeros((2, 2)), np.array([[0.0, -1.0], [1.0, 0.0]]))


def sigma_z() -> ComplexMatrix:
    return ComplexMatrix(np.array([[1.0, 0.0], [0.0, -1.0]]), np.zeros((2, 2)))


@dataclass(frozen=True)
class EigDecomposition:
    """Spectral data: descending eigenvalues, orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: ComplexMatrix = field(repr=False)


def kron(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Tensor (Kronecker) product of two complex matrices."""
    return ComplexMatrix(np.kron(a.re, b.re) - np.kron(a.im, b.im),
                         np.kron(a.re, b.im) + np.kron(a.im, b.re))


def _require_hermitian(m: ComplexMatrix) -> None:
    if m.rows != m.cols:
        raise ValueError(f"matrix is {m.rows}x{m.cols}, not square")
    defect = m.hermiticity_defect()
    if defect > HERMITICITY_TOL:
        raise ValueError(f"matrix is not Hermitian: max asymmetry {defect:.3e} "
                         f"exceeds {HERMITICITY_TOL:.0e}")


def hermitian_eig(m: ComplexMatrix) -> EigDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    The input is symmetrized exactly before the Jacobi sweep so that
    roundoff-level asymmetry cannot leak into the result.
    """
    _require_hermitian(m)
    re = (m.re + m.re.T) / 2.0
    im = (m.im - m.im.T) / 2.0
    w, vr, vi = kernels.eigh_herm(re, im)
    return EigDecomposition(w, ComplexMatrix(vr, vi))


def psd_project(m: ComplexMatrix) -> ComplexMatrix:
    """Frobenius-nearest positive semidefinite matrix: V max(L, 0) V^dagger."""
    _require_hermitian(m)
    re = (m.re + m.re.T) / 2.0
    im = (m.im - m.im.T) / 2.0
    pre, pim = kernels.psd_project_herm(re, im)
    return ComplexMatrix(pre, pim)
