import numpy as np
import pytest

from maxrand import matkernel
from maxrand.matkernel import ComplexMatrix, hermitian_eig, kron, psd_project


def randh(rng, n):
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return ComplexMatrix.from_complex((m + m.conj().T) / 2)


def test_kron_identities():
    i2 = ComplexMatrix.identity(2)
    out = kron(i2, i2)
    assert np.allclose(out.to_complex(), np.eye(4), atol=0)

    xz = kron(matkernel.sigma_x(), matkernel.sigma_z()).to_complex()
    expected = np.zeros((4, 4))
    expected[0, 2] = 1
    expected[1, 3] = -1
    expected[2, 0] = 1
    expected[3, 1] = -1
    assert np.array_equal(xz.real, expected)
    assert not xz.imag.any()


def test_kron_shape_law():
    rng = np.random.default_rng(0)
    a = ComplexMatrix.from_complex(rng.standard_normal((2, 2)))
    b = ComplexMatrix.from_complex(rng.standard_normal((3, 3)))
    out = kron(a, b)
    assert (out.rows, out.cols) == (6, 6)


def test_kron_entry_formula():
    rng = np.random.default_rng(1)
    a = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
    b = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    out = kron(ComplexMatrix.from_complex(a), ComplexMatrix.from_complex(b))
    assert np.allclose(out.to_complex(), np.kron(a, b), atol=1e-15)


def test_kron_associative_on_integer_matrices():
    rng = np.random.default_rng(2)
    mats = [ComplexMatrix.from_complex(rng.integers(-3, 4, (2, 2)).astype(float))
            for _ in range(3)]
    left = kron(kron(mats[0], mats[1]), mats[2])
    right = kron(mats[0], kron(mats[1], mats[2]))
    assert np.array_equal(left.re, right.re)
    assert np.array_equal(left.im, right.im)


def test_trace_multiplicative():
    rng = np.random.default_rng(3)
    for _ in range(10):
        a = randh(rng, 3)
        b = randh(rng, 4)
        lhs = kron(a, b).trace()
        rhs = a.trace() * b.trace()
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


def test_pauli_spectra():
    eig = hermitian_eig(matkernel.sigma_z())
    assert np.allclose(eig.eigenvalues, [1.0, -1.0], atol=1e-14)
    eig = hermitian_eig(ComplexMatrix.identity(2))
    assert np.allclose(eig.eigenvalues, [1.0, 1.0], atol=0)


def test_sigma_x_eigenbasis():
    eig = hermitian_eig(matkernel.sigma_x())
    v = eig.eigenvectors.to_complex()
    plus = np.array([1, 1]) / np.sqrt(2)
    minus = np.array([1, -1]) / np.sqrt(2)
    # columns up to phase
    assert abs(abs(v[:, 0] @ plus) - 1) < 1e-12
    assert abs(abs(v[:, 1] @ minus) - 1) < 1e-12


def test_eig_reconstruction_and_orthonormality():
    rng = np.random.default_rng(4)
    for n in (2, 5, 9, 16):
        m = randh(rng, n)
        eig = hermitian_eig(m)
        v = eig.eigenvectors.to_complex()
        rec = (v * eig.eigenvalues) @ v.conj().T
        assert np.max(np.abs(rec - m.to_complex())) <= 1e-10
        assert np.max(np.abs(v.conj().T @ v - np.eye(n))) <= 1e-10
        assert np.all(np.diff(eig.eigenvalues) <= 1e-14)


def test_non_hermitian_rejected_with_magnitude():
    m = ComplexMatrix.from_complex(np.array([[1.0, 0.5], [0.0, 1.0]]))
    with pytest.raises(ValueError, match="asymmetry"):
        hermitian_eig(m)


def test_psd_project_examples():
    assert np.allclose(
        psd_project(ComplexMatrix.from_complex(np.diag([1.0, -1.0]))).to_complex(),
        np.diag([1.0, 0.0]), atol=1e-14)
    out = psd_project(ComplexMatrix.from_complex(-np.eye(2)))
    assert np.max(np.abs(out.to_complex())) <= 1e-14


def test_psd_project_fixed_point_and_idempotence():
    rng = np.random.default_rng(5)
    m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    psd = ComplexMatrix.from_complex(m @ m.conj().T)
    once = psd_project(psd)
    assert np.max(np.abs(once.to_complex() - psd.to_complex())) <= 1e-10
    h = randh(rng, 5)
    p1 = psd_project(h)
    p2 = psd_project(p1)
    assert np.max(np.abs(p2.to_complex() - p1.to_complex())) <= 1e-10


def test_psd_projection_optimality():
    rng = np.random.default_rng(6)
    h = randh(rng, 4)
    proj = psd_project(h)
    dist = np.linalg.norm(proj.to_complex() - h.to_complex())
    for _ in range(100):
        g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        x = g @ g.conj().T
        assert dist <= np.linalg.norm(x - h.to_complex()) + 1e-10
