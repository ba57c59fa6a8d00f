"""Compiled and pure-Python kernels must implement the same math."""

import numpy as np
import pytest

from maxrand import _pykernels as pk
from maxrand import backend

try:
    from maxrand import _ckernels as ck
except ImportError:
    ck = None

needs_compiled = pytest.mark.skipif(ck is None, reason="compiled kernels not built")


def test_selected_backend_flag():
    assert backend.BACKEND_NAME in ("compiled", "python")
    assert backend.COMPILED == (backend.BACKEND_NAME == "compiled")
    assert backend.kernels.compiled == backend.COMPILED


@needs_compiled
def test_eigh_sym_agreement():
    rng = np.random.default_rng(0)
    for n in (2, 3, 7, 12):
        a = rng.standard_normal((n, n))
        a = (a + a.T) / 2
        w1, v1 = ck.eigh_sym(a)
        w2, v2 = pk.eigh_sym(a)
        assert np.max(np.abs(w1 - w2)) <= 1e-12
        assert np.max(np.abs(v1 - v2)) <= 1e-12


@needs_compiled
def test_eigh_herm_agreement():
    rng = np.random.default_rng(1)
    for n in (2, 5, 9):
        m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        m = (m + m.conj().T) / 2
        w1, vr1, vi1 = ck.eigh_herm(m.real, m.imag)
        w2, vr2, vi2 = pk.eigh_herm(m.real, m.imag)
        assert np.max(np.abs(w1 - w2)) <= 1e-12
        assert np.max(np.abs(vr1 - vr2)) <= 1e-12
        assert np.max(np.abs(vi1 - vi2)) <= 1e-12


@needs_compiled
def test_psd_project_agreement():
    rng = np.random.default_rng(2)
    a = rng.standard_normal((6, 6))
    a = (a + a.T) / 2
    assert np.max(np.abs(ck.psd_project_sym(a) - pk.psd_project_sym(a))) <= 1e-12
    m = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    m = (m + m.conj().T) / 2
    re1, im1 = ck.psd_project_herm(m.real, m.imag)
    re2, im2 = pk.psd_project_herm(m.real, m.imag)
    assert np.max(np.abs(re1 - re2)) <= 1e-12
    assert np.max(np.abs(im1 - im2)) <= 1e-12


@needs_compiled
def test_born_probability_agreement():
    rng = np.random.default_rng(3)
    for p in (2, 3):
        st = rng.standard_normal(2 ** p) + 1j * rng.standard_normal(2 ** p)
        st /= np.linalg.norm(st)
        vecs = rng.standard_normal((p, 2)) + 1j * rng.standard_normal((p, 2))
        vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
        assert abs(ck.born_probability(st, vecs)
                   - pk.born_probability(st, vecs)) <= 1e-14


@needs_compiled
def test_admm_chunk_agreement():
    rng = np.random.default_rng(4)
    n = 3 + 6  # one real 3x3 block (6 coords) plus one complex 2x2 (4) -> use meta below
    # one real 3x3 block: 6 coords; one complex 2x2 block: 4 coords
    bdim = np.array([3, 2], dtype=np.intc)
    bkind = np.array([0, 1], dtype=np.intc)
    boff = np.array([0, 6], dtype=np.intc)
    n = 10
    a = rng.standard_normal((4, n))
    p = np.eye(n) - a.T @ np.linalg.solve(a @ a.T, a)
    q = a.T @ np.linalg.solve(a @ a.T, rng.standard_normal(4))
    shift = rng.standard_normal(n) * 0.01
    state1 = [q.copy(), np.zeros(n), np.zeros(n)]
    state2 = [q.copy(), np.zeros(n), np.zeros(n)]
    g1 = ck.admm_chunk(p, q, shift, *state1, bkind, bdim, boff, 50, 1.6)
    g2 = pk.admm_chunk(p, q, shift, *state2, bkind, bdim, boff, 50, 1.6)
    assert abs(g1[0] - g2[0]) <= 1e-12
    assert abs(g1[1] - g2[1]) <= 1e-12
    for u1, u2 in zip(state1, state2):
        assert np.max(np.abs(u1 - u2)) <= 1e-12


@needs_compiled
def test_nm_family_minimize_agreement():
    # tiny two-user search with a handful of evaluations
    cons_in = np.array([[0, 0]], dtype=np.intc)
    cons_out = np.array([[0, 0]], dtype=np.intc)
    cons_val = np.array([0.25])
    obj_in = np.array([1, 1], dtype=np.intc)
    obj_out = np.array([0, 0], dtype=np.intc)
    x0 = np.array([0.6, 1.0, 0.3, 2.0, -0.5, 0.7, 0.1, 1.2, 0.4])
    r1 = ck.nm_family_minimize(2, 2, 1, cons_in, cons_out, cons_val, obj_in,
                               obj_out, 1e6, x0, 0.0, 400, 1e-10, 1e-14)
    r2 = pk.nm_family_minimize(2, 2, 1, cons_in, cons_out, cons_val, obj_in,
                               obj_out, 1e6, x0, 0.0, 400, 1e-10, 1e-14)
    assert abs(r1[1] - r2[1]) <= 1e-10
    assert np.max(np.abs(r1[0] - r2[0])) <= 1e-8
