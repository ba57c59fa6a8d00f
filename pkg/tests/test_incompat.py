import math

import numpy as np
import pytest

from maxrand import incompat
from maxrand.incompat import (JmResult, analytic_robustness, jm_feasible,
                              pareto_frontier, sdp_robustness,
                              tradeoff_curve, tradeoff_point,
                              tripartite_robustness, _bloch_effect)


def unit(rng):
    v = rng.standard_normal(3)
    return v / np.linalg.norm(v)


def test_analytic_identical():
    assert analytic_robustness([0, 0, 1], [0, 0, 1]).eta == pytest.approx(1.0)


def test_analytic_orthogonal():
    res = analytic_robustness([1, 0, 0], [0, 0, 1])
    assert res.eta == pytest.approx(1 / math.sqrt(2), abs=1e-12)


def test_analytic_spot():
    res = analytic_robustness([1, 0, 0], [-0.6, 0, 0.8])
    expected = 2 / (math.sqrt(0.8) + math.sqrt(3.2))
    assert res.eta == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(0.74535599, abs=1e-7)


def test_analytic_symmetric():
    rng = np.random.default_rng(0)
    for _ in range(10):
        a, b = unit(rng), unit(rng)
        assert analytic_robustness(a, b).eta == analytic_robustness(b, a).eta


def test_analytic_rotation_invariant():
    rng = np.random.default_rng(1)
    from scipy.stats import special_ortho_group
    a, b = unit(rng), unit(rng)
    base = analytic_robustness(a, b).eta
    for _ in range(20):
        rot = special_ortho_group.rvs(3, random_state=rng)
        assert abs(analytic_robustness(rot @ a, rot @ b).eta - base) <= 1e-12


def test_analytic_rejects_nonunit():
    with pytest.raises(ValueError, match="norm"):
        analytic_robustness([1, 0, 0], [0, 0, 2])


def test_jm_white_noise_dominated():
    rng = np.random.default_rng(2)
    a, b = unit(rng), unit(rng)
    m1 = _bloch_effect(a, 0.5)
    m2 = _bloch_effect(b, 0.5)
    res = jm_feasible((m1, np.eye(2) - m1), (m2, np.eye(2) - m2))
    assert res.status == "feasible"
    total = sum(res.parent)
    assert np.max(np.abs(total - np.eye(2))) <= 1e-6
    for g in res.parent:
        assert np.linalg.eigvalsh(g)[0] >= -1e-7


def test_jm_orthogonal_at_high_visibility():
    m1 = _bloch_effect(np.array([1.0, 0, 0]), 0.9)
    m2 = _bloch_effect(np.array([0.0, 0, 1.0]), 0.9)
    res = jm_feasible((m1, np.eye(2) - m1), (m2, np.eye(2) - m2))
    assert res.status == "infeasible"


def test_jm_identical_full_strength():
    m = _bloch_effect(np.array([0.0, 1.0, 0.0]), 1.0)
    res = jm_feasible((m, np.eye(2) - m), (m, np.eye(2) - m))
    assert res.status == "feasible"
    # the parent G_{aa} = E_a, G_{a != b} = 0 reproduces both margins
    assert np.max(np.abs((res.parent[0] + res.parent[1]) - m)) <= 1e-5


def test_jm_validates_inputs():
    with pytest.raises(ValueError, match="sum to the identity"):
        jm_feasible((np.eye(2), np.eye(2)), (np.eye(2), np.zeros((2, 2))))


def test_sdp_matches_analytic_orthogonal():
    res = sdp_robustness([1, 0, 0], [0, 0, 1], tol=1e-6)
    assert res.eta == pytest.approx(1 / math.sqrt(2), abs=2e-6)
    assert res.certificate is not None


def test_sdp_identical_pair():
    res = sdp_robustness([0, 0, 1], [0, 0, 1], tol=1e-6)
    assert res.eta == pytest.approx(1.0, abs=1e-9)


def test_sdp_vs_analytic_random_pairs():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(12):
        a, b = unit(rng), unit(rng)
        ea = analytic_robustness(a, b).eta
        es = sdp_robustness(a, b, tol=1e-6).eta
        worst = max(worst, abs(ea - es))
    assert worst <= 1e-5


def test_sdp_rejects_coarse_tolerance():
    with pytest.raises(ValueError, match="tolerance"):
        sdp_robustness([1, 0, 0], [0, 0, 1], tol=1e-9)


def test_tradeoff_corner():
    pt = tradeoff_point(0.5, 0.25)
    assert pt.eta_a == pytest.approx(1.0, abs=1e-9)
    assert pt.eta_b == pytest.approx(1 / math.sqrt(2), abs=1e-9)
    assert pt.chsh == pytest.approx(2.0, abs=1e-9)


def test_tradeoff_diagonal_symmetry():
    for w in (0.44, 0.46, 0.5):
        pt = tradeoff_point(w, w)
        assert abs(pt.eta_a - pt.eta_b) <= 1e-10


def test_tradeoff_curve_and_frontier():
    points, frontier, skipped = tradeoff_curve(13)
    assert skipped > 0  # infeasible cells exist and are counted
    assert frontier
    for pt in frontier:
        assert not (pt.eta_a > 0.999 and pt.eta_b > 0.999)
    # frontier points are mutually non-dominated
    for p in frontier:
        for q in frontier:
            if p is q:
                continue
            assert not (q.eta_a >= p.eta_a and q.eta_b > p.eta_b + 1e-12)
    # the compatible-Alice endpoint appears
    assert any(abs(p.eta_a - 1.0) <= 1e-9 and abs(p.eta_b - 1 / math.sqrt(2)) <= 1e-6
               for p in frontier)


def test_tradeoff_curve_grid_validation():
    with pytest.raises(ValueError):
        tradeoff_curve(1)


def test_tripartite_matches_doubled_bipartite():
    tri = tripartite_robustness(0.24, 0.23)
    bi = tradeoff_point(0.48, 0.46)
    assert tri["eta_a"] == pytest.approx(tri["eta_b"], abs=0)
    assert tri["eta_a"] == pytest.approx(bi.eta_a, abs=1e-12)
    assert tri["eta_c"] == pytest.approx(bi.eta_b, abs=1e-12)
