import math

import numpy as np
import pytest

from maxrand import analytic, numverify
from maxrand.numverify import (MinimizeResult, ResidualGateError,
                               family_constraints_bipartite, grid_oracle_f,
                               minimize_objective, verify_family_point)
from maxrand.quantum import born_behavior
from maxrand.scenario import Scenario

SC222 = Scenario(2, 2, 2)


@pytest.fixture(scope="module")
def bipartite_result():
    cons = family_constraints_bipartite(0.45, 0.45)
    return minimize_objective(SC222, cons, ((1, 1), (0, 0)), restarts=8, seed=42)


def test_bipartite_matches_closed_form(bipartite_result):
    predicted = analytic.g_bound(0.45, 0.45) ** 2 / 2
    rel = abs(bipartite_result.value - predicted) / predicted
    assert rel <= 1e-5
    assert bipartite_result.max_residual <= 1e-7


def test_returned_realization_regenerates_constraints(bipartite_result):
    params = bipartite_result.params
    beh = born_behavior(params.state(), params.assembly())
    for inputs, outs, value in family_constraints_bipartite(0.45, 0.45):
        assert abs(beh.prob(outs, inputs) - value) <= 1e-7
    assert abs(beh.prob((0, 0), (1, 1)) - bipartite_result.value) <= 1e-9


def test_degenerate_corner_reaches_zero():
    cons = family_constraints_bipartite(0.5, 0.25)
    res = minimize_objective(SC222, cons, ((1, 1), (0, 0)), restarts=6, seed=42)
    assert res.value <= 1e-7


def test_more_restarts_never_worse():
    cons = family_constraints_bipartite(0.46, 0.44)
    few = minimize_objective(SC222, cons, ((1, 1), (0, 0)), restarts=3, seed=42)
    more = minimize_objective(SC222, cons, ((1, 1), (0, 0)), restarts=6, seed=42)
    assert more.value <= few.value + 1e-15


def test_deterministic_given_seed():
    cons = family_constraints_bipartite(0.47, 0.47)
    r1 = minimize_objective(SC222, cons, ((1, 1), (0, 0)), restarts=3, seed=7)
    r2 = minimize_objective(SC222, cons, ((1, 1), (0, 0)), restarts=3, seed=7)
    assert r1.value == r2.value
    assert np.array_equal(r1.params.vector, r2.params.vector)
    assert r1.nfev == r2.nfev


def test_residual_gate_failure():
    # a contradictory constraint set: the uniform block cannot coexist
    # with P(0,0|0,0) pinned elsewhere
    cons = family_constraints_bipartite(0.45, 0.45)
    cons.append(((0, 0), (0, 0), 0.9))
    with pytest.raises(ResidualGateError) as err:
        minimize_objective(SC222, cons, ((1, 1), (0, 0)), restarts=2, seed=42)
    assert err.value.best_residual > 1e-7


def test_restart_validation():
    with pytest.raises(ValueError):
        minimize_objective(SC222, [], ((0, 0), (0, 0)), restarts=0)


def test_tripartite_spot():
    rep = verify_family_point("tripartite", 0.24, 0.24,
                              analytic.gt_bound(0.24, 0.24) ** 2 / 4,
                              restarts=12, seed=42)
    assert rep["relative_error"] <= 1e-5
    assert rep["max_constraint_residual"] <= 1e-7
    assert rep["restarts"] == 12


def test_grid_oracle_examples():
    a, f = grid_oracle_f(0.5, 0.5, 200001)
    assert f == pytest.approx(0.5, abs=1e-8)
    a, f = grid_oracle_f(0.25, 0.25, 200001)
    # the maximizer sits at the A^2 = s boundary where only the first
    # radical survives: f = s(1-s-u)(1-t-u)u/(1-2u)^2 at u = s
    assert a ** 2 == pytest.approx(0.25, abs=1e-6)
    assert f == pytest.approx(0.25, abs=1e-8)


def test_grid_oracle_agrees_with_refined():
    rng = np.random.default_rng(10)
    for _ in range(50):
        s, t = rng.uniform(0.02, 0.5, 2)
        _, f_grid = grid_oracle_f(s, t, 20001)
        res = analytic.maximize_f_over_a(s, t)
        assert abs(f_grid - res.f_star) <= 1e-7


def test_grid_oracle_validation():
    with pytest.raises(ValueError):
        grid_oracle_f(0.5, 0.5, 100)
    with pytest.raises(ValueError):
        grid_oracle_f(0.0, 0.5)
