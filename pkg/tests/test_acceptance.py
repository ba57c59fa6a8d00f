"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Criteria cover: (1) the two-user family's closed form against the Born
rule, (2) the CHSH landscape of the family, (3) the entanglement sweep
of the f bound, (4) the incompatibility trade-off and the agreement of
its two evaluation routes, (5) guessing-probability certification,
(6) the three-user bound at its published numeric precision, and
(7) infrastructure properties (validation, PR-box exclusion, solver
regression set, reproducibility).
"""

import itertools
import json
import math
import time

import numpy as np
import pytest

from maxrand import analytic, cli, incompat, npa, numverify, sdpcore
from maxrand.scenario import (Behavior, Scenario, deterministic_behavior,
                              pr_box, uniform_behavior, validate_behavior)

from oracles import f_dense_max

SC222 = Scenario(2, 2, 2)


def _report(name, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    print(line, flush=True)
    assert ok, line


def test_criterion_1_family_consistency():
    """Born-computed target equals g^2/2 on a 9x9 feasible grid at 1e-10."""
    t0 = time.time()
    xs = np.linspace(0.43, 0.5, 9)
    worst = 0.0
    cells = 0
    for x in xs:
        for z in xs:
            g = analytic.g_bound(x, z)
            assert g >= 0.0, "grid cell unexpectedly infeasible"
            beh = analytic.construct_bipartite_family(x, z).behavior()
            worst = max(worst, abs(beh.prob((0, 0), (1, 1)) - g * g / 2))
            worst = max(worst, float(np.max(np.abs(beh.table[0, 0] - 0.25))))
            worst = max(worst, abs(beh.prob((0, 0), (0, 1)) - x))
            worst = max(worst, abs(beh.prob((0, 0), (1, 0)) - z))
            cells += 1
    dt = time.time() - t0
    _report("criterion 1 (family consistency)",
            worst <= 1e-10 and dt < 1.0,
            f"{cells} cells, worst residual {worst:.2e}, {dt:.2f} s")


def test_criterion_2_chsh_landscape():
    """Nonlocality across the family and the degenerate corners."""
    from maxrand.scenario import chsh_value

    t0 = time.time()
    values = np.linspace(0.0, 0.5, 41)
    interior_ok = True
    checked = 0
    for x in values:
        for z in values:
            g = analytic.g_bound(x, z)
            if g <= 0.01 or max(2 * x, 2 * z) >= 0.98:
                continue
            val = chsh_value(analytic.construct_bipartite_family(x, z).behavior())
            checked += 1
            if val <= 2.0:
                interior_ok = False
    corner_ok = True
    for delta in (0.005, 0.002, 0.001):
        for (x, z) in ((0.5, 0.25 + delta), (0.25 + delta, 0.5)):
            val = chsh_value(analytic.construct_bipartite_family(x, z).behavior())
            if not (2.0 < val <= 2.02):
                corner_ok = False
    spot = chsh_value(analytic.construct_bipartite_family(0.45, 0.45).behavior())
    spot_ok = abs(spot - 2.56) <= 1e-9
    dt = time.time() - t0
    _report("criterion 2 (CHSH landscape)",
            interior_ok and corner_ok and spot_ok and checked >= 10 and dt < 30.0,
            f"{checked} interior cells > 2, corners within 0.02, "
            f"spot 2.56 err {abs(spot - 2.56):.1e}, {dt:.1f} s")


def test_criterion_3_entanglement_sweep():
    """101x101 sweep of the maximizing Schmidt weight."""
    t0 = time.time()
    values = [0.5 * (i + 1) / 101 for i in range(101)]
    results = {}
    for s in values:
        for t in values:
            res = analytic.maximize_f_over_a(s, t)
            results[(s, t)] = res
    a2 = np.array([r.a_star ** 2 for r in results.values()])
    sym_worst = 0.0
    for i, s in enumerate(values):
        for t in values[i + 1:]:
            sym_worst = max(sym_worst,
                            abs(results[(s, t)].a_star - results[(t, s)].a_star),
                            abs(results[(s, t)].f_star - results[(t, s)].f_star))
    rng = np.random.default_rng(42)
    oracle_worst = 0.0
    for _ in range(50):
        s, t = rng.uniform(0.02, 0.5, 2)
        _, f_grid = numverify.grid_oracle_f(s, t, 20001)
        oracle_worst = max(oracle_worst,
                           abs(f_grid - analytic.maximize_f_over_a(s, t).f_star))
    dt = time.time() - t0
    ok = (a2.min() < 0.05 and a2.max() > 0.45 and sym_worst <= 1e-9
          and oracle_worst <= 1e-7 and dt < 60.0)
    _report("criterion 3 (entanglement sweep)", ok,
            f"A*^2 in [{a2.min():.3f}, {a2.max():.3f}], symmetry {sym_worst:.1e}, "
            f"oracle gap {oracle_worst:.1e}, {dt:.1f} s")


def test_criterion_4_incompatibility_tradeoff():
    """Corner robustness pair and cross-route agreement on 100 pairs."""
    t0 = time.time()
    pt = incompat.tradeoff_point(0.5, 0.25)
    corner_ok = (abs(pt.eta_a - 1.0) <= 1e-9
                 and abs(pt.eta_b - 0.707107) <= 1e-6)
    rng = np.random.default_rng(4242)
    worst = 0.0
    for _ in range(100):
        n1 = rng.standard_normal(3)
        n1 /= np.linalg.norm(n1)
        n2 = rng.standard_normal(3)
        n2 /= np.linalg.norm(n2)
        ea = incompat.analytic_robustness(n1, n2).eta
        es = incompat.sdp_robustness(n1, n2, tol=1e-6).eta
        worst = max(worst, abs(ea - es))
    dt = time.time() - t0
    ok = corner_ok and worst <= 1e-5 and dt < 120.0
    _report("criterion 4 (incompatibility trade-off)", ok,
            f"corner ({pt.eta_a:.9f}, {pt.eta_b:.6f}), "
            f"worst |sdp - analytic| {worst:.2e} over 100 pairs, {dt:.1f} s")


def test_criterion_5_certification():
    """Guessing probability: family point, noise, determinism, monotonicity."""
    t0 = time.time()
    family = analytic.construct_bipartite_family(0.45, 0.45).behavior()
    res2 = npa.solve_guessing(npa.build_guessing_program(family, (0, 0), "2"))
    family_ok = res2.pg_upper <= 0.255
    gap = res2.pg_upper - 0.25

    noise_ok = abs(npa.pg_upper_bound(uniform_behavior(SC222), (0, 0), "1ab") - 1.0) <= 1e-5
    det_worst = 0.0
    for bits in itertools.product(range(2), repeat=4):
        det = deterministic_behavior(SC222, [[bits[0], bits[1]], [bits[2], bits[3]]])
        det_worst = max(det_worst,
                        abs(npa.pg_upper_bound(det, (0, 0), "1ab") - 1.0))
    det_ok = det_worst <= 1e-5

    mono_ok = True
    mix = Behavior(SC222, 0.6 * family.table + 0.4 * uniform_behavior(SC222).table)
    det0 = deterministic_behavior(SC222, [[0, 1], [1, 0]])
    for beh in (family, mix, uniform_behavior(SC222), det0):
        v1 = npa.pg_upper_bound(beh, (0, 0), "1")
        v1ab = npa.pg_upper_bound(beh, (0, 0), "1ab")
        v2 = npa.pg_upper_bound(beh, (0, 0), "2")
        if not (v2 <= v1ab + 1e-6 and v1ab <= v1 + 1e-6):
            mono_ok = False
    dt = time.time() - t0
    ok = family_ok and noise_ok and det_ok and mono_ok and dt < 300.0
    _report("criterion 5 (certification)", ok,
            f"family pg(level 2) = {res2.pg_upper:.8f} (gap to 1/4: {gap:+.2e}), "
            f"noise/deterministic within {max(det_worst, 1e-12):.1e}, "
            f"monotone levels, {dt:.1f} s")


def test_criterion_6_tripartite_precision():
    """Numeric minimum matches g_T^2/4 at relative error 1e-5 on a 5x5 grid."""
    t0 = time.time()
    values = np.linspace(0.231, 0.2465, 5)
    worst_rel = 0.0
    for x in values:
        for z in values:
            g = analytic.gt_bound(x, z)
            assert g >= 0.0
            rep = numverify.verify_family_point("tripartite", float(x), float(z),
                                                g * g / 4.0, restarts=32, seed=42)
            worst_rel = max(worst_rel, rep["relative_error"])
    dt = time.time() - t0
    ok = worst_rel <= 1e-5 and dt < 900.0
    _report("criterion 6 (three-user precision)", ok,
            f"25 cells, 32 restarts each, worst relative error {worst_rel:.2e}, "
            f"{dt:.0f} s")


def test_criterion_7_infrastructure(tmp_path):
    """Validation, PR-box exclusion, solver regression, reproducibility."""
    t0 = time.time()
    born_ok = True
    for beh in (analytic.construct_bipartite_family(0.45, 0.45).behavior(),
                analytic.construct_tripartite_family(0.24, 0.23).behavior(),
                analytic.construct_bipartite_family(0.5, 0.25).behavior()):
        if validate_behavior(beh).max_violation > 1e-10:
            born_ok = False

    pr_ok = npa.membership(pr_box(), "1ab").status == "infeasible"

    reg_ok = True
    for method in ("interior-point", "splitting"):
        opts = sdpcore.SdpOptions(method=method)
        for name, prob, expected in sdpcore.regression_set():
            if isinstance(expected, str):
                if sdpcore.check_feasibility(prob, opts).status != expected:
                    reg_ok = False
            else:
                sol = sdpcore.solve(prob, opts)
                if sol.status != "optimal" or abs(sol.objective_value - expected) > 1e-5:
                    reg_ok = False

    # byte-identical reruns under a fixed seed
    outs = []
    for tag in ("a", "b"):
        out = str(tmp_path / f"sweep-{tag}.csv")
        assert cli.main(["sweep", "fig4", "--grid", "7", "--out", out]) == 0
        outs.append(open(out, "rb").read())
    sweep_ok = outs[0] == outs[1]
    reports = []
    codes = []
    for tag in ("a", "b"):
        out = str(tmp_path / f"vt-{tag}.json")
        codes.append(cli.main(["--seed", "42", "verify-tripartite", "--x", "0.24",
                               "--z", "0.24", "--restarts", "2", "--out", out]))
        reports.append(open(out, "rb").read())
    rerun_ok = sweep_ok and reports[0] == reports[1] and codes[0] == codes[1]

    dt = time.time() - t0
    ok = born_ok and pr_ok and reg_ok and rerun_ok
    _report("criterion 7 (infrastructure)", ok,
            f"validation {born_ok}, PR excluded {pr_ok}, regression {reg_ok}, "
            f"byte-identical reruns {rerun_ok}, {dt:.1f} s")
