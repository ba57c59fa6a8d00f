"""Incompatibility robustness of binary qubit measurement pairs.

Robustness eta is the largest white-noise visibility at which the two
noisy measurements eta M + (1 - eta) I/2 remain jointly measurable.
Two independent routes are provided: the closed form for unbiased
qubit pairs (compatible iff |m1 + m2| + |m1 - m2| <= 2 for the noisy
Bloch vectors), and a bisection over joint-measurability feasibility
programs.  They must agree; the programs are the authority if they
ever disagree beyond tolerance.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from maxrand import sdpcore
from maxrand.analytic import construct_bipartite_family, construct_tripartite_family, g_bound
from maxrand.quantum import bloch_of_projector
from maxrand.scenario import chsh_value

BLOCH_NORM_TOL = 1e-9


@dataclass(frozen=True)
class RobustnessResult:
    eta: float
    method: str  # analytic | sdp-bisection
    #: for sdp-bisection, parent-measurement effects at the last feasible eta
    certificate: list = field(default=None, repr=False)

    def __post_init__(self):
        if not 0.5 - 1e-9 <= self.eta <= 1.0 + 1e-9:
            raise ValueError(f"eta = {self.eta} outside [1/2, 1]")


def _unit(n):
    n = np.asarray(n, dtype=np.float64)
    if n.shape != (3,):
        raise ValueError("Bloch vector must have three components")
    nrm = float(np.linalg.norm(n))
    if abs(nrm - 1.0) > BLOCH_NORM_TOL:
        raise ValueError(f"Bloch vector norm {nrm!r} deviates from 1 beyond "
                         f"{BLOCH_NORM_TOL:.0e}")
    return n


def analytic_robustness(n1, n2) -> RobustnessResult:
    """eta = 2 / (|n1 + n2| + |n1 - n2|) for unit Bloch vectors."""
    n1 = _unit(n1)
    n2 = _unit(n2)
    denom = float(np.linalg.norm(n1 + n2) + np.linalg.norm(n1 - n2))
    return RobustnessResult(eta=min(2.0 / denom, 1.0), method="analytic")


def _bloch_effect(n, eta):
    """Noisy outcome-0 effect (I + eta n.sigma)/2 as a complex matrix."""
    sx = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    sy = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
    sz = np.array([[1, 0], [0, -1]], dtype=np.complex128)
    return (np.eye(2, dtype=np.complex128)
            + eta * (n[0] * sx + n[1] * sy + n[2] * sz)) / 2.0


@dataclass(frozen=True)
class JmResult:
    status: str  # feasible | infeasible | indeterminate
    slack: float
    parent: list = field(default=None, repr=False)


def jm_feasible(effects1, effects2,
                opts: sdpcore.SdpOptions | None = None) -> JmResult:
    """Joint measurability of two binary measurements given as effect pairs.

    Decides existence of a parent measurement G_{ab} >= 0 summing to
    the identity whose margins reproduce both pairs, through the
    maximal-slack program of sdpcore; returns the parent effects when
    feasible.
    """
    e1, f1 = np.asarray(effects1[0], dtype=np.complex128), np.asarray(effects2[0], dtype=np.complex128)
    for name, pair in (("first", effects1), ("second", effects2)):
        total = np.asarray(pair[0], dtype=np.complex128) + np.asarray(pair[1], dtype=np.complex128)
        if np.max(np.abs(total - np.eye(2))) > 1e-9:
            raise ValueError(f"{name} measurement effects do not sum to the identity")
        for eff in pair:
            eff = np.asarray(eff, dtype=np.complex128)
            if np.max(np.abs(eff - eff.conj().T)) > 1e-9:
                raise ValueError(f"{name} measurement has a non-Hermitian effect")
            if float(np.linalg.eigvalsh((eff + eff.conj().T) / 2.0)[0]) < -1e-9:
                raise ValueError(f"{name} measurement has a negative effect")

    # parent blocks G_00, G_01, G_10, G_11 (second index = margin of meas 2)
    prob = sdpcore.SdpProblem([2, 2, 2, 2])
    basis = [np.array([[1, 0], [0, 0]], dtype=np.complex128),
             np.array([[0, 0], [0, 1]], dtype=np.complex128),
             np.array([[0, 1], [1, 0]], dtype=np.complex128) / 2.0,
             np.array([[0, 1j], [-1j, 0]], dtype=np.complex128) / 2.0]

    def matrix_equal(blocks, target):
        for h in basis:
            rhs = float(np.real(np.trace(h.conj().T @ target)))
            prob.add_constraint({k: h for k in blocks}, rhs)

    matrix_equal([0, 1, 2, 3], np.eye(2))      # completeness
    matrix_equal([0, 1], e1)                   # margin over meas-2 outcome
    matrix_equal([0, 2], f1)                   # margin over meas-1 outcome
    res = sdpcore.check_feasibility(prob, opts or sdpcore.SdpOptions())
    parent = None
    if res.status == "feasible":
        parent = [re + 1j * im for re, im in res.blocks]
    return JmResult(status=res.status, slack=res.slack, parent=parent)


def sdp_robustness(n1, n2, tol: float = 1e-6,
                   opts: sdpcore.SdpOptions | None = None) -> RobustnessResult:
    """Bisection on eta over [1/2, 1] using jm_feasible at each midpoint.

    The lower endpoint is universally compatible for this noise model
    and the upper endpoint only for identical-or-opposite pairs; both
    are checked before bisecting.  Indeterminate feasibility inside the
    bracket aborts with the bracket in the message.
    """
    n1 = _unit(n1)
    n2 = _unit(n2)
    if tol < 1e-8:
        raise ValueError("bisection tolerance below 1e-8 is not resolvable")

    def feasible_at(eta):
        m1 = _bloch_effect(n1, eta)
        m2 = _bloch_effect(n2, eta)
        res = jm_feasible((m1, np.eye(2) - m1), (m2, np.eye(2) - m2), opts)
        if res.status == "indeterminate":
            raise RuntimeError(
                f"joint-measurability program indeterminate at eta = {eta}")
        return res

    lo, hi = 0.5, 1.0
    res_lo = feasible_at(lo)
    if res_lo.status != "feasible":
        raise RuntimeError("eta = 1/2 must be jointly measurable for "
                           "white-noise mixing; inputs are inconsistent")
    res_hi = feasible_at(hi)
    if res_hi.status == "feasible":
        return RobustnessResult(eta=1.0, method="sdp-bisection",
                                certificate=res_hi.parent)
    cert = res_lo.parent
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        try:
            res = feasible_at(mid)
        except RuntimeError as exc:
            raise RuntimeError(f"{exc} (bracket [{lo}, {hi}])") from exc
        if res.status == "feasible":
            lo = mid
            cert = res.parent
        else:
            hi = mid
    return RobustnessResult(eta=lo, method="sdp-bisection", certificate=cert)


# ---------------------------------------------------------------------------
# Trade-off data over the family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TradeoffPoint:
    x: float
    z: float
    eta_a: float
    eta_b: float
    g: float
    chsh: float


def tradeoff_point(x: float, z: float) -> TradeoffPoint:
    """Per-user robustness between the two measurements at one family point."""
    real = construct_bipartite_family(x, z)
    blochs = [[bloch_of_projector(ms) for ms in party] for party in real.assembly.per_party]
    eta_a = analytic_robustness(blochs[0][0], blochs[0][1]).eta
    eta_b = analytic_robustness(blochs[1][0], blochs[1][1]).eta
    return TradeoffPoint(x=x, z=z, eta_a=eta_a, eta_b=eta_b, g=real.g,
                         chsh=chsh_value(real.behavior()))


def tradeoff_curve(grid: int):
    """Robustness pairs over a grid x grid lattice on [0, 1/2]^2.

    Returns (points, frontier, skipped) where `skipped` counts
    infeasible cells and `frontier` is the set of points not dominated
    in (eta_a, eta_b), i.e. the achievability boundary of simultaneous
    compatibility.
    """
    if grid < 2:
        raise ValueError("grid must be at least 2")
    points = []
    skipped = 0
    for i in range(grid):
        x = 0.5 * i / (grid - 1)
        for j in range(grid):
            z = 0.5 * j / (grid - 1)
            if g_bound(x, z) < 0.0:
                skipped += 1
                continue
            points.append(tradeoff_point(x, z))
    frontier = pareto_frontier(points)
    return points, frontier, skipped


def pareto_frontier(points):
    """Points maximal under the componentwise (eta_a, eta_b) order."""
    ordered = sorted(points, key=lambda p: (-p.eta_a, -p.eta_b))
    out = []
    best_b = -math.inf
    for pt in ordered:
        if pt.eta_b > best_b + 1e-12:
            out.append(pt)
            best_b = pt.eta_b
    return out


def tripartite_robustness(x: float, z: float) -> dict:
    """Per-party robustness on the three-user family.

    The first two parties are built identical, and the construction
    maps onto the two-user family under (x, z) -> (2x, 2z), so the
    reported values coincide with the corresponding two-user ones.
    """
    real = construct_tripartite_family(x, z)
    blochs = [[bloch_of_projector(ms) for ms in party] for party in real.assembly.per_party]
    return {
        "eta_a": analytic_robustness(blochs[0][0], blochs[0][1]).eta,
        "eta_b": analytic_robustness(blochs[1][0], blochs[1][1]).eta,
        "eta_c": analytic_robustness(blochs[2][0], blochs[2][1]).eta,
    }
