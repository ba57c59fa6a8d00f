"""Closed-form machinery for the maximal-randomness families.

Covers the amplitude relations tying measurement magnitudes to the
Schmidt coefficient and the second-input marginals, the one-parameter
upper bound f(A; s, t) with its 1-d maximization, the closed forms
g(x, z) and g_T(x, z) for the maximally entangled bipartite and GHZ
tripartite families, and explicit constructions of the realizations
that attain them.

Note on f: the bound implemented here is

    f(A; s, t) = [sqrt(A^2 (1-s-A^2)(1-t-A^2))
                  + sqrt((1-A^2)(s-A^2)(t-A^2))]^2 / (1 - 2 A^2)^2,

i.e. the squared Cauchy-Schwarz bound (A|a1 a2| + B|b1 b2|)^2 with the
magnitudes eliminated through the amplitude relations.  A version with
a single power of (1 - 2A^2) in the denominator is provably not an
upper bound (explicit realizations beat it) and cannot reproduce the
observed range of maximizing A^2; see tests for the witnessing values.
"""

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from maxrand import quantum
from maxrand.quantum import (BinaryQubitMeasurement, MeasurementAssembly,
                             PureState, born_behavior, make_bipartite_state,
                             make_ghz, sigma_x_measurement, sigma_z_measurement)
from maxrand.scenario import Behavior, FamilyParams

SQRT2 = math.sqrt(2.0)
#: |1 - 2A^2| below which the amplitude relations are treated as indeterminate.
INDETERMINATE_EPS = 1e-12
#: Born-oracle residual allowed when a construction self-verifies.
CONSTRUCTION_TOL = 1e-10

GRID_POINTS = 10001
REFINE_TOL = 1e-10


class IndeterminateFormError(ValueError):
    """A^2 = 1/2 makes the amplitude relations 0/0; use the
    maximally-entangled construction instead."""


class InfeasibleFamilyError(ValueError):
    """The requested (x, z) lies outside the g >= 0 family region."""

    def __init__(self, message, g):
        super().__init__(message)
        self.g = g


class ConstructionVerificationError(RuntimeError):
    """A constructed realization failed its Born-oracle self-check."""

    def __init__(self, message, residuals):
        super().__init__(message)
        self.residuals = residuals


def _check_st_domain(a, s, t):
    if not 0.0 <= s <= 0.5 or not 0.0 <= t <= 0.5:
        raise ValueError(f"s = {s}, t = {t} must lie in [0, 1/2]")
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"A = {a} outside [0, 1]")
    a2 = a * a
    if a2 > min(s, t) + 1e-15:
        raise ValueError(f"A^2 = {a2} exceeds min(s, t) = {min(s, t)}; "
                         "a radicand would be negative")
    if abs(1.0 - 2.0 * a2) <= INDETERMINATE_EPS:
        raise IndeterminateFormError(
            "A^2 = 1/2 renders the amplitude relations indeterminate; "
            "use construct_bipartite_family for the maximally entangled case")


def alpha_beta_from_st(a: float, s: float, t: float):
    """Squared magnitudes (|a1|^2, |b1|^2, |a2|^2, |b2|^2) from (A, s, t)."""
    _check_st_domain(a, s, t)
    a2 = a * a
    den = 1.0 - 2.0 * a2
    a1 = (1.0 - s - a2) / den
    b1 = (s - a2) / den
    a2sq = (1.0 - t - a2) / den
    b2 = (t - a2) / den
    return a1, b1, a2sq, b2


def _f_value(a2: float, s: float, t: float) -> float:
    """f at A^2 = a2, with the removable s = t = 1/2 endpoint handled."""
    if t < s:  # f is symmetric; fix the evaluation order so the
        s, t = t, s  # symmetry is exact in floating point as well
    den = 1.0 - 2.0 * a2
    if den * den < 1e-24:
        # reachable only for s = t = 1/2, where f = (sqrt(u) + sqrt(1-u))^2 / 4
        return (math.sqrt(a2) + math.sqrt(1.0 - a2)) ** 2 / 4.0
    r1 = a2 * (1.0 - s - a2) * (1.0 - t - a2)
    r2 = (1.0 - a2) * (s - a2) * (t - a2)
    num = (math.sqrt(max(r1, 0.0)) + math.sqrt(max(r2, 0.0))) ** 2
    return num / (den * den)


def f_bound(a: float, s: float, t: float) -> float:
    """Upper bound on the target probability for Schmidt coefficient A."""
    _check_st_domain(a, s, t)
    return _f_value(a * a, s, t)


def _f_values_vec(a2, s, t):
    if t < s:
        s, t = t, s
    a2 = np.asarray(a2)
    r1 = np.clip(a2 * (1.0 - s - a2) * (1.0 - t - a2), 0.0, None)
    r2 = np.clip((1.0 - a2) * (s - a2) * (t - a2), 0.0, None)
    den = (1.0 - 2.0 * a2) ** 2
    num = (np.sqrt(r1) + np.sqrt(r2)) ** 2
    out = np.divide(num, den, out=np.zeros_like(num), where=den >= 1e-24)
    endpoint = den < 1e-24
    if np.any(endpoint):
        out[endpoint] = (np.sqrt(a2[endpoint]) + np.sqrt(1.0 - a2[endpoint])) ** 2 / 4.0
    return out


@dataclass(frozen=True)
class FBoundResult:
    """Maximizer of f over the admissible Schmidt coefficients."""

    a_star: float
    f_star: float
    s: float
    t: float


def maximize_f_over_a(s: float, t: float, grid_points: int = GRID_POINTS) -> FBoundResult:
    """Global maximum of A -> f(A; s, t) on [0, sqrt(min(s, t))].

    Dense grid scan followed by golden-section refinement of the
    bracketing interval; ties resolve toward smaller A.
    """
    if not 0.0 < s <= 0.5 or not 0.0 < t <= 0.5:
        raise ValueError(f"s = {s}, t = {t} must lie in (0, 1/2]")
    n = max(int(grid_points), GRID_POINTS)
    amax = math.sqrt(min(s, t))
    grid = np.linspace(0.0, amax, n)
    vals = _f_values_vec(grid * grid, s, t)
    i = int(np.argmax(vals))  # first index wins: ties toward smaller A
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, n - 1)]
    a_best, f_best = float(grid[i]), float(vals[i])

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1 = _f_value(x1 * x1, s, t)
    f2 = _f_value(x2 * x2, s, t)
    while hi - lo > REFINE_TOL:
        if f1 >= f2:  # keep the left subinterval on ties: smaller A
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = _f_value(x1 * x1, s, t)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = _f_value(x2 * x2, s, t)
    a_mid = (lo + hi) / 2.0
    f_mid = _f_value(a_mid * a_mid, s, t)
    if f_mid > f_best or (f_mid == f_best and a_mid < a_best):
        a_best, f_best = a_mid, f_mid
    return FBoundResult(a_star=a_best, f_star=f_best, s=s, t=t)


def g_bound(x: float, z: float) -> float:
    """Closed form whose square halved is the family's target probability.

    Defined for x, z in [0, 1/2]; the family exists only where
    g(x, z) >= 0, and then P(0,0 | second inputs) = g^2 / 2.
    """
    if not 0.0 <= x <= 0.5 or not 0.0 <= z <= 0.5:
        raise ValueError(f"x = {x}, z = {z} must lie in [0, 1/2]")
    return (math.sqrt(2.0 * z) * (math.sqrt(2.0 * x) - math.sqrt(1.0 - 2.0 * x))
            - math.sqrt(1.0 - 2.0 * z) * (math.sqrt(2.0 * x) + math.sqrt(1.0 - 2.0 * x))
            ) / SQRT2


def gt_bound(x: float, z: float) -> float:
    """Tripartite analogue of g_bound on [0, 1/4]^2; substitutes
    2x -> 4x and 2z -> 4z, and P(0,0,0 | target inputs) = g_T^2 / 4."""
    if not 0.0 <= x <= 0.25 or not 0.0 <= z <= 0.25:
        raise ValueError(f"x = {x}, z = {z} must lie in [0, 1/4]")
    return (math.sqrt(4.0 * z) * (math.sqrt(4.0 * x) - math.sqrt(1.0 - 4.0 * x))
            - math.sqrt(1.0 - 4.0 * z) * (math.sqrt(4.0 * x) + math.sqrt(1.0 - 4.0 * x))
            ) / SQRT2


@dataclass(frozen=True)
class FamilyRealization:
    """A concrete state and measurement assembly attaining a family point."""

    kind: str
    state: PureState = field(repr=False)
    assembly: MeasurementAssembly = field(repr=False)
    params: FamilyParams
    g: float
    predicted_objective: float
    objective_inputs: tuple
    objective_outcomes: tuple

    def behavior(self) -> Behavior:
        return born_behavior(self.state, self.assembly)

    def metadata(self) -> dict:
        return {
            "kind": self.kind,
            "x": self.params.x,
            "z": self.params.z,
            "g": self.g,
            "predicted_objective": self.predicted_objective,
        }

    def write(self, path) -> None:
        quantum.write_realization(self.state, self.assembly, path,
                                  metadata=self.metadata())


def _verify_construction(real: FamilyRealization, constraints, tol=CONSTRUCTION_TOL):
    """Born-oracle self-check; constraints are ((inputs, outcomes), value)."""
    beh = real.behavior()
    residuals = {}
    for (inputs, outcomes), value in constraints:
        residuals[f"P{outcomes}|{inputs}"] = beh.prob(outcomes, inputs) - value
    obj = beh.prob(real.objective_outcomes, real.objective_inputs)
    residuals["objective"] = obj - real.predicted_objective
    worst = max(abs(v) for v in residuals.values())
    if worst > tol:
        raise ConstructionVerificationError(
            f"constructed realization misses its constraints by {worst:.3e}",
            residuals)
    return beh


def construct_bipartite_family(x: float, z: float) -> FamilyRealization:
    """Maximally entangled realization for constraint constants (x, z).

    State Phi+; first measurements sigma_x (Alice) and sigma_z (Bob)
    fix the uniform block; the second measurements are the real
    amplitude pairs that saturate the Cauchy-Schwarz step, so the
    target entry lands exactly on g(x, z)^2 / 2.
    """
    g = g_bound(x, z)  # also validates the domain
    if g < 0.0:
        raise InfeasibleFamilyError(
            f"(x, z) = ({x}, {z}) is infeasible: g = {g:.6f} < 0", g)
    alice2 = BinaryQubitMeasurement(math.sqrt(2.0 * z), -math.sqrt(1.0 - 2.0 * z))
    bob2 = BinaryQubitMeasurement(
        (math.sqrt(2.0 * x) - math.sqrt(1.0 - 2.0 * x)) / SQRT2,
        (math.sqrt(2.0 * x) + math.sqrt(1.0 - 2.0 * x)) / SQRT2)
    assembly = MeasurementAssembly((
        (sigma_x_measurement(), alice2),
        (sigma_z_measurement(), bob2),
    ))
    real = FamilyRealization(
        kind="bipartite",
        state=make_bipartite_state(1.0 / SQRT2),
        assembly=assembly,
        params=FamilyParams.maximally_entangled(x, z),
        g=g,
        predicted_objective=g * g / 2.0,
        objective_inputs=(1, 1),
        objective_outcomes=(0, 0),
    )
    constraints = [(((0, 0), outs), 0.25) for outs in ((0, 0), (0, 1), (1, 0), (1, 1))]
    constraints += [(((0, 1), (0, 0)), x), (((1, 0), (0, 0)), z)]
    _verify_construction(real, constraints)
    return real


def construct_tripartite_family(x: float, z: float) -> FamilyRealization:
    """GHZ realization for the tripartite constraint constants (x, z).

    The first two parties share one measurement pair; the third party
    takes the bipartite Bob role under the substitution 2x -> 4x,
    2z -> 4z.  This extends the bipartite pattern beyond where the
    closed form is derived, so the constructor always verifies itself
    against the Born oracle and fails loudly on any residual.
    """
    g = gt_bound(x, z)
    if g < 0.0:
        raise InfeasibleFamilyError(
            f"(x, z) = ({x}, {z}) is infeasible: g_T = {g:.6f} < 0", g)
    ab2 = BinaryQubitMeasurement(math.sqrt(4.0 * z), -math.sqrt(1.0 - 4.0 * z))
    c2 = BinaryQubitMeasurement(
        (math.sqrt(4.0 * x) - math.sqrt(1.0 - 4.0 * x)) / SQRT2,
        (math.sqrt(4.0 * x) + math.sqrt(1.0 - 4.0 * x)) / SQRT2)
    assembly = MeasurementAssembly((
        (sigma_x_measurement(), ab2),
        (sigma_x_measurement(), ab2),
        (sigma_z_measurement(), c2),
    ))
    real = FamilyRealization(
        kind="tripartite",
        state=make_ghz(3),
        assembly=assembly,
        params=FamilyParams.maximally_entangled(2.0 * x, 2.0 * z),
        g=g,
        predicted_objective=g * g / 4.0,
        objective_inputs=(1, 0, 1),
        objective_outcomes=(0, 0, 0),
    )
    constraints = [(((0, 0, 0), outs), 0.125)
                   for outs in itertools.product(range(2), repeat=3)]
    constraints += [
        (((0, 0, 1), (0, 0, 0)), x),
        (((0, 1, 0), (0, 0, 0)), z),
        (((1, 0, 0), (0, 0, 0)), z),
    ]
    _verify_construction(real, constraints)
    return real


def feasible_bipartite(x: float, z: float) -> bool:
    return g_bound(x, z) >= 0.0


def feasible_tripartite(x: float, z: float) -> bool:
    return gt_bound(x, z) >= 0.0
