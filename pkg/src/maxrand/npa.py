"""Moment-matrix relaxation of the quantum set.

Builds moment matrices over words of measurement projectors (one
independent projector per binary measurement; the other outcome is
eliminated through E_1 = I - E_0), identifies entries under projector
idempotence and commutation of distinct parties' operators, and poses
two programs on top:

* membership: does any PSD moment matrix reproduce the behavior at the
  chosen relaxation level?  Decided through the maximal smallest
  eigenvalue over the affine slice, which stays numerically meaningful
  for boundary points.
* guessing probability: one subnormalized moment block per guess of
  the outcome tuple at the target settings, branches summing to the
  observed behavior, maximizing the eavesdropper's success.

Behaviors enter through their Collins-Gisin coordinates (joint
probabilities of outcome 0 for each party subset), which is a
non-redundant parameterization, so the constraint system keeps full
row rank by construction.
"""

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from maxrand import sdpcore
from maxrand.scenario import Behavior, Scenario, validate_behavior

LEVELS = ("1", "1ab", "2")

#: slack below which a membership problem counts as infeasible
MEMBERSHIP_BAND = 1e-6


class UnsupportedLevelError(ValueError):
    """The requested relaxation level cannot represent the behavior."""


# a word is a tuple (one entry per party) of alternating input-index tuples
def _reduce(seq):
    out = []
    for s in seq:
        if not out or out[-1] != s:
            out.append(s)
    return tuple(out)


def _mul(u, v):
    return tuple(_reduce(a + b) for a, b in zip(u, v))


def _adj(u):
    return tuple(tuple(reversed(a)) for a in u)


def _class_key(m):
    return min(m, _adj(m))


@dataclass(frozen=True)
class WordIndex:
    """Operator words of one relaxation level plus entry identifications."""

    scenario: Scenario
    level: str
    words: tuple
    #: class key -> canonical upper-triangle position (i, j)
    positions: dict = field(repr=False)
    #: list of (position, canonical position) pairs, one per redundant entry
    identifications: tuple = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.words)

    def position_of(self, monomial):
        return self.positions.get(_class_key(monomial))


def build_words(scenario: Scenario, level: str) -> WordIndex:
    """Word list and moment-matrix identifications for a level.

    Levels: "1" (identity and single projectors), "1ab" (adds products
    of two different parties' projectors), "2" (adds same-party ordered
    pairs as well).
    """
    if scenario.outputs_per_party != 2:
        raise UnsupportedLevelError(
            f"moment matrices are implemented for binary outcomes only, "
            f"got n = {scenario.outputs_per_party}")
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}, got {level!r}")
    p = scenario.parties
    m = scenario.inputs_per_party
    empty = ((),) * p

    def single(party, inp):
        w = [()] * p
        w[party] = (inp,)
        return tuple(w)

    words = [empty]
    for party in range(p):
        for inp in range(m):
            words.append(single(party, inp))
    if level == "2":
        for party in range(p):
            for i1 in range(m):
                for i2 in range(m):
                    if i1 != i2:
                        w = [()] * p
                        w[party] = (i1, i2)
                        words.append(tuple(w))
    if level in ("1ab", "2"):
        for pa in range(p):
            for pb in range(pa + 1, p):
                for i1 in range(m):
                    for i2 in range(m):
                        w = [()] * p
                        w[pa] = (i1,)
                        w[pb] = (i2,)
                        words.append(tuple(w))

    positions = {}
    identifications = []
    n = len(words)
    for i in range(n):
        for j in range(i, n):
            key = _class_key(_mul(_adj(words[i]), words[j]))
            if key in positions:
                identifications.append(((i, j), positions[key]))
            else:
                positions[key] = (i, j)
    return WordIndex(scenario=scenario, level=level, words=tuple(words),
                     positions=positions, identifications=tuple(identifications))


def default_level(scenario: Scenario) -> str:
    return "1ab"


# ---------------------------------------------------------------------------
# Collins-Gisin coordinates of a behavior
# ---------------------------------------------------------------------------

def _cg_monomials(scenario: Scenario):
    """All (subset, inputs) pairs as words, identity excluded."""
    p = scenario.parties
    out = []
    for r in range(1, p + 1):
        for subset in itertools.combinations(range(p), r):
            for inputs in itertools.product(range(scenario.inputs_per_party), repeat=r):
                w = [()] * p
                for party, inp in zip(subset, inputs):
                    w[party] = (inp,)
                out.append((subset, inputs, tuple(w)))
    return out


def cg_value(b: Behavior, subset, inputs) -> float:
    """P(outcome 0 for every party in `subset` | their inputs), others
    marginalized with input index 0."""
    sc = b.scenario
    full = [0] * sc.parties
    for party, inp in zip(subset, inputs):
        full[party] = inp
    block = b.table[tuple(full)]
    idx = tuple(0 if party in subset else slice(None) for party in range(sc.parties))
    sub = block[idx]
    return float(np.sum(sub))


def _entry_coeff(d, pos):
    i, j = pos
    coeff = np.zeros((d, d))
    if i == j:
        coeff[i, i] = 1.0
    else:
        coeff[i, j] = 0.5
        coeff[j, i] = 0.5
    return coeff


def _prob_expansion(winfo: WordIndex, inputs, outcomes):
    """P(outcomes | inputs) as [(coefficient, position)] over moment entries.

    Outcome 0 uses the stored projector; outcome 1 uses identity minus
    projector, expanded by inclusion-exclusion.
    """
    p = winfo.scenario.parties
    ones = [party for party in range(p) if outcomes[party] == 1]
    zeros = [party for party in range(p) if outcomes[party] == 0]
    terms = []
    for r in range(len(ones) + 1):
        for flip in itertools.combinations(ones, r):
            w = [()] * p
            for party in zeros:
                w[party] = (inputs[party],)
            for party in flip:
                w[party] = (inputs[party],)
            pos = winfo.position_of(tuple(w))
            if pos is None:
                raise UnsupportedLevelError(
                    f"level {winfo.level!r} cannot represent a required "
                    f"{len(zeros) + len(flip)}-party moment; use a higher level")
            terms.append(((-1.0) ** r, pos))
    return terms


# ---------------------------------------------------------------------------
# Membership
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MembershipResult:
    status: str  # feasible | infeasible | indeterminate
    slack: float
    solver: sdpcore.SdpSolution = field(repr=False)


def membership_problem(b: Behavior, level: str | None = None):
    """Moment-matrix completion problem for a behavior at a level."""
    sc = b.scenario
    level = level or default_level(sc)
    winfo = build_words(sc, level)
    d = winfo.size
    prob = sdpcore.SdpProblem([d])
    for pos, canon in winfo.identifications:
        prob.add_constraint({0: _entry_coeff(d, pos) - _entry_coeff(d, canon)}, 0.0)
    prob.add_constraint({0: _entry_coeff(d, (0, 0))}, 1.0)
    for subset, inputs, w in _cg_monomials(sc):
        pos = winfo.position_of(w)
        if pos is None:
            raise UnsupportedLevelError(
                f"level {level!r} cannot represent the {len(subset)}-party "
                f"moments of this scenario; use a higher level")
        prob.add_constraint({0: _entry_coeff(d, pos)}, cg_value(b, subset, inputs))
    return prob, winfo


def membership(b: Behavior, level: str | None = None,
               opts: sdpcore.SdpOptions | None = None,
               band: float = MEMBERSHIP_BAND) -> MembershipResult:
    """Test membership in the level's outer approximation of the quantum set.

    ``infeasible`` certifies the behavior lies outside the quantum set;
    ``feasible`` only means this relaxation level cannot exclude it.
    """
    prob, _ = membership_problem(b, level)
    res = sdpcore.check_feasibility(prob, opts or sdpcore.SdpOptions(), band=band)
    return MembershipResult(status=res.status, slack=res.slack, solver=res.solver)


# ---------------------------------------------------------------------------
# Guessing probability
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GuessingProgram:
    """Branch-decomposed relaxation of the eavesdropper's problem."""

    behavior: Behavior
    settings: tuple
    level: str
    words: WordIndex
    branches: tuple  # outcome tuple guessed in each branch
    problem: sdpcore.SdpProblem = field(repr=False)


def build_guessing_program(b: Behavior, settings, level: str | None = None) -> GuessingProgram:
    sc = b.scenario
    level = level or default_level(sc)
    settings = tuple(int(s) for s in settings)
    if len(settings) != sc.parties or any(
            not 0 <= s < sc.inputs_per_party for s in settings):
        raise ValueError(f"settings {settings} out of range for the scenario")
    winfo = build_words(sc, level)
    d = winfo.size
    branches = tuple(itertools.product(range(sc.outputs_per_party), repeat=sc.parties))
    nb = len(branches)
    prob = sdpcore.SdpProblem([d] * nb)

    for k in range(nb):
        for pos, canon in winfo.identifications:
            coeff = _entry_coeff(d, pos) - _entry_coeff(d, canon)
            prob.add_constraint({k: coeff}, 0.0)
    norm_coeff = _entry_coeff(d, (0, 0))
    prob.add_constraint({k: norm_coeff for k in range(nb)}, 1.0)
    for subset, inputs, w in _cg_monomials(sc):
        pos = winfo.position_of(w)
        if pos is None:
            raise UnsupportedLevelError(
                f"level {level!r} cannot represent the {len(subset)}-party "
                f"moments of this scenario; use a higher level")
        coeff = _entry_coeff(d, pos)
        prob.add_constraint({k: coeff for k in range(nb)},
                            cg_value(b, subset, inputs))

    objective = {}
    for k, guess in enumerate(branches):
        acc = np.zeros((d, d))
        for coef, pos in _prob_expansion(winfo, settings, guess):
            acc += coef * _entry_coeff(d, pos)
        objective[k] = -acc  # solver minimizes
    prob.set_objective(objective)
    return GuessingProgram(behavior=b, settings=settings, level=level,
                           words=winfo, branches=branches, problem=prob)


@dataclass(frozen=True)
class GuessingResult:
    pg_upper: float
    level: str
    settings: tuple
    face_rank: int
    equality_residual: float
    min_eigenvalue: float
    iterations: int
    blocks: list = field(repr=False)

    @property
    def min_entropy_bits(self) -> float:
        return min_entropy(self.pg_upper)


class SolverIndeterminateError(RuntimeError):
    """The relaxation did not converge; carries the partial solution."""

    def __init__(self, message, solution=None):
        super().__init__(message)
        self.solution = solution


class BehaviorOutsideRelaxationError(ValueError):
    """The behavior has no moment representation at this level, so the
    guessing-probability program is void."""


def _reduced_program(gp: GuessingProgram, basis):
    """Restrict every branch block to the span of `basis` (d x r).

    Returns None when a constraint is annihilated by the restriction
    while its right-hand side is not, which marks the face as too
    small.
    """
    r = basis.shape[1]
    nb = len(gp.problem.block_dims)
    red = sdpcore.SdpProblem([r] * nb)
    for pairs, rhs in gp.problem.constraints:
        coeffs = {}
        for k, (re, _) in pairs.items():
            cr = basis.T @ re @ basis
            if np.max(np.abs(cr)) > 1e-10:
                coeffs[k] = cr
        if coeffs:
            red.add_constraint(coeffs, rhs)
        elif abs(rhs) > 1e-8:
            return None
    red.set_objective({k: basis.T @ re @ basis
                       for k, (re, _) in gp.problem.objective.items()})
    return red


def solve_guessing(gp: GuessingProgram,
                   opts: sdpcore.SdpOptions | None = None) -> GuessingResult:
    """Solve the branch relaxation through escalating facial reduction.

    The summed branches must form a moment completion of the behavior,
    so every branch lives on the face spanned by the maximal-slack
    completion.  Restricting to that face restores strict feasibility,
    which the boundary behaviors targeted here otherwise lack (and
    which makes an unreduced solve crawl).  The face is grown until the
    restricted program is consistent and its value has stopped
    increasing; values are monotone in the face, so the final solve is
    the binding one.
    """
    opts = opts or sdpcore.SdpOptions()
    d = gp.words.size
    mem_prob, _ = membership_problem(gp.behavior, gp.level)
    feas = sdpcore.check_feasibility(mem_prob, opts)
    if feas.status == "infeasible":
        raise BehaviorOutsideRelaxationError(
            f"behavior lies outside the level-{gp.level} relaxation "
            f"(completion slack {feas.slack:.2e}); no guessing probability "
            "is defined for it")
    if feas.status != "feasible":
        raise SolverIndeterminateError(
            "moment completion for the guessing program did not converge",
            feas.solver)
    mhat = feas.solver.blocks[0][0] + feas.slack * np.eye(d)
    w, v = np.linalg.eigh(mhat)
    w, v = w[::-1], v[:, ::-1]
    r0 = max(int(np.sum(w > 1e-4 * max(w[0], 1e-12))), 1)

    accepted = None
    iterations = 0
    for r in range(r0, d + 1):
        basis = v[:, :r]
        red = _reduced_program(gp, basis)
        if red is None:
            continue
        sol = sdpcore.solve(red, opts)
        iterations += sol.iterations
        if sol.status == "infeasible":
            continue
        if sol.status != "optimal":
            raise SolverIndeterminateError(
                f"guessing-probability relaxation ended {sol.status} on the "
                f"rank-{r} face after {sol.iterations} iterations", sol)
        val = -sol.objective_value
        if accepted is not None and val <= accepted[1] + 1e-8:
            break
        accepted = (r, val, sol, basis)
    if accepted is None:
        raise SolverIndeterminateError(
            "no face of the moment completion admitted the branch program",
            feas.solver)

    r, val, sol, basis = accepted
    lifted = [(basis @ re @ basis.T, np.zeros((d, d))) for re, _ in sol.blocks]
    resid = 0.0
    for pairs, rhs in gp.problem.constraints:
        acc = -rhs
        for k, (re, _) in pairs.items():
            acc += float(np.sum(re * lifted[k][0]))
        resid = max(resid, abs(acc))
    pg = min(max(val, 0.0), 1.0)
    return GuessingResult(pg_upper=pg, level=gp.level, settings=gp.settings,
                          face_rank=r, equality_residual=resid,
                          min_eigenvalue=sol.min_eigenvalue,
                          iterations=iterations, blocks=lifted)


def pg_upper_bound(b: Behavior, settings, level: str | None = None,
                   opts: sdpcore.SdpOptions | None = None) -> float:
    """Upper bound on the eavesdropper's guessing probability at `settings`.

    Nonincreasing in the relaxation level; an eavesdropper can always
    output the modal outcome, so the bound is at least the largest
    entry of P(.|settings).
    """
    return solve_guessing(build_guessing_program(b, settings, level), opts).pg_upper


def min_entropy(pg: float) -> float:
    """Certified randomness in bits, -log2(pg)."""
    if not 0.0 < pg <= 1.0 + 1e-12:
        raise ValueError(f"guessing probability {pg} outside (0, 1]")
    return -math.log2(min(pg, 1.0))


def certification_report(b: Behavior, settings, level: str | None = None,
                         opts: sdpcore.SdpOptions | None = None) -> dict:
    """Full certification pipeline on one behavior, as a JSON-ready dict."""
    from maxrand.scenario import chsh_value  # local import avoids cycle at module load

    sc = b.scenario
    level = level or default_level(sc)
    report = {
        "scenario": {"parties": sc.parties, "inputs": sc.inputs_per_party,
                     "outputs": sc.outputs_per_party},
        "settings": [s + 1 for s in settings],
        "level": level,
        "validation": validate_behavior(b).summary(),
    }
    if (sc.parties, sc.inputs_per_party, sc.outputs_per_party) == (2, 2, 2):
        report["chsh"] = chsh_value(b)
    mem = membership(b, level, opts)
    report["membership_status"] = mem.status
    report["membership_slack"] = mem.slack
    res = solve_guessing(build_guessing_program(b, settings, level), opts)
    report["pg_upper"] = res.pg_upper
    report["min_entropy_bits"] = res.min_entropy_bits
    report["solver_residuals"] = {
        "equality": res.equality_residual,
        "min_eigenvalue": res.min_eigenvalue,
        "iterations": res.iterations,
        "face_rank": res.face_rank,
    }
    return report
