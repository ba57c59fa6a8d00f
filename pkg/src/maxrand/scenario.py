"""Bell-scenario data model: behaviors, validation, marginals, CHSH.

Index convention, used across the whole package: code-level input,
outcome and party indices are 0-based; the JSON file format and the
CLI use 1-based labels matching conventional notation (input 1 is
index 0).  Behavior tables are indexed [x_1..x_p, a_1..a_p] with the
input tuple as the outer index.
"""

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

#: No-signaling deviation above which marginals are considered ill-defined.
NS_HARD_TOL = 1e-8
#: No-signaling deviation above which a warning-level violation is reported.
NS_WARN_TOL = 1e-10
NORMALIZATION_TOL = 1e-10
RANGE_TOL = 1e-12


class BehaviorFormatError(ValueError):
    """Malformed behavior file; `path` names the offending field."""

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


@dataclass(frozen=True)
class Scenario:
    """(parties, inputs per party, outputs per party)."""

    parties: int
    inputs_per_party: int
    outputs_per_party: int

    def __post_init__(self):
        if self.parties < 1:
            raise ValueError("parties must be >= 1")
        if self.inputs_per_party < 1:
            raise ValueError("inputs_per_party must be >= 1")
        if self.outputs_per_party < 2:
            raise ValueError("outputs_per_party must be >= 2")

    @property
    def table_shape(self):
        return (self.inputs_per_party,) * self.parties + (self.outputs_per_party,) * self.parties

    def input_tuples(self):
        return itertools.product(range(self.inputs_per_party), repeat=self.parties)

    def outcome_tuples(self):
        return itertools.product(range(self.outputs_per_party), repeat=self.parties)


@dataclass(frozen=True)
class Behavior:
    """Conditional probability table P(outcomes | inputs) for a scenario."""

    scenario: Scenario
    table: np.ndarray = field(repr=False)

    def __post_init__(self):
        t = np.ascontiguousarray(self.table, dtype=np.float64)
        if t.shape != self.scenario.table_shape:
            raise ValueError(f"table shape {t.shape} does not match scenario "
                             f"shape {self.scenario.table_shape}")
        t.flags.writeable = False
        object.__setattr__(self, "table", t)

    def prob(self, outcomes, inputs) -> float:
        return float(self.table[tuple(inputs) + tuple(outcomes)])


@dataclass(frozen=True)
class FamilyParams:
    """Constraint constants of the maximal-randomness family.

    x, y fix Bob's second-input joint entries, z, w Alice's; the sums
    s = z + w and t = x + y are the second-input marginals.
    """

    x: float
    y: float
    z: float
    w: float

    def __post_init__(self):
        for name in ("x", "y", "z", "w"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} = {v} outside [0, 1]")
        if not 0.0 <= self.s <= 1.0 or not 0.0 <= self.t <= 1.0:
            raise ValueError(f"marginals s = {self.s}, t = {self.t} outside [0, 1]")

    @property
    def s(self) -> float:
        return self.z + self.w

    @property
    def t(self) -> float:
        return self.x + self.y

    @classmethod
    def maximally_entangled(cls, x: float, z: float) -> "FamilyParams":
        """Parameters with s = t = 1/2, as forced by unbiased marginals."""
        return cls(x=x, y=0.5 - x, z=z, w=0.5 - z)


@dataclass(frozen=True)
class Violation:
    kind: str
    magnitude: float
    context: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def max_violation(self) -> float:
        return max((v.magnitude for v in self.violations), default=0.0)

    def worst(self, kind: str) -> float:
        return max((v.magnitude for v in self.violations if v.kind == kind), default=0.0)

    def summary(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [
                {"kind": v.kind, "magnitude": v.magnitude, "context": v.context}
                for v in self.violations
            ],
        }


def _ns_deviation(table, sc, party):
    """Max variation of the other parties' joint marginal over `party`'s input."""
    p = sc.parties
    # sum out this party's outcome -> axes (inputs..., other outcomes...)
    marg = table.sum(axis=p + party)
    worst = 0.0
    where = None
    ref = None
    for xi in range(sc.inputs_per_party):
        sl = np.take(marg, xi, axis=party)
        if ref is None:
            ref = sl
            continue
        dev = float(np.max(np.abs(sl - ref)))
        if dev > worst:
            worst = dev
            where = xi
    return worst, where


def validate_behavior(b: Behavior) -> ValidationReport:
    """Check entry range, normalization per input tuple, and no-signaling.

    Returns a report listing each violated invariant with its max
    magnitude; an empty report means the behavior is valid.  Structural
    (shape) errors raise before any numeric check, at construction.
    """
    sc = b.scenario
    t = b.table
    out = []
    low = float(t.min())
    high = float(t.max())
    if low < -RANGE_TOL:
        idx = np.unravel_index(int(t.argmin()), t.shape)
        out.append(Violation("nonnegativity", -low, f"entry {idx}"))
    if high > 1.0 + RANGE_TOL:
        idx = np.unravel_index(int(t.argmax()), t.shape)
        out.append(Violation("unit-bound", high - 1.0, f"entry {idx}"))
    sums = t.reshape(t.shape[: sc.parties] + (-1,)).sum(axis=-1)
    dev = float(np.max(np.abs(sums - 1.0)))
    if dev > NORMALIZATION_TOL:
        idx = np.unravel_index(int(np.argmax(np.abs(sums - 1.0))), sums.shape)
        out.append(Violation("normalization", dev, f"input tuple {idx}"))
    for party in range(sc.parties):
        worst, _ = _ns_deviation(t, sc, party)
        if worst > NS_WARN_TOL:
            out.append(Violation("no-signaling", worst, f"party {party}"))
    return ValidationReport(tuple(out))


def marginal(b: Behavior, party: int, inp: int) -> np.ndarray:
    """Outcome distribution of one party for one of its inputs.

    Other parties' inputs are fixed to index 0; this is well defined
    only up to the no-signaling deviation, so deviations above
    NS_HARD_TOL raise.
    """
    sc = b.scenario
    if not 0 <= party < sc.parties:
        raise ValueError(f"party {party} out of range")
    if not 0 <= inp < sc.inputs_per_party:
        raise ValueError(f"input {inp} out of range")
    if sc.parties > 1:
        worst = max(_ns_deviation(b.table, sc, q)[0] for q in range(sc.parties) if q != party)
        if worst > NS_HARD_TOL:
            raise ValueError(f"no-signaling violation {worst:.3e} exceeds "
                             f"{NS_HARD_TOL:.0e}; marginal is ill-defined")
    inputs = [0] * sc.parties
    inputs[party] = inp
    block = b.table[tuple(inputs)]
    axes = tuple(q for q in range(sc.parties) if q != party)
    return block.sum(axis=axes) if axes else block.copy()


def uniformity_check(b: Behavior, settings, tol: float = 1e-10):
    """Is P(.|settings) uniform within tol?  Returns (bool, max deviation)."""
    sc = b.scenario
    block = b.table[tuple(settings)]
    target = 1.0 / sc.outputs_per_party ** sc.parties
    dev = float(np.max(np.abs(block - target)))
    return dev <= tol, dev


def correlator(b: Behavior, inputs) -> float:
    """<A_x B_y ...> with outcome index 0 mapped to +1, index 1 to -1."""
    sc = b.scenario
    if sc.outputs_per_party != 2:
        raise ValueError("correlators are defined for binary outcomes only")
    block = b.table[tuple(inputs)]
    signs = np.ones((2,) * sc.parties)
    for party in range(sc.parties):
        shape = [1] * sc.parties
        shape[party] = 2
        signs = signs * np.array([1.0, -1.0]).reshape(shape)
    return float(np.sum(block * signs))


def chsh_value(b: Behavior) -> float:
    """<A1B1> + <A1B2> + <A2B1> - <A2B2> for a (2,2,2) behavior."""
    sc = b.scenario
    if (sc.parties, sc.inputs_per_party, sc.outputs_per_party) != (2, 2, 2):
        raise ValueError(f"CHSH needs a (2,2,2) scenario, got "
                         f"({sc.parties},{sc.inputs_per_party},{sc.outputs_per_party})")
    return (correlator(b, (0, 0)) + correlator(b, (0, 1))
            + correlator(b, (1, 0)) - correlator(b, (1, 1)))


def uniform_behavior(sc: Scenario) -> Behavior:
    table = np.full(sc.table_shape, 1.0 / sc.outputs_per_party ** sc.parties)
    return Behavior(sc, table)


def deterministic_behavior(sc: Scenario, assignment) -> Behavior:
    """Local deterministic behavior; assignment[party][input] is the outcome."""
    table = np.zeros(sc.table_shape)
    for xs in sc.input_tuples():
        outs = tuple(assignment[party][xs[party]] for party in range(sc.parties))
        table[xs + outs] = 1.0
    return Behavior(sc, table)


def pr_box() -> Behavior:
    """The (2,2,2) box with a xor b = x.y and uniform marginals."""
    sc = Scenario(2, 2, 2)
    table = np.zeros(sc.table_shape)
    for x, y, a, bb in itertools.product(range(2), repeat=4):
        if (a ^ bb) == (x & y):
            table[x, y, a, bb] = 0.5
    return Behavior(sc, table)


# ---------------------------------------------------------------------------
# Behavior files: 1-based comma-joined keys, e.g. {"p": {"1,2": {"2,1": v}}}
# ---------------------------------------------------------------------------

def _key(indices) -> str:
    return ",".join(str(i + 1) for i in indices)


def _parse_key(key, count, limit, path):
    parts = key.split(",")
    if len(parts) != count:
        raise BehaviorFormatError(f"expected {count} comma-separated indices, got {key!r}", path)
    try:
        idx = tuple(int(s) - 1 for s in parts)
    except ValueError:
        raise BehaviorFormatError(f"non-integer index in {key!r}", path) from None
    for i in idx:
        if not 0 <= i < limit:
            raise BehaviorFormatError(f"index {i + 1} outside 1..{limit}", path)
    return idx


def behavior_to_dict(b: Behavior) -> dict:
    sc = b.scenario
    table = {}
    for xs in sc.input_tuples():
        table[_key(xs)] = {_key(outs): float(b.table[xs + outs])
                           for outs in sc.outcome_tuples()}
    return {"parties": sc.parties, "inputs": sc.inputs_per_party,
            "outputs": sc.outputs_per_party, "p": table}


def behavior_from_dict(data: dict) -> Behavior:
    for name in ("parties", "inputs", "outputs"):
        if name not in data:
            raise BehaviorFormatError("missing field", name)
        if not isinstance(data[name], int):
            raise BehaviorFormatError("must be an integer", name)
    sc = Scenario(data["parties"], data["inputs"], data["outputs"])
    if "p" not in data or not isinstance(data["p"], dict):
        raise BehaviorFormatError("missing probability table", "p")
    table = np.zeros(sc.table_shape)
    seen = set()
    for xkey, block in data["p"].items():
        xs = _parse_key(xkey, sc.parties, sc.inputs_per_party, f"p.{xkey}")
        seen.add(xs)
        if not isinstance(block, dict):
            raise BehaviorFormatError("expected an outcome map", f"p.{xkey}")
        for akey, value in block.items():
            outs = _parse_key(akey, sc.parties, sc.outputs_per_party, f"p.{xkey}.{akey}")
            if not isinstance(value, (int, float)):
                raise BehaviorFormatError("probability must be a number", f"p.{xkey}.{akey}")
            table[xs + outs] = float(value)
        total = float(table[xs].sum())
        if abs(total - 1.0) > NS_HARD_TOL:
            raise BehaviorFormatError(f"outcome probabilities sum to {total!r}", f"p.{xkey}")
    for xs in Scenario(sc.parties, sc.inputs_per_party, sc.outputs_per_party).input_tuples():
        if xs not in seen:
            raise BehaviorFormatError("missing input tuple", f"p.{_key(xs)}")
    return Behavior(sc, table)


def write_behavior(b: Behavior, path) -> None:
    with open(path, "w") as fh:
        json.dump(behavior_to_dict(b), fh, indent=1, sort_keys=True)
        fh.write("\n")


def read_behavior(path) -> Behavior:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise BehaviorFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise BehaviorFormatError("top-level value must be an object")
    return behavior_from_dict(data)
