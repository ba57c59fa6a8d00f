"""Pure states, projective qubit measurements, Born-rule behaviors.

Only rank-1 projective measurements on qubits are modeled.  Outcome
index 0 corresponds to the stored projector |psi><psi|; outcome index 1
to its orthogonal complement.
"""

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from maxrand import matkernel
from maxrand.matkernel import ComplexMatrix
from maxrand.scenario import Behavior, Scenario

NORM_TOL = 1e-12


@dataclass(frozen=True)
class PureState:
    """Normalized amplitude vector over num_qubits qubits."""

    num_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (2 ** self.num_qubits,):
            raise ValueError(f"expected {2 ** self.num_qubits} amplitudes, got {amps.shape}")
        nrm = float(np.linalg.norm(amps))
        if abs(nrm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {nrm!r} deviates from 1 by more than {NORM_TOL:.0e}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)


@dataclass(frozen=True)
class BinaryQubitMeasurement:
    """Binary projective qubit measurement given by its outcome-0 ket.

    The outcome-0 projector is |psi><psi| with psi = alpha|0> + beta|1>;
    outcome 1 gets the complementary projector.
    """

    alpha: complex
    beta: complex

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        nrm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(nrm - 1.0) > NORM_TOL:
            raise ValueError(f"|alpha|^2 + |beta|^2 = {nrm!r} deviates from 1")

    def ket(self) -> np.ndarray:
        return np.array([self.alpha, self.beta])

    def effect(self, outcome: int) -> ComplexMatrix:
        """Projector for outcome 0 or 1; the two sum to the identity exactly."""
        psi = np.array([[self.alpha], [self.beta]])
        proj = psi @ psi.conj().T
        if outcome == 0:
            return ComplexMatrix.from_complex(proj)
        if outcome == 1:
            return ComplexMatrix.from_complex(np.eye(2) - proj)
        raise ValueError(f"outcome must be 0 or 1, got {outcome}")


@dataclass(frozen=True)
class MeasurementAssembly:
    """Per-party tuples of binary qubit measurements, equal lengths."""

    per_party: tuple

    def __post_init__(self):
        pp = tuple(tuple(ms) for ms in self.per_party)
        if not pp:
            raise ValueError("assembly needs at least one party")
        m = len(pp[0])
        if m < 1 or any(len(ms) != m for ms in pp):
            raise ValueError("every party needs the same positive number of measurements")
        object.__setattr__(self, "per_party", pp)

    @property
    def parties(self) -> int:
        return len(self.per_party)

    @property
    def inputs_per_party(self) -> int:
        return len(self.per_party[0])

    def scenario(self) -> Scenario:
        return Scenario(self.parties, self.inputs_per_party, 2)


def make_bipartite_state(a: float) -> PureState:
    """Schmidt-form two-qubit state A|00> + sqrt(1 - A^2)|11>."""
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"Schmidt coefficient {a} outside [0, 1]")
    amps = np.zeros(4, dtype=np.complex128)
    amps[0] = a
    amps[3] = np.sqrt(1.0 - a * a)
    return PureState(2, amps)


def make_ghz(parties: int) -> PureState:
    """(|0...0> + |1...1>)/sqrt(2) on `parties` qubits."""
    if parties < 2:
        raise ValueError("GHZ state needs at least 2 parties")
    amps = np.zeros(2 ** parties, dtype=np.complex128)
    amps[0] = amps[-1] = 1.0 / np.sqrt(2.0)
    return PureState(parties, amps)


def born_behavior(state: PureState, assembly: MeasurementAssembly) -> Behavior:
    """Behavior P(a|x) = <Phi| (x) E_{a_i|x_i} |Phi> from a realization."""
    p = assembly.parties
    if state.num_qubits != p:
        raise ValueError(f"state has {state.num_qubits} qubits but assembly has {p} parties")
    sc = assembly.scenario()
    psi_re = state.amplitudes.real
    psi_im = state.amplitudes.imag
    table = np.zeros(sc.table_shape)
    for xs in sc.input_tuples():
        effects = [[assembly.per_party[party][xs[party]].effect(a) for a in range(2)]
                   for party in range(p)]
        for outs in sc.outcome_tuples():
            op = effects[0][outs[0]]
            for party in range(1, p):
                op = matkernel.kron(op, effects[party][outs[party]])
            # <psi| op |psi>, real for Hermitian op
            vr = op.re @ psi_re - op.im @ psi_im
            vi = op.re @ psi_im + op.im @ psi_re
            table[xs + outs] = float(psi_re @ vr + psi_im @ vi)
    np.clip(table, 0.0, 1.0, out=table)
    return Behavior(sc, table)


def bloch_of_projector(meas: BinaryQubitMeasurement) -> np.ndarray:
    """Unit Bloch vector n with outcome-0 effect (I + n.sigma)/2."""
    a, b = meas.alpha, meas.beta
    return np.array([
        2.0 * (np.conj(a) * b).real,
        2.0 * (np.conj(a) * b).imag,
        abs(a) ** 2 - abs(b) ** 2,
    ])


def measurement_from_bloch(n) -> BinaryQubitMeasurement:
    """Inverse of bloch_of_projector up to the unobservable global phase."""
    n = np.asarray(n, dtype=np.float64)
    nrm = float(np.linalg.norm(n))
    if abs(nrm - 1.0) > 1e-9:
        raise ValueError(f"Bloch vector norm {nrm!r} is not 1")
    theta = np.arccos(np.clip(n[2], -1.0, 1.0))
    phi = np.arctan2(n[1], n[0])
    return BinaryQubitMeasurement(np.cos(theta / 2.0),
                                  np.sin(theta / 2.0) * np.exp(1j * phi))


def schmidt_coefficient(state: PureState) -> float:
    """Larger-weight-free Schmidt coefficient A of a two-qubit state.

    Computed from the singular values of the 2x2 amplitude matrix; the
    returned value is the coefficient multiplying |00> in the canonical
    form A|00> + sqrt(1 - A^2)|11> with the convention that round trips
    through make_bipartite_state are exact.
    """
    if state.num_qubits != 2:
        raise ValueError("Schmidt decomposition here applies to two-qubit states only")
    mat = state.amplitudes.reshape(2, 2)
    svals = np.linalg.svd(mat, compute_uv=False)
    a = float(svals[0])
    # match the stored convention: if the |00> weight is the smaller one,
    # report the smaller singular value
    if abs(state.amplitudes[0]) ** 2 <= 0.5:
        a = float(svals[1])
    return min(max(a, 0.0), 1.0)


# measurement helpers for the constructions

def sigma_x_measurement() -> BinaryQubitMeasurement:
    """Outcome 0 projects onto |+>."""
    s = 1.0 / np.sqrt(2.0)
    return BinaryQubitMeasurement(s, s)


def sigma_z_measurement() -> BinaryQubitMeasurement:
    """Outcome 0 projects onto |0>."""
    return BinaryQubitMeasurement(1.0, 0.0)


# ---------------------------------------------------------------------------
# Realization files: state amplitudes plus per-party measurement kets
# ---------------------------------------------------------------------------

def _c2pair(c: complex):
    return [float(c.real), float(c.imag)]


def realization_to_dict(state: PureState, assembly: MeasurementAssembly) -> dict:
    return {
        "parties": assembly.parties,
        "state": {
            "num_qubits": state.num_qubits,
            "amplitudes": [_c2pair(c) for c in state.amplitudes],
        },
        "measurements": [
            [{"alpha": _c2pair(ms.alpha), "beta": _c2pair(ms.beta)} for ms in party_ms]
            for party_ms in assembly.per_party
        ],
    }


def realization_from_dict(data: dict):
    try:
        amps = np.array([complex(re, im) for re, im in data["state"]["amplitudes"]])
        state = PureState(int(data["state"]["num_qubits"]), amps)
        per_party = tuple(
            tuple(BinaryQubitMeasurement(complex(*ms["alpha"]), complex(*ms["beta"]))
                  for ms in party_ms)
            for party_ms in data["measurements"]
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise ValueError(f"malformed realization data: {exc}") from exc
    return state, MeasurementAssembly(per_party)


def write_realization(state: PureState, assembly: MeasurementAssembly, path,
                      metadata: dict | None = None) -> None:
    data = realization_to_dict(state, assembly)
    if metadata:
        data["metadata"] = metadata
    with open(path, "w") as fh:
        json.dump(data, fh, indent=1, sort_keys=True)
        fh.write("\n")


def read_realization(path):
    with open(path) as fh:
        return realization_from_dict(json.load(fh))
