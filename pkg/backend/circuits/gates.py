"""
Clifford+T gates, circuits and exact state-vector simulation

Circuits used by the teleportation experiment (4 qubits q0..q3):
    prep           2-qubit Clifford+T sequence on (q0, q1)
    compression    confines the prepared state to q1
    coherent       teleports q1 -> q3 through a Bell pair on (q2, q3),
                   with controlled gates in place of classical corrections
    reconstruction rebuilds the prepared state on (q0, q3)
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from backend.errors import InputError
from backend.qcore.state import StateVector, UnitaryMatrix, basis_state

logger = logging.getLogger(__name__)


class GateKind(str, Enum):
    H = "H"
    S = "S"
    SDG = "SDG"
    T = "T"
    TDG = "TDG"
    X = "X"
    Y = "Y"
    Z = "Z"
    CNOT = "CNOT"

    @classmethod
    def parse(cls, label: str) -> "GateKind":
        label = label.strip().upper().replace("†", "DG")
        try:
            return cls(label)
        except ValueError:
            raise InputError(f"Unknown gate kind {label!r}") from None

    @property
    def arity(self) -> int:
        return 2 if self is GateKind.CNOT else 1


_INV_SQRT2 = 1 / np.sqrt(2)

GATE_MATRICES = {
    GateKind.H: np.array([[1, 1], [1, -1]], dtype=complex) * _INV_SQRT2,
    GateKind.S: np.diag([1, 1j]).astype(complex),
    GateKind.SDG: np.diag([1, -1j]).astype(complex),
    GateKind.T: np.diag([1, np.exp(1j * np.pi / 4)]),
    GateKind.TDG: np.diag([1, np.exp(-1j * np.pi / 4)]),
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: np.diag([1, -1]).astype(complex),
    # control is the first (most significant) target
    GateKind.CNOT: np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
}

_INVERSES = {
    GateKind.S: GateKind.SDG,
    GateKind.SDG: GateKind.S,
    GateKind.T: GateKind.TDG,
    GateKind.TDG: GateKind.T,
}


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    targets: Tuple[int, ...]

    def __post_init__(self):
        kind = self.kind if isinstance(self.kind, GateKind) else GateKind.parse(self.kind)
        targets = tuple(int(t) for t in self.targets)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "targets", targets)

        if len(targets) != kind.arity:
            raise InputError(f"{kind.value} takes {kind.arity} qubit(s), got {len(targets)}")
        if len(set(targets)) != len(targets):
            raise InputError(f"{kind.value} control and target must differ, got {targets}")
        if any(t < 0 for t in targets):
            raise InputError(f"Negative qubit index in {kind.value} {targets}")

    @property
    def matrix(self) -> np.ndarray:
        return GATE_MATRICES[self.kind]

    def inverse(self) -> "Gate":
        return Gate(_INVERSES.get(self.kind, self.kind), self.targets)

    def __str__(self) -> str:
        return " ".join([self.kind.value, *map(str, self.targets)])


def gate(kind, *targets: int) -> Gate:
    return Gate(kind, tuple(targets))


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over n_qubits, applied left to right"""

    n_qubits: int
    gates: Tuple[Gate, ...] = ()

    def __post_init__(self):
        gates = tuple(self.gates)
        object.__setattr__(self, "gates", gates)
        if self.n_qubits < 1:
            raise InputError(f"Circuit needs at least one qubit, got {self.n_qubits}")
        for g in gates:
            if max(g.targets) >= self.n_qubits:
                raise InputError(f"Gate '{g}' addresses a qubit outside 0..{self.n_qubits - 1}")

    def __len__(self) -> int:
        return len(self.gates)

    def then(self, other: "Circuit") -> "Circuit":
        return Circuit(max(self.n_qubits, other.n_qubits), self.gates + other.gates)

    def widened(self, n_qubits: int) -> "Circuit":
        if n_qubits < self.n_qubits:
            raise InputError(f"Cannot shrink a {self.n_qubits}-qubit circuit to {n_qubits}")
        return Circuit(n_qubits, self.gates)

    def dagger(self) -> "Circuit":
        return Circuit(self.n_qubits, tuple(g.inverse() for g in reversed(self.gates)))


def apply_gate_to_array(g: Gate, array: np.ndarray, n_qubits: int) -> np.ndarray:
    """
    Apply one gate to a raw amplitude array

    The array may carry a trailing column axis (dim x k) so whole matrices
    can be pushed through; no normalization is assumed.
    """
    array = np.asarray(array, dtype=complex)
    k = len(g.targets)
    tensor_form = array.reshape([2] * n_qubits + [-1])
    moved = np.moveaxis(tensor_form, g.targets, range(k))
    shape = moved.shape
    updated = (g.matrix @ moved.reshape(1 << k, -1)).reshape(shape)
    return np.moveaxis(updated, range(k), g.targets).reshape(array.shape)


def apply_to_array(circuit: Circuit, array: np.ndarray) -> np.ndarray:
    """Apply every gate in order to a raw (possibly unnormalized) array"""
    dim = 1 << circuit.n_qubits
    array = np.asarray(array, dtype=complex)
    if array.shape[0] != dim:
        raise InputError(f"Dimension mismatch: circuit {dim}, input {array.shape[0]}")
    for g in circuit.gates:
        array = apply_gate_to_array(g, array, circuit.n_qubits)
    return array


def apply(circuit: Circuit, state: StateVector) -> StateVector:
    if state.n_qubits != circuit.n_qubits:
        raise InputError(f"Dimension mismatch: circuit has {circuit.n_qubits} qubits, state has {state.n_qubits}")
    return StateVector(apply_to_array(circuit, state.amplitudes))


def full_matrix(g: Gate, n_qubits: int) -> np.ndarray:
    """2^n x 2^n matrix of a single gate embedded in n qubits"""
    return apply_to_array(Circuit(n_qubits, (g,)), np.eye(1 << n_qubits, dtype=complex))


def circuit_unitary(circuit: Circuit) -> UnitaryMatrix:
    return UnitaryMatrix(apply_to_array(circuit, np.eye(1 << circuit.n_qubits, dtype=complex)))


# --- Building blocks ---

def controlled_z(control: int, target: int) -> List[Gate]:
    """CZ written with the native gate set: H on target around a CNOT"""
    return [gate("H", target), gate("CNOT", control, target), gate("H", target)]


def bell_pair_gates(a: int, b: int) -> List[Gate]:
    """|00> -> Phi+ on (a, b)"""
    return [gate("H", a), gate("CNOT", a, b)]


def prep_circuit() -> Circuit:
    """Two-qubit preparation sequence of the teleportation experiment"""
    labels = ["H", "T", "H", "S", "TDG", "X", "H"]
    gates = [gate(label, 0) for label in labels]
    gates += [gate("CNOT", 0, 1), gate("H", 0), gate("CNOT", 0, 1)]
    return Circuit(2, tuple(gates))


def prep_experiment_state() -> StateVector:
    return apply(prep_circuit(), basis_state(0, 2))


def experiment_state_closed_form() -> StateVector:
    """
    e^{i pi/8} (a(|00> + |11>) + b(|01> - |10>)) with
    a = (cos(pi/8) + e^{-i pi/4} sin(pi/8)) / 2
    b = (-cos(pi/8) + e^{-i pi/4} sin(pi/8)) / 2
    """
    c, s = np.cos(np.pi / 8), np.sin(np.pi / 8)
    twist = np.exp(-1j * np.pi / 4)
    a = (c + twist * s) / 2
    b = (-c + twist * s) / 2
    return StateVector(np.exp(1j * np.pi / 8) * np.array([a, b, -b, a]))


def compression_gates(high: int, low: int) -> List[Gate]:
    """
    Self-inverse map CNOT(low->high) H(low) CNOT(low->high)

    Sends a(|00>+|11>) + b(|01>-|10>) to sqrt(2)|0>(a|0> - b|1>).
    """
    return [gate("CNOT", low, high), gate("H", low), gate("CNOT", low, high)]


def coherent_teleport_gates(source: int, alice: int, bob: int) -> List[Gate]:
    """
    Teleport source -> bob through a fresh Phi+ on (alice, bob)

    Afterwards source and alice are both |+> and bob carries the input.
    """
    gates = bell_pair_gates(alice, bob)
    gates += [gate("CNOT", source, alice), gate("H", source)]
    gates += [gate("CNOT", alice, bob)]
    gates += controlled_z(source, bob)
    return gates


def coherent_teleport_circuit() -> Circuit:
    return Circuit(4, tuple(coherent_teleport_gates(1, 2, 3)))


def compression_circuit() -> Circuit:
    return Circuit(4, tuple(compression_gates(0, 1)))


def reconstruction_circuit() -> Circuit:
    return Circuit(4, tuple(compression_gates(0, 3)))


def experiment_circuit(prep: Optional[Circuit] = None) -> Circuit:
    """
    Preparation, compression, coherent teleportation and reconstruction

    The teleported two-qubit state ends on (q0, q3).
    """
    if prep is None:
        prep = prep_circuit()
    if prep.n_qubits != 2:
        raise InputError(f"Preparation circuit must act on 2 qubits, got {prep.n_qubits}")

    full = prep.widened(4).then(compression_circuit()).then(coherent_teleport_circuit()).then(reconstruction_circuit())
    logger.debug("[OK] Experiment circuit assembled (%d gates)", len(full))
    return full

