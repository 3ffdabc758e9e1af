"""
Projective measurements on dense states

Bell outcomes are encoded as two bits (z, x):
    Phi+ -> "00", Psi+ -> "01", Phi- -> "10", Psi- -> "11"
Single-qubit eigenbases use bit 0 for the +1 eigenvector.
"""

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from functools import reduce
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from backend.errors import InputError
from backend.qcore.state import StateVector

logger = logging.getLogger(__name__)

ZERO_MASS = 1e-14

_SQRT_HALF = 1 / np.sqrt(2)

SINGLE_QUBIT_EIGENBASES = {
    "Z": (np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)),
    "X": (np.array([1, 1], dtype=complex) * _SQRT_HALF, np.array([1, -1], dtype=complex) * _SQRT_HALF),
    "Y": (np.array([1, 1j], dtype=complex) * _SQRT_HALF, np.array([1, -1j], dtype=complex) * _SQRT_HALF),
}

BELL_STATES = {
    "00": np.array([1, 0, 0, 1], dtype=complex) * _SQRT_HALF,   # Phi+
    "01": np.array([0, 1, 1, 0], dtype=complex) * _SQRT_HALF,   # Psi+
    "10": np.array([1, 0, 0, -1], dtype=complex) * _SQRT_HALF,  # Phi-
    "11": np.array([0, 1, -1, 0], dtype=complex) * _SQRT_HALF,  # Psi-
}

BELL_NAMES = {"00": "Phi+", "01": "Psi+", "10": "Phi-", "11": "Psi-"}


class Basis(str, Enum):
    COMPUTATIONAL = "computational"
    BELL = "bell"
    PLUS_MINUS = "plus_minus"
    PAULI = "pauli-setting"


@dataclass(frozen=True, eq=False)
class MeasurementRecord:
    basis_label: Basis
    outcome: str
    probability: float
    post_state: StateVector
    remainder: StateVector


class Branch(NamedTuple):
    outcome: str
    probability: float
    post_state: StateVector
    remainder: StateVector


def _letters_for(basis: Basis, k: int, setting: Optional[str]) -> str:
    if basis == Basis.COMPUTATIONAL:
        return "Z" * k
    if basis == Basis.PLUS_MINUS:
        return "X" * k
    if basis == Basis.PAULI:
        if setting is None or len(setting) != k or set(setting) - set("XYZ"):
            raise InputError(f"Pauli setting {setting!r} does not match {k} measured qubits")
        return setting
    raise InputError(f"Unsupported basis {basis!r}")


def basis_vectors(basis: Basis, k: int, setting: Optional[str] = None) -> List[Tuple[str, np.ndarray]]:
    """
    Outcome labels and measurement vectors for k qubits

    Returns:
        list of (bit string, 2^k vector) in ascending outcome order
    """
    basis = Basis(basis)
    if basis == Basis.BELL:
        if k != 2:
            raise InputError(f"Bell measurement needs exactly 2 qubits, got {k}")
        return list(BELL_STATES.items())

    letters = _letters_for(basis, k, setting)
    vectors = []
    for bits in itertools.product("01", repeat=k):
        factors = [SINGLE_QUBIT_EIGENBASES[letter][int(bit)] for letter, bit in zip(letters, bits)]
        vectors.append(("".join(bits), reduce(np.kron, factors, np.ones(1, dtype=complex))))
    return vectors


def _check_qubits(state: StateVector, qubits: Sequence[int]) -> List[int]:
    qubits = list(qubits)
    if not qubits:
        raise InputError("No qubits to measure")
    if len(set(qubits)) != len(qubits):
        raise InputError(f"Repeated qubit index in {qubits}")
    for qubit in qubits:
        if not 0 <= qubit < state.n_qubits:
            raise InputError(f"Qubit index {qubit} out of range for {state.n_qubits} qubits")
    return qubits


def project(state: StateVector, qubits: Sequence[int], vector: np.ndarray) -> Tuple[float, np.ndarray, np.ndarray]:
    """
    Project the given qubits onto one measurement vector

    Returns:
        (probability, unnormalized full post-state, unnormalized state of the
        unmeasured qubits in ascending index order)
    """
    qubits = _check_qubits(state, qubits)
    n, k = state.n_qubits, len(qubits)

    psi = np.moveaxis(state.amplitudes.reshape([2] * n), qubits, range(k)).reshape(1 << k, -1)
    rest = np.asarray(vector, dtype=complex).conj() @ psi
    probability = float(np.vdot(rest, rest).real)

    post = np.outer(vector, rest).reshape([2] * n)
    post = np.moveaxis(post, range(k), qubits).reshape(-1)
    return probability, post, rest


def branch_all_outcomes(
    state: StateVector,
    qubits: Sequence[int],
    basis: Basis,
    setting: Optional[str] = None,
) -> List[Branch]:
    """
    Every measurement outcome with its Born probability and post-measurement state

    Branches lighter than 1e-14 are dropped; their total mass is logged and is
    bounded by 4^k * 1e-14.
    """
    qubits = _check_qubits(state, qubits)
    branches = []
    dropped = 0.0
    for outcome, vector in basis_vectors(basis, len(qubits), setting):
        probability, post, rest = project(state, qubits, vector)
        if probability < ZERO_MASS:
            dropped += probability
            continue
        norm = np.sqrt(probability)
        branches.append(Branch(outcome, probability, StateVector(post / norm), StateVector(rest / norm)))

    if dropped > 0:
        logger.debug("[OK] Dropped zero-mass branches (total %.3e)", dropped)
    return branches


def measure_projective(
    state: StateVector,
    qubits: Sequence[int],
    basis: Basis,
    rng_seed,
    setting: Optional[str] = None,
) -> MeasurementRecord:
    """
    Sample one outcome by the Born rule

    Args:
        rng_seed: seed (or numpy Generator) driving the draw; equal seeds give equal outcomes
    """
    branches = branch_all_outcomes(state, qubits, basis, setting)
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)

    weights = np.array([branch.probability for branch in branches])
    chosen = branches[int(rng.choice(len(branches), p=weights / weights.sum()))]
    return MeasurementRecord(Basis(basis), chosen.outcome, chosen.probability, chosen.post_state, chosen.remainder)
