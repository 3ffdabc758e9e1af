"""
Shared entangled resources with per-qubit ownership labels

Labels are party letter + pair/triplet number: A1 B1 A2 B2 ... for Bell
channels, A1 B1 C1 A2 B2 C2 ... for GHZ channels.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from backend.circuits.gates import GateKind
from backend.errors import InputError
from backend.qcore.measurement import BELL_STATES
from backend.qcore.state import StateVector, tensor_all

GHZ_STATE = np.array([1, 0, 0, 0, 0, 0, 0, 1], dtype=complex) / np.sqrt(2)

# Bell outcome (z, x) -> gates Bob applies, in order
CORRECTIONS: Dict[str, Tuple[GateKind, ...]] = {
    "00": (),
    "01": (GateKind.X,),
    "10": (GateKind.Z,),
    "11": (GateKind.X, GateKind.Z),
}


def _owner(label: str) -> str:
    return {"A": "Alice", "B": "Bob", "C": "Charlie"}[label[0]]


@dataclass(frozen=True, eq=False)
class BellChannel:
    pairs: int
    state: StateVector
    labels: Tuple[str, ...]
    ownership: Dict[str, str] = field(default_factory=dict)

    @classmethod
    def create(cls, pairs: int) -> "BellChannel":
        """pairs copies of Phi+"""
        if pairs < 0:
            raise InputError(f"Pair count must be non-negative, got {pairs}")
        labels = tuple(f"{party}{i}" for i in range(1, pairs + 1) for party in "AB")
        state = tensor_all([StateVector(BELL_STATES["00"])] * pairs)
        return cls(pairs, state, labels, {label: _owner(label) for label in labels})


@dataclass(frozen=True, eq=False)
class GhzChannel:
    triplets: int
    state: StateVector
    labels: Tuple[str, ...]
    ownership: Dict[str, str] = field(default_factory=dict)

    @classmethod
    def create(cls, triplets: int) -> "GhzChannel":
        """triplets copies of (|000> + |111>)/sqrt(2) held by Alice, Bob, Charlie"""
        if triplets < 0:
            raise InputError(f"Triplet count must be non-negative, got {triplets}")
        labels = tuple(f"{party}{i}" for i in range(1, triplets + 1) for party in "ABC")
        state = tensor_all([StateVector(GHZ_STATE)] * triplets)
        return cls(triplets, state, labels, {label: _owner(label) for label in labels})

    @property
    def pairs(self) -> int:
        return self.triplets


def bob_labels(count: int) -> List[str]:
    return [f"B{i}" for i in range(1, count + 1)]
