"""
Pauli measurement settings and Pauli-string operators
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import List

import numpy as np

from backend.errors import InputError

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True, order=True)
class PauliSetting:
    """One measurement basis per qubit, e.g. "XZ" """

    letters: str

    def __post_init__(self):
        if not self.letters or set(self.letters) - set("XYZ"):
            raise InputError(f"Pauli setting must be a non-empty string over X, Y, Z; got {self.letters!r}")

    @property
    def n_qubits(self) -> int:
        return len(self.letters)

    def covers(self, label: str) -> bool:
        """True when every non-identity letter of a Pauli string is measured here"""
        return len(label) == len(self.letters) and all(p in ("I", s) for p, s in zip(label, self.letters))

    def __str__(self) -> str:
        return self.letters


def settings_for(n: int) -> List[PauliSetting]:
    """All 3^n settings, lexicographic with X < Y < Z"""
    if n <= 0:
        raise InputError(f"Need at least one qubit, got {n}")
    return [PauliSetting("".join(letters)) for letters in itertools.product("XYZ", repeat=n)]


def pauli_labels(n: int) -> List[str]:
    return ["".join(letters) for letters in itertools.product("IXYZ", repeat=n)]


@lru_cache(maxsize=None)
def pauli_operator(label: str) -> np.ndarray:
    return reduce(np.kron, (PAULI[letter] for letter in label), np.ones((1, 1), dtype=complex))
