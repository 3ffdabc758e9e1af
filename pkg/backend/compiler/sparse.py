"""
Sparse n-qubit states: sum_i alpha_i |x_i> over orthonormal x_i

Terms name either a computational index or a dense unit vector. The file
form (JSON) is validated with pydantic before any linear algebra runs.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError

from backend.errors import InputError, InvariantViolation
from backend.qcore.state import NORM_TOL, StateVector

logger = logging.getLogger(__name__)

ZERO_AMPLITUDE = 1e-12
ORTHONORMAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Term:
    amplitude: complex
    vector: Union[int, np.ndarray]

    @property
    def is_basis(self) -> bool:
        return isinstance(self.vector, (int, np.integer))

    def dense(self, dim: int) -> np.ndarray:
        if self.is_basis:
            if not 0 <= self.vector < dim:
                raise InputError(f"Basis index {self.vector} out of range for dimension {dim}")
            column = np.zeros(dim, dtype=complex)
            column[int(self.vector)] = 1.0
            return column

        column = np.asarray(self.vector, dtype=complex).reshape(-1)
        if column.size != dim:
            raise InputError(f"Term vector has length {column.size}, expected {dim}")
        return column

    def label(self, n_qubits: int) -> str:
        return format(int(self.vector), f"0{n_qubits}b") if self.is_basis else "dense"


@dataclass(frozen=True, eq=False)
class SparseState:
    """
    Args:
        n_qubits: register width
        terms: (amplitude, vector) pairs in the order they are given
        validate: check term count, orthonormality and normalization
    """

    n_qubits: int
    terms: Tuple[Term, ...]
    validate: bool = field(default=True, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if self.n_qubits < 1:
            raise InputError(f"n_qubits must be at least 1, got {self.n_qubits}")
        if self.validate:
            self._check()

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    def _check(self):
        m = len(self.terms)
        if not 1 <= m <= self.dim:
            raise InputError(f"State needs between 1 and {self.dim} terms, got {m}")

        vectors = self.term_vectors()
        gram = vectors.conj() @ vectors.T
        gap = float(np.max(np.abs(gram - np.eye(m))))
        if gap > ORTHONORMAL_TOL:
            raise InvariantViolation(f"Term vectors are not orthonormal (max |<x_i|x_j> - delta_ij| = {gap:.3e})")

        weight = float(np.sum(np.abs(self.amplitudes()) ** 2))
        if abs(weight - 1.0) > NORM_TOL:
            raise InvariantViolation(f"Amplitudes have total weight {weight:.12f}, expected 1")

    def amplitudes(self) -> np.ndarray:
        return np.array([t.amplitude for t in self.terms], dtype=complex)

    def term_vectors(self) -> np.ndarray:
        """m x 2^n array, one term vector per row"""
        return np.array([t.dense(self.dim) for t in self.terms], dtype=complex).reshape(len(self.terms), self.dim)

    def nonzero_terms(self) -> List[Term]:
        return [t for t in self.terms if abs(t.amplitude) > ZERO_AMPLITUDE]

    def dense(self) -> StateVector:
        return StateVector(self.amplitudes() @ self.term_vectors())

    @classmethod
    def from_basis(cls, n_qubits: int, amplitudes: dict) -> "SparseState":
        """{index: amplitude} shorthand for computational-basis terms"""
        return cls(n_qubits, tuple(Term(complex(a), int(i)) for i, a in amplitudes.items()))


def ebits_for(m: int) -> int:
    """ceil(log2 m), with a single term needing none"""
    if m < 1:
        raise InputError(f"Term count must be positive, got {m}")
    return (m - 1).bit_length()


def count_unknowns(state: SparseState) -> Tuple[int, int]:
    """
    Returns:
        (m, m_prime): nonzero-amplitude terms and the Bell pairs they need
    """
    m = len(state.nonzero_terms())
    if m == 0:
        raise InvariantViolation("State has no amplitude above 1e-12")
    return m, ebits_for(m)


# --- File form ---

class TermModel(BaseModel):
    amplitude: Tuple[float, float]
    vector: Union[int, List[Tuple[float, float]]]


class SparseStateFile(BaseModel):
    n_qubits: int = Field(ge=1, le=12)
    terms: List[TermModel] = Field(min_length=1)

    def to_state(self) -> SparseState:
        terms = []
        for term in self.terms:
            vector = term.vector
            if not isinstance(vector, int):
                vector = np.array([complex(re, im) for re, im in vector])
            terms.append(Term(complex(*term.amplitude), vector))
        return SparseState(self.n_qubits, tuple(terms))


def _pair(value: complex) -> List[float]:
    return [float(value.real), float(value.imag)]


def state_to_payload(state: SparseState) -> dict:
    terms = []
    for term in state.terms:
        vector = int(term.vector) if term.is_basis else [_pair(v) for v in term.dense(state.dim)]
        terms.append({"amplitude": _pair(complex(term.amplitude)), "vector": vector})
    return {"n_qubits": state.n_qubits, "terms": terms}


def parse_sparse_state(payload: dict) -> SparseState:
    try:
        model = SparseStateFile.model_validate(payload)
    except ValidationError as e:
        raise InputError(f"Invalid sparse state: {e.errors()[0]['msg']} at {e.errors()[0]['loc']}") from None
    return model.to_state()


def load_sparse_state(path: Union[str, Path]) -> SparseState:
    path = Path(path)
    if not path.is_file():
        raise InputError(f"State file not found: {path}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise InputError(f"{path.name}: not valid JSON ({e.msg}, line {e.lineno})") from None

    state = parse_sparse_state(payload)
    logger.info("[OK] Loaded %s: %d qubits, %d terms", path.name, state.n_qubits, len(state.terms))
    return state
