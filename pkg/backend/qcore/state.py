"""
Dense state vectors, unitaries and density matrices

Qubit 0 is the most significant bit of an amplitude index, so |q0 q1 ... q(n-1)>
reads left to right exactly like ket notation.
"""

import logging
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Optional, Sequence

import numpy as np

from backend.errors import InputError, InvariantViolation

logger = logging.getLogger(__name__)

NORM_TOL = 1e-10
UNITARY_TOL = 1e-10
HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10
FIXTURE_PSD_TOL = 1e-6


def _frozen(values) -> np.ndarray:
    array = np.array(values, dtype=complex)
    array.setflags(write=False)
    return array


def _qubits_for_dim(dim: int) -> int:
    if dim < 1 or dim & (dim - 1):
        raise InputError(f"Dimension {dim} is not a power of two")
    return dim.bit_length() - 1


@dataclass(frozen=True, eq=False)
class StateVector:
    """
    Normalized pure state over n qubits

    Args:
        amplitudes: 2^n complex amplitudes, qubit 0 most significant
    """

    amplitudes: np.ndarray
    n_qubits: int = field(init=False)

    def __post_init__(self):
        amplitudes = _frozen(self.amplitudes).reshape(-1)
        object.__setattr__(self, "amplitudes", amplitudes)
        object.__setattr__(self, "n_qubits", _qubits_for_dim(amplitudes.size))

        norm = float(np.vdot(amplitudes, amplitudes).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise InvariantViolation(f"State norm is {norm:.12f}, expected 1")

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @classmethod
    def normalized(cls, values: Sequence[complex]) -> "StateVector":
        array = np.asarray(values, dtype=complex)
        norm = np.linalg.norm(array)
        if norm == 0:
            raise InvariantViolation("Cannot normalize the zero vector")
        return cls(array / norm)

    def density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def basis_state(index: int, n_qubits: int) -> StateVector:
    """Computational basis state |index> over n_qubits"""
    dim = 1 << n_qubits
    if not 0 <= index < dim:
        raise InputError(f"Basis index {index} out of range for {n_qubits} qubits")
    amplitudes = np.zeros(dim, dtype=complex)
    amplitudes[index] = 1.0
    return StateVector(amplitudes)


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """Kronecker product; a's qubits become the most significant ones"""
    return StateVector(np.kron(a.amplitudes, b.amplitudes))


def tensor_all(states: Sequence[StateVector]) -> StateVector:
    if not states:
        return StateVector(np.ones(1, dtype=complex))
    return reduce(tensor, states)


def overlap_fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|, the Uhlmann fidelity of two pure states"""
    if a.n_qubits != b.n_qubits:
        raise InputError(f"Qubit count mismatch: {a.n_qubits} vs {b.n_qubits}")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)))


def equal_up_to_global_phase(a: StateVector, b: StateVector, tol: float = 1e-10) -> bool:
    """
    Compare two states ignoring an overall unit-modulus factor

    The phase c is a[p]*conj(b[p]) normalized, p being b's largest-magnitude
    entry. It is exact for phases 1, -1, i and -i, so tol=0 works there.

    Returns:
        True iff ||a - c*b|| <= tol
    """
    if a.n_qubits != b.n_qubits:
        raise InputError(f"Qubit count mismatch: {a.n_qubits} vs {b.n_qubits}")

    pivot = int(np.argmax(np.abs(b.amplitudes)))
    product = a.amplitudes[pivot] * np.conj(b.amplitudes[pivot])
    if abs(product) == 0:
        return False
    phase = product / abs(product)
    return bool(np.linalg.norm(a.amplitudes - phase * b.amplitudes) <= tol)


@dataclass(frozen=True, eq=False)
class UnitaryMatrix:
    """dim x dim unitary, dim a power of two"""

    entries: np.ndarray

    def __post_init__(self):
        entries = _frozen(self.entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise InputError(f"Unitary must be square, got shape {entries.shape}")
        _qubits_for_dim(entries.shape[0])
        object.__setattr__(self, "entries", entries)

        deviation = unitarity_deviation(entries)
        if deviation > UNITARY_TOL:
            raise InvariantViolation(f"Matrix is not unitary (max |U^dag U - I| = {deviation:.3e})")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def n_qubits(self) -> int:
        return _qubits_for_dim(self.dim)

    def dagger(self) -> "UnitaryMatrix":
        return UnitaryMatrix(self.entries.conj().T)

    def apply(self, state: StateVector) -> StateVector:
        if state.dim != self.dim:
            raise InputError(f"Dimension mismatch: unitary {self.dim}, state {state.dim}")
        return StateVector(self.entries @ state.amplitudes)


def unitarity_deviation(matrix: np.ndarray) -> float:
    """max |U^dag U - I| entry"""
    matrix = np.asarray(matrix, dtype=complex)
    product = matrix.conj().T @ matrix
    return float(np.max(np.abs(product - np.eye(matrix.shape[0]))))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """
    Hermitian, unit-trace 2^n x 2^n matrix

    Args:
        entries: the matrix
        psd_tolerance: most negative eigenvalue admitted; None skips the check
            (finite-shot reconstructions are not forced to be PSD)
    """

    entries: np.ndarray
    psd_tolerance: Optional[float] = PSD_TOL
    n_qubits: int = field(init=False)

    def __post_init__(self):
        entries = _frozen(self.entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise InputError(f"Density matrix must be square, got shape {entries.shape}")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "n_qubits", _qubits_for_dim(entries.shape[0]))

        hermitian_gap = float(np.max(np.abs(entries - entries.conj().T)))
        if hermitian_gap > HERMITIAN_TOL:
            raise InvariantViolation(f"Density matrix is not Hermitian (gap {hermitian_gap:.3e})")

        trace = complex(np.trace(entries))
        if abs(trace - 1.0) > NORM_TOL:
            raise InvariantViolation(f"Density matrix trace is {trace.real:.12f}, expected 1")

        if self.psd_tolerance is not None:
            smallest = self.min_eigenvalue()
            if smallest < -self.psd_tolerance:
                raise InvariantViolation(f"Density matrix has eigenvalue {smallest:.3e}")

    @classmethod
    def fixture(cls, entries) -> "DensityMatrix":
        """Externally supplied matrix, admitted with the looser PSD slack"""
        return cls(entries, psd_tolerance=FIXTURE_PSD_TOL)

    @classmethod
    def maximally_mixed(cls, n_qubits: int) -> "DensityMatrix":
        dim = 1 << n_qubits
        return cls(np.eye(dim) / dim)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)

    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues()[0])

    def purity(self) -> float:
        return float(np.trace(self.entries @ self.entries).real)

    def trace_distance(self, other: "DensityMatrix") -> float:
        if other.dim != self.dim:
            raise InputError(f"Dimension mismatch: {self.dim} vs {other.dim}")
        return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(self.entries - other.entries))))


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """
    Reduced density matrix over the qubits in keep

    Args:
        rho: n-qubit density matrix
        keep: qubit indices to retain (result keeps them in ascending order)

    Returns:
        |keep|-qubit density matrix
    """
    n = rho.n_qubits
    keep = sorted(set(keep))
    if not keep:
        raise InputError("partial_trace needs at least one qubit to keep")
    if keep[0] < 0 or keep[-1] >= n:
        raise InputError(f"Qubit indices {keep} out of range for {n} qubits")

    drop = [q for q in range(n) if q not in keep]
    reduced = rho.entries.reshape([2] * (2 * n))
    remaining = n
    for qubit in reversed(drop):
        reduced = np.trace(reduced, axis1=qubit, axis2=qubit + remaining)
        remaining -= 1

    dim = 1 << len(keep)
    return DensityMatrix(reduced.reshape(dim, dim), psd_tolerance=rho.psd_tolerance)
