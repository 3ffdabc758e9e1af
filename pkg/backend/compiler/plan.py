"""
Compression plans

U = sum_i |y_i><x_i| sends the i-th nonzero term vector to |i>, i.e. to
|0...0> (x) |binary(i)> on the last m' qubits, so the whole state fits
in m' = ceil(log2 m) qubits and needs only m' Bell pairs to teleport.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from backend.compiler.sparse import SparseState, ZERO_AMPLITUDE, count_unknowns
from backend.errors import InputError, InvariantViolation
from backend.qcore.state import StateVector, UnitaryMatrix

logger = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-8
COMPLETENESS_TOL = 1e-9
SUPPORT_TOL = 1e-10


def complete_basis(partial: Sequence[np.ndarray], dim: int) -> np.ndarray:
    """
    Extend orthonormal vectors to a full orthonormal basis

    Computational basis vectors are tried in ascending index order and
    orthogonalized against everything accepted so far (two Gram-Schmidt
    passes); candidates whose residual norm is below 1e-8 are skipped.

    Returns:
        dim x dim array whose rows are the basis, the given vectors first
    """
    rows = [np.asarray(v, dtype=complex).reshape(-1) for v in partial]
    if len(rows) > dim:
        raise InputError(f"{len(rows)} vectors cannot be orthonormal in dimension {dim}")
    for row in rows:
        if row.size != dim:
            raise InputError(f"Vector of length {row.size} in dimension {dim}")

    if rows:
        given = np.array(rows)
        gap = float(np.max(np.abs(given.conj() @ given.T - np.eye(len(rows)))))
        if gap > COMPLETENESS_TOL:
            raise InvariantViolation(f"Partial basis is not orthonormal (gap {gap:.3e})")

    for index in range(dim):
        if len(rows) == dim:
            break
        residual = np.zeros(dim, dtype=complex)
        residual[index] = 1.0
        for _ in range(2):
            for row in rows:
                residual = residual - np.vdot(row, residual) * row
        norm = np.linalg.norm(residual)
        if norm < RESIDUAL_TOL:
            continue
        rows.append(residual / norm)

    basis = np.array(rows, dtype=complex).reshape(len(rows), dim)
    completeness = float(np.max(np.abs(basis.T @ basis.conj() - np.eye(dim))))
    if len(rows) != dim or completeness > COMPLETENESS_TOL:
        raise InvariantViolation(f"Gram-Schmidt produced an incomplete basis ({len(rows)}/{dim}, gap {completeness:.3e})")
    return basis


@dataclass(frozen=True, eq=False)
class CompressionPlan:
    n_qubits: int
    m: int
    m_prime: int
    completed_basis: np.ndarray
    targets: Tuple[int, ...]
    unitary: UnitaryMatrix
    source_labels: Tuple[str, ...]

    @property
    def ebits(self) -> int:
        return self.m_prime

    def summary(self) -> dict:
        """Plain-data description (no matrices)"""
        width = self.n_qubits
        return {
            "n_qubits": self.n_qubits,
            "m": self.m,
            "m_prime": self.m_prime,
            "ebits": self.m_prime,
            "unitary_dim": self.unitary.dim,
            "targets": [
                {"source": label, "target": format(target, f"0{width}b")}
                for label, target in zip(self.source_labels, self.targets[: self.m])
            ],
        }


def build_plan(state: SparseState) -> CompressionPlan:
    m, m_prime = count_unknowns(state)
    dim = state.dim

    nonzero = [t for t in state.terms if abs(t.amplitude) > ZERO_AMPLITUDE]
    silent = [t for t in state.terms if abs(t.amplitude) <= ZERO_AMPLITUDE]
    partial = [t.dense(dim) for t in nonzero] + [t.dense(dim) for t in silent]
    basis = complete_basis(partial, dim)

    # nonzero terms -> |0>,...,|m-1>; everything else fills m.. in order
    targets = tuple(range(dim))
    entries = np.zeros((dim, dim), dtype=complex)
    for source, target in zip(basis, targets):
        entries[target, :] = source.conj()

    plan = CompressionPlan(
        n_qubits=state.n_qubits,
        m=m,
        m_prime=m_prime,
        completed_basis=basis,
        targets=targets,
        unitary=UnitaryMatrix(entries),
        source_labels=tuple(t.label(state.n_qubits) for t in nonzero),
    )
    logger.debug("[OK] Plan built: n=%d m=%d m'=%d", state.n_qubits, m, m_prime)
    return plan


def two_unknown_plan(state: SparseState) -> CompressionPlan:
    """Plan for alpha|x_i> + beta|x_j>: targets |0...00> and |0...01>, one ebit"""
    m, _ = count_unknowns(state)
    if m != 2:
        raise InputError(f"Two-unknown plan needs exactly 2 nonzero terms, got {m}")
    return build_plan(state)


@dataclass(frozen=True, eq=False)
class CompressedState:
    """
    U|psi> = |0>^(n-m') (x) |phi>

    Args:
        state: full n-qubit compressed state
        m_prime: qubits that carry phi
        coefficients: amplitudes on |0>..|m-1> (equal to the input amplitudes)
    """

    state: StateVector
    m_prime: int
    coefficients: Tuple[complex, ...]

    def register(self) -> StateVector:
        """phi on the last m' qubits"""
        return StateVector(self.state.amplitudes[: 1 << self.m_prime])


def support_leak(amplitudes: np.ndarray, slots: int) -> float:
    tail = np.abs(np.asarray(amplitudes)[slots:])
    return float(tail.max()) if tail.size else 0.0


def compress(state: SparseState, plan: CompressionPlan) -> CompressedState:
    if plan.n_qubits != state.n_qubits:
        raise InputError(f"Plan is for {plan.n_qubits} qubits, state has {state.n_qubits}")

    compressed = plan.unitary.apply(state.dense())
    slots = 1 << plan.m_prime
    leak = support_leak(compressed.amplitudes, slots)
    if leak > SUPPORT_TOL:
        raise InvariantViolation(f"Compressed state leaks outside the first {slots} slots (max {leak:.3e}); plan does not match state")

    return CompressedState(
        state=compressed,
        m_prime=plan.m_prime,
        coefficients=tuple(complex(a) for a in compressed.amplitudes[: plan.m]),
    )


def decompress(register: StateVector, plan: CompressionPlan) -> StateVector:
    """Bob's side: pad |0>^(n-m') in front of phi and apply U^dagger"""
    if register.n_qubits != plan.m_prime:
        raise InputError(f"Register has {register.n_qubits} qubits, plan expects {plan.m_prime}")
    padded = np.zeros(1 << plan.n_qubits, dtype=complex)
    padded[: register.dim] = register.amplitudes
    return plan.unitary.dagger().apply(StateVector(padded))


def needed_qubits(amplitudes: np.ndarray, tol: float = SUPPORT_TOL) -> int:
    """Smallest k with every amplitude beyond index 2^k below tol"""
    significant: List[int] = [i for i, a in enumerate(np.abs(amplitudes)) if a > tol]
    if not significant:
        return 0
    return max(significant).bit_length()
