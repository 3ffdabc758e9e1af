"""
Linear-inversion state tomography

    rho = 2^-n sum_P <P> P      over all 4^n Pauli strings

Expectations of strings containing identities are read from every setting
that measures their non-identity letters and averaged with shot weights.
PSD is not enforced on the result.
"""

import logging
from typing import Dict, Iterable, List

import numpy as np

from backend.errors import InputError
from backend.qcore.state import DensityMatrix
from backend.tomography.counts import CountsTable
from backend.tomography.settings import PauliSetting, pauli_labels, pauli_operator, settings_for

logger = logging.getLogger(__name__)


def exact_expectations(rho: DensityMatrix, readout_flip: float = 0.0) -> Dict[str, float]:
    """
    Infinite-shot expectations Tr(rho P)

    A readout flip probability f damps a weight-w string by (1 - 2f)^w.
    """
    expectations = {}
    for label in pauli_labels(rho.n_qubits):
        weight = sum(letter != "I" for letter in label)
        value = float(np.trace(rho.entries @ pauli_operator(label)).real)
        expectations[label] = value * (1 - 2 * readout_flip) ** weight
    return expectations


def _parity_sign(bits: str, label: str) -> int:
    ones = sum(bit == "1" for bit, letter in zip(bits, label) if letter != "I")
    return -1 if ones % 2 else 1


def expectations_from_tables(tables: Iterable[CountsTable]) -> Dict[str, float]:
    tables = list(tables)
    if not tables:
        raise InputError("No counts tables given")
    n = len(tables[0].setting)
    if any(len(t.setting) != n for t in tables):
        raise InputError("Counts tables mix different qubit counts")

    present = {t.setting for t in tables}
    missing = [s.letters for s in settings_for(n) if s.letters not in present]
    if missing:
        raise InputError(f"Missing settings: {', '.join(missing)}")

    expectations = {}
    for label in pauli_labels(n):
        covering = [t for t in tables if PauliSetting(t.setting).covers(label)]
        total_shots = sum(t.shots for t in covering)
        if total_shots == 0:
            raise InputError(f"No shots cover {label}")
        signed = sum(_parity_sign(bits, label) * count for t in covering for bits, count in t.counts.items())
        expectations[label] = signed / total_shots
    return expectations


def reconstruct_from_expectations(expectations: Dict[str, float], n_qubits: int) -> DensityMatrix:
    dim = 1 << n_qubits
    entries = np.zeros((dim, dim), dtype=complex)
    for label in pauli_labels(n_qubits):
        if label not in expectations:
            raise InputError(f"Missing expectation for {label}")
        entries += expectations[label] * pauli_operator(label)
    entries /= dim
    entries = (entries + entries.conj().T) / 2
    return DensityMatrix(entries, psd_tolerance=None)


def reconstruct(tables: List[CountsTable]) -> DensityMatrix:
    """
    Density matrix from counts covering every setting

    Raises:
        InputError: a setting is missing or tables disagree on width
    """
    expectations = expectations_from_tables(tables)
    rho = reconstruct_from_expectations(expectations, len(tables[0].setting))
    smallest = rho.min_eigenvalue()
    if smallest < 0:
        logger.debug("[OK] Reconstruction has negative eigenvalue %.3e (kept as-is)", smallest)
    return rho
