"""
Uhlmann fidelity F = Tr sqrt(sqrt(rho1) rho2 sqrt(rho1))

This is the root convention (F = 1 for equal states, |<a|b>| for pure ones).
Negative eigenvalues are clipped to zero before any square root.
"""

from typing import Union

import numpy as np
import scipy.linalg

from backend.errors import InputError
from backend.qcore.state import DensityMatrix

HERMITIAN_INPUT_TOL = 1e-8


def _as_hermitian(rho: Union[DensityMatrix, np.ndarray]) -> np.ndarray:
    entries = rho.entries if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise InputError(f"Expected a square matrix, got shape {entries.shape}")
    gap = float(np.max(np.abs(entries - entries.conj().T)))
    if gap > HERMITIAN_INPUT_TOL:
        raise InputError(f"Matrix is not Hermitian (gap {gap:.3e})")
    return (entries + entries.conj().T) / 2


def _psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    values, vectors = scipy.linalg.eigh(matrix)
    roots = np.sqrt(np.clip(values, 0.0, None))
    return (vectors * roots) @ vectors.conj().T


def fidelity(rho1: Union[DensityMatrix, np.ndarray], rho2: Union[DensityMatrix, np.ndarray]) -> float:
    a = _as_hermitian(rho1)
    b = _as_hermitian(rho2)
    if a.shape != b.shape:
        raise InputError(f"Dimension mismatch: {a.shape} vs {b.shape}")

    root = _psd_sqrt(a)
    inner = root @ b @ root
    inner = (inner + inner.conj().T) / 2
    values = scipy.linalg.eigh(inner, eigvals_only=True)
    return float(np.sum(np.sqrt(np.clip(values, 0.0, None))))
