"""
Density-matrix evolution of a circuit with per-gate depolarizing noise

After every gate each qubit it touched goes through
    rho -> (1 - p) rho + p/3 (X rho X + Y rho Y + Z rho Z)
"""

from typing import Optional

import numpy as np

from backend.circuits.gates import Circuit, Gate, GateKind, apply_gate_to_array
from backend.qcore.state import DensityMatrix
from backend.tomography.counts import NoiseSpec


def _conjugate(g: Gate, rho: np.ndarray, n_qubits: int) -> np.ndarray:
    """G rho G^dagger"""
    left = apply_gate_to_array(g, rho, n_qubits)
    return apply_gate_to_array(g, left.conj().T, n_qubits).conj().T


def depolarize(rho: np.ndarray, qubit: int, p: float, n_qubits: int) -> np.ndarray:
    if p == 0:
        return rho
    twirled = sum(_conjugate(Gate(kind, (qubit,)), rho, n_qubits) for kind in (GateKind.X, GateKind.Y, GateKind.Z))
    return (1 - p) * rho + (p / 3) * twirled


def noisy_density(
    circuit: Circuit,
    noise: Optional[NoiseSpec] = None,
    initial: Optional[DensityMatrix] = None,
) -> DensityMatrix:
    """
    Run a circuit on |0...0><0...0| (or initial) as a density matrix

    Readout flips are not applied here; they belong to measurement.
    """
    n = circuit.n_qubits
    dim = 1 << n
    if initial is None:
        rho = np.zeros((dim, dim), dtype=complex)
        rho[0, 0] = 1.0
    else:
        rho = np.array(initial.entries)

    p = noise.depolarizing_p if noise is not None else 0.0
    for g in circuit.gates:
        rho = _conjugate(g, rho, n)
        for qubit in g.targets:
            rho = depolarize(rho, qubit, p, n)

    return DensityMatrix((rho + rho.conj().T) / 2)
