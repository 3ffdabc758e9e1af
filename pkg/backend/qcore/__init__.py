"""
Exact linear-algebra substrate: states, unitaries, density matrices, measurements
"""

from backend.qcore.measurement import (
    BELL_STATES,
    Basis,
    Branch,
    MeasurementRecord,
    basis_vectors,
    branch_all_outcomes,
    measure_projective,
    project,
)
from backend.qcore.state import (
    DensityMatrix,
    StateVector,
    UnitaryMatrix,
    basis_state,
    equal_up_to_global_phase,
    overlap_fidelity,
    partial_trace,
    tensor,
    tensor_all,
    unitarity_deviation,
)

__all__ = [
    'BELL_STATES',
    'Basis',
    'Branch',
    'DensityMatrix',
    'MeasurementRecord',
    'StateVector',
    'UnitaryMatrix',
    'basis_state',
    'basis_vectors',
    'branch_all_outcomes',
    'equal_up_to_global_phase',
    'measure_projective',
    'overlap_fidelity',
    'partial_trace',
    'project',
    'tensor',
    'tensor_all',
    'unitarity_deviation',
]
