from backend.circuits.circuit_io import format_circuit, load_circuit, parse_circuit
from backend.circuits.gates import (
    GATE_MATRICES,
    Circuit,
    Gate,
    GateKind,
    apply,
    apply_to_array,
    circuit_unitary,
    coherent_teleport_circuit,
    compression_circuit,
    controlled_z,
    experiment_circuit,
    full_matrix,
    gate,
    experiment_state_closed_form,
    prep_circuit,
    prep_experiment_state,
    reconstruction_circuit,
)

__all__ = [
    'GATE_MATRICES',
    'Circuit',
    'Gate',
    'GateKind',
    'apply',
    'apply_to_array',
    'circuit_unitary',
    'coherent_teleport_circuit',
    'compression_circuit',
    'controlled_z',
    'experiment_circuit',
    'format_circuit',
    'full_matrix',
    'gate',
    'load_circuit',
    'experiment_state_closed_form',
    'parse_circuit',
    'prep_circuit',
    'prep_experiment_state',
    'reconstruction_circuit',
]
