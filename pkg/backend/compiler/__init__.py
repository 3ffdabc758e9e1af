"""
Resource-optimal compilation: unknown counting, basis completion,
compression unitaries and verification of claimed unitaries
"""

from backend.compiler.plan import (
    CompressedState,
    CompressionPlan,
    build_plan,
    complete_basis,
    compress,
    decompress,
    needed_qubits,
    two_unknown_plan,
)
from backend.compiler.sparse import (
    SparseState,
    SparseStateFile,
    Term,
    count_unknowns,
    ebits_for,
    load_sparse_state,
    parse_sparse_state,
    state_to_payload,
)
from backend.compiler.verify import (
    ClaimedUnitary,
    Image,
    TableRow,
    VerificationReport,
    load_table_rows,
    parse_table_rows,
    verify_claimed_unitary,
)

__all__ = [
    'ClaimedUnitary',
    'CompressedState',
    'CompressionPlan',
    'Image',
    'SparseState',
    'SparseStateFile',
    'TableRow',
    'Term',
    'VerificationReport',
    'build_plan',
    'complete_basis',
    'compress',
    'count_unknowns',
    'decompress',
    'ebits_for',
    'load_sparse_state',
    'load_table_rows',
    'needed_qubits',
    'parse_sparse_state',
    'parse_table_rows',
    'state_to_payload',
    'two_unknown_plan',
    'verify_claimed_unitary',
]
