"""
Unit tests for unknown counting, basis completion, compression plans and
verification of hand-written unitaries
"""

import copy
import json

import numpy as np
import pytest

from backend.compiler.plan import build_plan, complete_basis, compress, decompress, needed_qubits, two_unknown_plan
from backend.compiler.sparse import (
    SparseState,
    Term,
    count_unknowns,
    ebits_for,
    load_sparse_state,
    parse_sparse_state,
    state_to_payload,
)
from backend.compiler.verify import load_table_rows, parse_table_rows, verify_claimed_unitary
from backend.config import DEFAULT_FIXTURE_DIR
from backend.errors import InputError, InvariantViolation
from backend.qcore.state import equal_up_to_global_phase, unitarity_deviation
from conftest import random_sparse_state


def test_ebits_law_examples():
    assert [ebits_for(m) for m in (1, 2, 3, 4, 5, 8, 9, 64)] == [0, 1, 2, 2, 3, 3, 4, 6]
    with pytest.raises(InputError):
        ebits_for(0)


def test_bundled_states_need_one_and_two_ebits():
    assert count_unknowns(load_sparse_state(DEFAULT_FIXTURE_DIR / "xi1.json")) == (2, 1)
    assert count_unknowns(load_sparse_state(DEFAULT_FIXTURE_DIR / "xi2.json")) == (4, 2)
    assert count_unknowns(load_sparse_state(DEFAULT_FIXTURE_DIR / "known.json")) == (1, 0)


def test_ebits_match_slot_counting(rng):
    """Smallest k with 2^k slots holding m terms, on random states"""
    for _ in range(500):
        n = int(rng.integers(1, 6))
        m = int(rng.integers(1, (1 << n) + 1))
        state = random_sparse_state(rng, n, m)
        slots = 0
        while (1 << slots) < m:
            slots += 1
        assert count_unknowns(state) == (m, slots)


def test_zero_amplitude_terms_are_not_unknowns():
    state = SparseState(2, (Term(1.0, 0), Term(0.0, 3)))
    assert count_unknowns(state) == (1, 0)


def test_state_validation():
    with pytest.raises(InvariantViolation):
        SparseState(1, (Term(0.6, 0), Term(0.8, np.array([1, 1]) / np.sqrt(2))))
    with pytest.raises(InvariantViolation):
        SparseState.from_basis(2, {0: 0.5, 1: 0.5})
    with pytest.raises(InputError):
        SparseState.from_basis(1, {0: 1.0, 2: 0.0})
    with pytest.raises(InputError):
        SparseState(0, ())


def test_complete_basis_is_orthonormal(rng):
    state = random_sparse_state(rng, 3, 3, dense_terms=True)
    basis = complete_basis(list(state.term_vectors()), 8)
    assert np.allclose(basis @ basis.conj().T, np.eye(8), atol=1e-9)
    assert np.allclose(basis[:3], state.term_vectors())


def test_complete_basis_takes_candidates_in_order():
    partial = [np.array([0, 0, 1, 0], dtype=complex)]
    basis = complete_basis(partial, 4)
    assert [int(np.argmax(np.abs(row))) for row in basis] == [2, 0, 1, 3]


def test_complete_basis_rejects_non_orthonormal():
    with pytest.raises(InvariantViolation):
        complete_basis([np.array([1, 0]), np.array([1, 1]) / np.sqrt(2)], 2)


@pytest.mark.parametrize("dense_terms", [False, True])
def test_plan_compresses_and_round_trips(rng, dense_terms):
    for _ in range(250):
        n = int(rng.integers(1, 7))
        m = int(rng.integers(1, (1 << n) + 1))
        state = random_sparse_state(rng, n, m, dense_terms=dense_terms)
        plan = build_plan(state)

        assert unitarity_deviation(plan.unitary.entries) < 1e-10
        compressed = compress(state, plan)
        assert needed_qubits(compressed.state.amplitudes) <= plan.m_prime
        assert np.allclose(compressed.coefficients, state.amplitudes(), atol=1e-10)

        rebuilt = decompress(compressed.register(), plan)
        assert equal_up_to_global_phase(rebuilt, state.dense())


def test_plan_summary_targets():
    state = load_sparse_state(DEFAULT_FIXTURE_DIR / "xi2.json")
    summary = build_plan(state).summary()
    assert summary["m_prime"] == 2
    assert summary["unitary_dim"] == 8
    assert [t["source"] for t in summary["targets"]] == ["000", "011", "100", "111"]
    assert [t["target"] for t in summary["targets"]] == ["000", "001", "010", "011"]


def test_compress_rejects_foreign_plan():
    plan = build_plan(SparseState.from_basis(2, {0: 1.0}))
    with pytest.raises(InvariantViolation):
        compress(SparseState.from_basis(2, {3: 1.0}), plan)


@pytest.mark.parametrize("n_qubits", [1, 2, 4, 6])
def test_two_unknown_plan(rng, n_qubits):
    state = random_sparse_state(rng, n_qubits, 2)
    plan = two_unknown_plan(state)
    assert plan.m_prime == 1
    assert plan.targets[:2] == (0, 1)
    assert needed_qubits(compress(state, plan).state.amplitudes) <= 1
    with pytest.raises(InputError):
        two_unknown_plan(random_sparse_state(rng, 2, 3))


def test_fully_known_state_has_empty_register():
    state = load_sparse_state(DEFAULT_FIXTURE_DIR / "known.json")
    plan = build_plan(state)
    register = compress(state, plan).register()
    assert register.n_qubits == 0
    assert equal_up_to_global_phase(decompress(register, plan), state.dense())


def test_file_form(tmp_path):
    state = parse_sparse_state({"n_qubits": 2, "terms": [{"amplitude": [0.6, 0], "vector": 0}, {"amplitude": [0, 0.8], "vector": 3}]})
    assert state.amplitudes()[1] == pytest.approx(0.8j)
    assert np.allclose(parse_sparse_state(state_to_payload(state)).amplitudes(), state.amplitudes())

    with pytest.raises(InputError):
        parse_sparse_state({"n_qubits": 2, "terms": []})
    with pytest.raises(InputError):
        parse_sparse_state({"n_qubits": 2, "terms": [{"amplitude": 1.0, "vector": 0}]})

    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    with pytest.raises(InputError):
        load_sparse_state(broken)


# --- Literature table ---

def _rows_payload():
    return json.loads((DEFAULT_FIXTURE_DIR / "literature_table.json").read_text(encoding="utf-8"))


def test_every_table_row_verifies():
    rows = load_table_rows(DEFAULT_FIXTURE_DIR)
    assert [row.bell_pairs for row in rows] == [1, 1, 1, 1, 1, 2, 2, 2]
    for row in rows:
        report = verify_claimed_unitary(row.sparse_state(), row.claimed_unitary(), row.bell_pairs)
        assert report.unitary, row.row
        assert report.compresses, row.row
        assert report.count_matches, row.row
        assert report.bell_pairs == row.bell_pairs


def test_superposition_rows_are_normalized_by_prefactor():
    rows = load_table_rows(DEFAULT_FIXTURE_DIR)
    report = verify_claimed_unitary(rows[3].sparse_state(), rows[3].claimed_unitary())
    assert report.normalized_as_printed


def test_duplicated_image_is_not_bijective():
    payload = _rows_payload()
    row = copy.deepcopy(payload["rows"][0])
    row["unitary"][3] = copy.deepcopy(row["unitary"][2])
    tampered = parse_table_rows([row])[0]
    with pytest.raises(InputError, match="non-bijective"):
        verify_claimed_unitary(tampered.sparse_state(), tampered.claimed_unitary())


def test_reused_source_is_not_bijective():
    payload = _rows_payload()
    row = copy.deepcopy(payload["rows"][5])
    row["unitary"][7]["bra"] = [[0, 1.0]]
    tampered = parse_table_rows([row])[0]
    with pytest.raises(InputError, match="non-bijective"):
        verify_claimed_unitary(tampered.sparse_state(), tampered.claimed_unitary())


def test_wrong_count_is_reported():
    row = load_table_rows(DEFAULT_FIXTURE_DIR)[0]
    report = verify_claimed_unitary(row.sparse_state(), row.claimed_unitary(), claimed_bell_pairs=2)
    assert not report.count_matches
    assert not report.passed
