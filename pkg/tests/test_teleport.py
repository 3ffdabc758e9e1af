"""
Unit tests for channels, the measurement engine and the teleportation protocols
"""

import itertools

import numpy as np
import pytest

from backend.circuits.gates import Circuit, GateKind, apply, coherent_teleport_circuit, gate
from backend.compiler.plan import build_plan, compress
from backend.compiler.sparse import SparseState, load_sparse_state
from backend.compiler.verify import load_table_rows
from backend.config import DEFAULT_FIXTURE_DIR
from backend.errors import InputError
from backend.protocols.channels import CORRECTIONS, BellChannel, GhzChannel
from backend.protocols.engine import Mode
from backend.protocols.teleport import (
    bidirectional_teleport,
    controlled_teleport,
    run_optimal_teleport,
    teleport_compressed,
    z_twirl,
)
from backend.qcore.measurement import BELL_STATES
from backend.qcore.state import (
    DensityMatrix,
    StateVector,
    basis_state,
    equal_up_to_global_phase,
    overlap_fidelity,
    tensor,
)
from conftest import random_density, random_sparse_state, random_state


def _register(state: SparseState) -> StateVector:
    return compress(state, build_plan(state)).register()


def test_channel_labels():
    assert BellChannel.create(2).labels == ("A1", "B1", "A2", "B2")
    ghz = GhzChannel.create(1)
    assert ghz.labels == ("A1", "B1", "C1")
    assert ghz.ownership["C1"] == "Charlie"
    assert ghz.pairs == 1
    with pytest.raises(InputError):
        BellChannel.create(-1)


def test_corrections_undo_bell_outcomes(rng):
    """Projecting (input, Alice) onto each Bell state leaves Bob a Pauli image the table undoes"""
    psi = random_state(rng, 1)
    joint = tensor(psi, StateVector(BELL_STATES["00"])).amplitudes.reshape(4, 2)
    for outcome, bell in BELL_STATES.items():
        bob = StateVector.normalized(bell.conj() @ joint)
        gates = tuple(gate(kind, 0) for kind in CORRECTIONS[outcome])
        fixed = apply(Circuit(1, gates), bob) if gates else bob
        assert equal_up_to_global_phase(fixed, psi), outcome


def test_only_the_table_correction_restores_the_qubit(rng):
    """Every Pauli other than the listed one leaves Bob a different qubit"""
    paulis = [(), (GateKind.X,), (GateKind.Z,), (GateKind.X, GateKind.Z)]
    for _ in range(50):
        psi = random_state(rng, 1)
        joint = tensor(psi, StateVector(BELL_STATES["00"])).amplitudes.reshape(4, 2)
        for outcome, bell in BELL_STATES.items():
            bob = StateVector.normalized(bell.conj() @ joint)
            for kinds in paulis:
                gates = tuple(gate(kind, 0) for kind in kinds)
                fixed = apply(Circuit(1, gates), bob) if gates else bob
                if kinds == CORRECTIONS[outcome]:
                    assert overlap_fidelity(fixed, psi) == pytest.approx(1.0, abs=1e-10)
                else:
                    assert overlap_fidelity(fixed, psi) < 1 - 1e-6, (outcome, kinds)


def test_teleport_compressed_every_branch(rng):
    for k in (1, 2):
        phi = random_state(rng, k)
        result = teleport_compressed(phi, BellChannel.create(k))
        assert len(result.branches) == 4 ** k
        for branch in result.branches:
            assert branch.probability == pytest.approx(4.0 ** -k, abs=1e-10)
            assert branch.fidelity == pytest.approx(1.0, abs=1e-10)


def test_teleport_compressed_rejects_wrong_channel(rng):
    with pytest.raises(InputError):
        teleport_compressed(random_state(rng, 2), BellChannel.create(1))


def test_table_rows_consume_claimed_pairs():
    for row in load_table_rows(DEFAULT_FIXTURE_DIR):
        transcript = run_optimal_teleport(row.sparse_state()).transcript
        assert transcript.ebits == row.bell_pairs, row.row
        assert transcript.classical_bits == 2 * row.bell_pairs


def test_random_states_teleport_perfectly(rng):
    for _ in range(200):
        n = int(rng.integers(1, 6))
        m = int(rng.integers(1, min(1 << n, 16) + 1))
        state = random_sparse_state(rng, n, m, dense_terms=bool(rng.integers(2)))
        transcript = run_optimal_teleport(state, Mode.EXHAUSTIVE).transcript

        assert transcript.branch_count == 4 ** transcript.m_prime
        for branch in transcript.branches:
            assert branch.fidelity == pytest.approx(1.0, abs=1e-10)
            assert branch.probability == pytest.approx(4.0 ** -transcript.m_prime, abs=1e-10)


def test_sampled_runs_are_reproducible():
    state = load_sparse_state(DEFAULT_FIXTURE_DIR / "xi2.json")
    first = run_optimal_teleport(state, Mode.SAMPLED, seed=11).transcript
    second = run_optimal_teleport(state, Mode.SAMPLED, seed=11).transcript
    assert first.outcomes == second.outcomes
    assert [o.split(":")[0] for o in first.outcomes] == ["A1", "A2"]
    assert first.branch_count == 1
    assert first.fidelity == pytest.approx(1.0, abs=1e-10)


def test_fully_known_state_uses_no_channel():
    state = load_sparse_state(DEFAULT_FIXTURE_DIR / "known.json")
    run = run_optimal_teleport(state)
    assert run.transcript.ebits == 0
    assert run.transcript.classical_bits == 0
    assert run.transcript.branch_count == 1
    assert run.transcript.messages == []
    assert equal_up_to_global_phase(run.final_states[0], state.dense())


def test_coherent_circuit_matches_engine(rng):
    """Gate-level teleportation and measure-and-correct leave Bob the same qubit"""
    plus = np.array([1, 1]) / np.sqrt(2)
    for _ in range(100):
        psi = random_state(rng, 1)
        start = tensor(tensor(basis_state(0, 1), psi), basis_state(0, 2))
        end = apply(coherent_teleport_circuit(), start).amplitudes.reshape(2, 2, 2, 2)[0]
        coherent = StateVector.normalized(np.einsum("abc,a,b->c", end, plus.conj(), plus.conj()))

        for branch in teleport_compressed(psi, BellChannel.create(1)).branches:
            assert equal_up_to_global_phase(branch.state, coherent)


def test_z_twirl_single_qubit(rng):
    rho = DensityMatrix(random_density(rng, 1))
    z = np.diag([1, -1])
    assert np.allclose(z_twirl(rho).entries, (rho.entries + z @ rho.entries @ z) / 2, atol=1e-12)


def test_z_twirl_two_qubits(rng):
    rho = DensityMatrix(random_density(rng, 2))
    z, i = np.diag([1, -1]), np.eye(2)
    expected = sum(np.kron(a, b) @ rho.entries @ np.kron(a, b) for a, b in itertools.product((i, z), repeat=2)) / 4
    assert np.allclose(z_twirl(rho).entries, expected, atol=1e-12)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_controlled_disclosed_is_perfect(rng, m):
    state = random_sparse_state(rng, 3, m)
    transcript = controlled_teleport(state, disclose=True).transcript
    k = transcript.m_prime
    assert transcript.branch_count == 8 ** k
    assert transcript.classical_bits == 3 * k
    assert transcript.withheld_bits == 0
    assert transcript.fidelity == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_controlled_withheld_gives_z_twirl(rng, m):
    state = random_sparse_state(rng, 3, m)
    run = controlled_teleport(state, disclose=False)
    expected = z_twirl(_register(state).density())
    assert np.allclose(run.bob_average.entries, expected.entries, atol=1e-10)
    assert run.transcript.classical_bits == 2 * run.transcript.m_prime
    assert run.transcript.withheld_bits == run.transcript.m_prime
    assert all(not msg.delivered for msg in run.transcript.messages if msg.sender == "Charlie")


def test_controlled_order_does_not_matter():
    state = load_sparse_state(DEFAULT_FIXTURE_DIR / "xi1.json")
    charlie = controlled_teleport(state, charlie_first=True)
    alice = controlled_teleport(state, charlie_first=False)
    assert sorted(b.probability for b in charlie.transcript.branches) == pytest.approx(
        sorted(b.probability for b in alice.transcript.branches)
    )
    assert np.allclose(charlie.bob_average.entries, alice.bob_average.entries, atol=1e-12)
    assert charlie.transcript.messages[0].sender == "Charlie"
    assert alice.transcript.messages[0].sender == "Alice"


def test_bidirectional_counts_add_up():
    xi1 = load_sparse_state(DEFAULT_FIXTURE_DIR / "xi1.json")
    xi2 = load_sparse_state(DEFAULT_FIXTURE_DIR / "xi2.json")
    run = bidirectional_teleport(xi1, xi2)
    assert run.transcript.ebits == 3
    assert run.transcript.classical_bits == 6
    assert run.a_to_b.transcript.messages[0].receiver == "Bob"
    assert run.b_to_a.transcript.messages[0].receiver == "Alice"
    assert run.transcript.a_to_b.fidelity == pytest.approx(1.0, abs=1e-10)
    assert run.transcript.b_to_a.fidelity == pytest.approx(1.0, abs=1e-10)


def test_bidirectional_controlled_sampled_is_reproducible():
    xi1 = load_sparse_state(DEFAULT_FIXTURE_DIR / "xi1.json")
    xi2 = load_sparse_state(DEFAULT_FIXTURE_DIR / "xi2.json")
    first = bidirectional_teleport(xi1, xi2, controlled=True, mode=Mode.SAMPLED, seed=5).transcript
    second = bidirectional_teleport(xi1, xi2, controlled=True, mode=Mode.SAMPLED, seed=5).transcript
    assert first.model_dump() == second.model_dump()
    assert first.ebits == 3
    assert first.classical_bits == 9


def test_bidirectional_known_direction_needs_no_pair():
    known = load_sparse_state(DEFAULT_FIXTURE_DIR / "known.json")
    xi2 = load_sparse_state(DEFAULT_FIXTURE_DIR / "xi2.json")
    run = bidirectional_teleport(known, xi2)
    assert run.transcript.a_to_b.ebits == 0
    assert run.transcript.a_to_b.classical_bits == 0
    assert run.transcript.b_to_a.ebits == 2
    assert run.transcript.ebits == 2
    assert equal_up_to_global_phase(run.a_to_b.final_states[0], known.dense())


def test_bidirectional_withheld_twirls_both_directions():
    xi1 = load_sparse_state(DEFAULT_FIXTURE_DIR / "xi1.json")
    xi2 = load_sparse_state(DEFAULT_FIXTURE_DIR / "xi2.json")
    run = bidirectional_teleport(xi1, xi2, controlled=True, disclose=False)
    for direction, state in ((run.a_to_b, xi1), (run.b_to_a, xi2)):
        expected = z_twirl(_register(state).density())
        assert np.allclose(direction.bob_average.entries, expected.entries, atol=1e-10)
        assert direction.transcript.withheld_bits == direction.transcript.m_prime
    assert run.transcript.withheld_bits == 3
    assert run.transcript.classical_bits == 6
