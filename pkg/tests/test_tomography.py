"""
Unit tests for shot simulation, linear-inversion tomography, fidelity,
the noise model and the experiment replay
"""

import numpy as np
import pytest

from backend.agents.experiment_runner import ExperimentRunner
from backend.circuits.gates import Circuit, gate, prep_circuit, prep_experiment_state
from backend.errors import InputError
from backend.qcore.state import DensityMatrix, basis_state
from backend.tomography.counts import CountsTable, NoiseSpec, simulate_all, simulate_counts
from backend.tomography.fidelity import fidelity
from backend.tomography.fixtures import density_csv, hardware_fidelities, hardware_fixtures, parse_density_matrix
from backend.tomography.noise import depolarize, noisy_density
from backend.tomography.reconstruct import exact_expectations, reconstruct, reconstruct_from_expectations
from backend.tomography.settings import PauliSetting, settings_for
from conftest import random_density, random_state
from scripts.shot_scaling import sweep


def test_settings_order():
    assert [s.letters for s in settings_for(2)] == ["XX", "XY", "XZ", "YX", "YY", "YZ", "ZX", "ZY", "ZZ"]
    assert PauliSetting("XZ").covers("IZ")
    assert not PauliSetting("XZ").covers("YI")
    with pytest.raises(InputError):
        PauliSetting("XA")


def test_settings_count_and_bounds():
    assert [s.letters for s in settings_for(1)] == ["X", "Y", "Z"]
    three = settings_for(3)
    assert len(three) == 27
    assert three[0].letters == "XXX" and three[-1].letters == "ZZZ"
    for n in (0, -1):
        with pytest.raises(InputError):
            settings_for(n)


def test_x_setting_on_zero_is_a_coin():
    table = simulate_counts(basis_state(0, 1).density(), PauliSetting("X"), 8192, seed=3)
    assert table.counts.get("0", 0) / table.shots == pytest.approx(0.5, abs=0.02)


def test_analytic_round_trip(rng):
    for _ in range(100):
        rho = DensityMatrix(random_density(rng, 2, rank=int(rng.integers(1, 5))))
        rebuilt = reconstruct_from_expectations(exact_expectations(rho), 2)
        assert np.allclose(rebuilt.entries, rho.entries, atol=1e-10)


def test_sampled_reconstruction_is_close():
    rho = prep_experiment_state().density()
    distances = [reconstruct(simulate_all(rho, 8192, seed)).trace_distance(rho) for seed in range(10)]
    assert np.mean(distances) <= 0.05


def test_simulated_counts_are_reproducible():
    rho = prep_experiment_state().density()
    first = simulate_all(rho, 1000, seed=3)
    second = simulate_all(rho, 1000, seed=3)
    assert [t.counts for t in first] == [t.counts for t in second]
    assert all(sum(t.counts.values()) == 1000 for t in first)
    assert [t.counts for t in simulate_all(rho, 1000, seed=3, stream=1)] != [t.counts for t in first]


def test_z_basis_counts_of_basis_state():
    table = simulate_counts(basis_state(2, 2).density(), PauliSetting("ZZ"), 500, seed=1)
    assert table.counts == {"10": 500}


def test_readout_flips_show_up_in_counts():
    noise = NoiseSpec(readout_flip=0.2)
    table = simulate_counts(basis_state(0, 1).density(), PauliSetting("Z"), 20000, seed=2, noise=noise)
    assert table.frequency("1") == pytest.approx(0.2, abs=0.02)


def test_noise_spec_range():
    with pytest.raises(InputError):
        NoiseSpec(depolarizing_p=1.5)
    assert NoiseSpec().is_noiseless


def test_counts_table_validation():
    CountsTable(setting="XZ", shots=3, counts={"00": 1, "11": 2})
    with pytest.raises(ValueError):
        CountsTable(setting="XZ", shots=3, counts={"00": 1})
    with pytest.raises(ValueError):
        CountsTable(setting="XZ", shots=1, counts={"0": 1})
    with pytest.raises(ValueError):
        CountsTable(setting="XQ", shots=1, counts={"00": 1})


def test_missing_setting_is_rejected():
    tables = simulate_all(prep_experiment_state().density(), 100, seed=0)
    with pytest.raises(InputError, match="Missing settings"):
        reconstruct(tables[:-1])


def test_fidelity_properties(rng):
    a, b = random_state(rng, 2), random_state(rng, 2)
    assert fidelity(a.density(), a.density()) == pytest.approx(1.0, abs=1e-6)
    assert fidelity(a.density(), b.density()) == pytest.approx(abs(np.vdot(a.amplitudes, b.amplitudes)), abs=1e-6)

    rho, sigma = random_density(rng, 2, rank=3), random_density(rng, 2, rank=2)
    assert fidelity(rho, sigma) == pytest.approx(fidelity(sigma, rho), abs=1e-6)
    assert 0.0 <= fidelity(rho, sigma) <= 1.0 + 1e-6


def test_orthogonal_states_have_zero_fidelity():
    assert fidelity(basis_state(0, 1).density(), basis_state(1, 1).density()) == pytest.approx(0.0, abs=1e-6)


def test_fixture_traces_and_theory_purity():
    theory, prime, double_prime = hardware_fixtures()
    for rho in (theory, prime, double_prime):
        assert np.trace(rho.entries).real == pytest.approx(1.0, abs=1e-9)
    assert theory.purity() == pytest.approx(1.0, abs=1e-12)


def test_fidelity_rejects_mismatched_input():
    with pytest.raises(InputError):
        fidelity(np.eye(2) / 2, np.eye(4) / 4)
    with pytest.raises(InputError):
        fidelity(np.array([[0.5, 0.3], [0.0, 0.5]]), np.eye(2) / 2)


def test_printed_matrix_fidelities():
    theory, prime, double_prime = hardware_fixtures()
    assert fidelity(theory, prime) == pytest.approx(0.9221, abs=0.02)
    assert fidelity(theory, double_prime) == pytest.approx(0.776, abs=0.02)


def test_printed_fidelities_report():
    report = hardware_fidelities()
    assert set(report["pairings"]) == {"theory_vs_prime", "theory_vs_double_prime", "prime_vs_double_prime"}
    assert report["printed"] == [0.9221, 0.9378]
    assert report["closest"]["0.9221"]["pairing"] == "theory_vs_prime"
    # rho_double_prime is too mixed for 0.9378 against any pure reference
    assert report["closest"]["0.9378"]["pairing"] == "prime_vs_double_prime"
    assert abs(report["closest"]["0.9378"]["difference"]) <= 0.02


def test_density_matrix_file_checks():
    assert parse_density_matrix({"real": [[1, 0], [0, 0]]}).dim == 2
    with pytest.raises(InputError):
        parse_density_matrix({"real": [[1, 0], [0, 0]], "imag": [[0]]})
    with pytest.raises(InputError):
        parse_density_matrix({"imag": [[0, 0], [0, 0]]})


def test_full_depolarizing_gives_mixed_qubit():
    rho = basis_state(0, 1).density().entries
    assert np.allclose(depolarize(rho, 0, 0.75, 1), np.eye(2) / 2)


def test_noiseless_density_matches_state_vector():
    rho = noisy_density(prep_circuit())
    assert np.allclose(rho.entries, prep_experiment_state().density().entries, atol=1e-12)


def test_noise_lowers_purity():
    circuit = Circuit(2, (gate("H", 0), gate("CNOT", 0, 1)))
    assert noisy_density(circuit, NoiseSpec(depolarizing_p=0.1)).purity() < 1 - 1e-3


def test_experiment_is_perfect_without_noise():
    report = ExperimentRunner().run(analytic=True)
    for value in report["fidelities"].values():
        assert value == pytest.approx(1.0, abs=1e-6)
    assert report["shots"] is None


def test_experiment_with_noise_loses_fidelity():
    report = ExperimentRunner().run(shots=8192, seed=7, noise=NoiseSpec(depolarizing_p=0.05, readout_flip=0.03))
    assert report["fidelities"]["theory_vs_prepared"] < 1.0
    assert report["fidelities"]["theory_vs_teleported"] < 1.0


def test_teleported_fidelity_falls_with_noise():
    runner = ExperimentRunner()
    values = [
        runner.run(analytic=True, noise=NoiseSpec(depolarizing_p=p))["fidelities"]["theory_vs_teleported"]
        for p in (0.0, 0.02, 0.05, 0.1)
    ]
    assert all(later < earlier for earlier, later in zip(values, values[1:]))


def test_experiment_is_deterministic():
    first = ExperimentRunner().run(shots=2048, seed=9)
    second = ExperimentRunner().run(shots=2048, seed=9)
    assert first == second


def test_experiment_csv():
    runner = ExperimentRunner()
    runner.run(analytic=True, include_fixtures=True)
    lines = runner.csv().splitlines()
    assert lines[0] == "matrix,row,col,real,imag"
    # five 4x4 matrices
    assert len(lines) == 1 + 5 * 16
    assert lines[1].startswith("rho_theory,00,00,")


def test_density_csv_labels():
    text = density_csv({"rho": DensityMatrix(np.eye(2) / 2)})
    assert text.splitlines()[1:] == ["rho,0,0,0.5,0.0", "rho,0,1,0.0,0.0", "rho,1,0,0.0,0.0", "rho,1,1,0.5,0.0"]


def test_reconstruction_error_shrinks_as_inverse_root_of_shots():
    result = sweep(seeds=10)
    assert result["slope"] == pytest.approx(-0.5, abs=0.15)
    distances = [row["mean_trace_distance"] for row in result["rows"]]
    assert distances == sorted(distances, reverse=True)
