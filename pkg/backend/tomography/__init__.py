"""
Pauli-setting tomography, Uhlmann fidelity and a per-gate noise model
"""

from backend.tomography.counts import CountsTable, NoiseSpec, simulate_all, simulate_counts
from backend.tomography.fidelity import fidelity
from backend.tomography.fixtures import (
    density_csv,
    density_to_payload,
    load_density_matrix,
    hardware_fidelities,
    hardware_fixtures,
    parse_density_matrix,
)
from backend.tomography.noise import noisy_density
from backend.tomography.reconstruct import (
    exact_expectations,
    expectations_from_tables,
    reconstruct,
    reconstruct_from_expectations,
)
from backend.tomography.settings import PauliSetting, settings_for

__all__ = [
    'CountsTable',
    'NoiseSpec',
    'PauliSetting',
    'density_csv',
    'density_to_payload',
    'exact_expectations',
    'expectations_from_tables',
    'fidelity',
    'load_density_matrix',
    'noisy_density',
    'hardware_fidelities',
    'hardware_fixtures',
    'parse_density_matrix',
    'reconstruct',
    'reconstruct_from_expectations',
    'settings_for',
    'simulate_all',
    'simulate_counts',
]
