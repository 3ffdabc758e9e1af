"""
Shared fixtures: fixed-seed generators, random states, a throwaway ledger
"""

import os
import sys
import tempfile

import numpy as np
import pytest
import scipy.stats

# Add project root to path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

# Ledger must point at a scratch database before backend.database is imported
_LEDGER_DIR = tempfile.mkdtemp(prefix="teleport-tests-")
os.environ["TELEPORT_DATABASE_URL"] = f"sqlite:///{os.path.join(_LEDGER_DIR, 'runs.db')}"
os.environ.pop("TELEPORT_FIXTURE_DIR", None)

from backend.compiler.sparse import SparseState, Term  # noqa: E402
from backend.qcore.state import StateVector  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_state(rng, n_qubits: int) -> StateVector:
    """Haar-random pure state"""
    amplitudes = rng.normal(size=1 << n_qubits) + 1j * rng.normal(size=1 << n_qubits)
    return StateVector.normalized(amplitudes)


def random_unitary(dim: int, seed: int) -> np.ndarray:
    return scipy.stats.unitary_group.rvs(dim, random_state=seed)


def random_density(rng, n_qubits: int, rank: int = 2) -> np.ndarray:
    dim = 1 << n_qubits
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_sparse_state(rng, n_qubits: int, m: int, dense_terms: bool = False) -> SparseState:
    """m random amplitudes on basis indices, or on the first m columns of a random unitary"""
    dim = 1 << n_qubits
    amplitudes = rng.normal(size=m) + 1j * rng.normal(size=m)
    amplitudes = amplitudes / np.linalg.norm(amplitudes)
    if dense_terms:
        basis = random_unitary(dim, int(rng.integers(1 << 30)))
        terms = [Term(complex(a), basis[:, i]) for i, a in enumerate(amplitudes)]
    else:
        indices = rng.choice(dim, size=m, replace=False)
        terms = [Term(complex(a), int(i)) for a, i in zip(amplitudes, indices)]
    return SparseState(n_qubits, tuple(terms))
