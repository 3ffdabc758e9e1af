"""
Shot simulation: per-setting counts with optional readout flips
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from backend.errors import InputError
from backend.qcore.measurement import Basis, basis_vectors
from backend.qcore.state import DensityMatrix
from backend.tomography.settings import PauliSetting, settings_for

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NoiseSpec:
    """
    Args:
        depolarizing_p: single-qubit depolarizing probability after every gate
        readout_flip: probability each measured bit is flipped
    """

    depolarizing_p: float = 0.0
    readout_flip: float = 0.0

    def __post_init__(self):
        for name in ("depolarizing_p", "readout_flip"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise InputError(f"{name} must lie in [0, 1], got {value}")

    @property
    def is_noiseless(self) -> bool:
        return self.depolarizing_p == 0.0 and self.readout_flip == 0.0


class CountsTable(BaseModel):
    setting: str
    shots: int = Field(gt=0)
    counts: Dict[str, int]

    @model_validator(mode="after")
    def _check_counts(self):
        try:
            PauliSetting(self.setting)
        except InputError as e:
            raise ValueError(str(e)) from None
        width = len(self.setting)
        for bits, count in self.counts.items():
            if len(bits) != width or set(bits) - set("01"):
                raise ValueError(f"outcome {bits!r} is not a {width}-bit string")
            if count < 0:
                raise ValueError(f"negative count for {bits}")
        if sum(self.counts.values()) != self.shots:
            raise ValueError(f"counts sum to {sum(self.counts.values())}, expected {self.shots}")
        return self

    def frequency(self, bits: str) -> float:
        return self.counts.get(bits, 0) / self.shots


def outcome_probabilities(rho: DensityMatrix, setting: PauliSetting) -> np.ndarray:
    """Born probabilities in the setting's eigenbasis, bit 0 = +1 eigenvalue"""
    if setting.n_qubits != rho.n_qubits:
        raise InputError(f"Setting {setting} has {setting.n_qubits} letters, state has {rho.n_qubits} qubits")
    vectors = basis_vectors(Basis.PAULI, setting.n_qubits, setting.letters)
    probabilities = np.array([np.vdot(v, rho.entries @ v).real for _, v in vectors])
    probabilities = np.clip(probabilities, 0.0, None)
    return probabilities / probabilities.sum()


def simulate_counts(
    rho: DensityMatrix,
    setting: PauliSetting,
    shots: int,
    seed=None,
    noise: Optional[NoiseSpec] = None,
) -> CountsTable:
    """
    Sample shots in one setting

    Returns:
        CountsTable with only the observed outcomes listed
    """
    if shots <= 0:
        raise InputError(f"shots must be positive, got {shots}")
    setting = setting if isinstance(setting, PauliSetting) else PauliSetting(setting)
    n = setting.n_qubits

    rng = np.random.default_rng(seed)
    samples = rng.choice(1 << n, size=shots, p=outcome_probabilities(rho, setting))

    if noise is not None and noise.readout_flip > 0:
        flips = rng.random((shots, n)) < noise.readout_flip
        weights = 1 << np.arange(n - 1, -1, -1)
        samples = samples ^ (flips.astype(np.int64) @ weights)

    tallies = np.bincount(samples, minlength=1 << n)
    counts = {format(i, f"0{n}b"): int(c) for i, c in enumerate(tallies) if c}
    return CountsTable(setting=setting.letters, shots=shots, counts=counts)


def simulate_all(
    rho: DensityMatrix,
    shots: int,
    seed=None,
    noise: Optional[NoiseSpec] = None,
    stream: Optional[int] = None,
) -> List[CountsTable]:
    """
    Every setting, each with its own generator

    Generators are derived from (seed, setting index), or from
    (seed, stream, setting index) when several states share one seed.
    """
    prefix = [seed] if stream is None else [seed, stream]
    tables = []
    for index, setting in enumerate(settings_for(rho.n_qubits)):
        child = np.random.SeedSequence(prefix + [index]) if seed is not None else None
        tables.append(simulate_counts(rho, setting, shots, child, noise))
    logger.debug("[OK] Simulated %d settings x %d shots", len(tables), shots)
    return tables
