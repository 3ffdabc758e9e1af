"""
Bundled density matrices of the hardware run, density-matrix files and
bar-chart CSV export
"""

import csv
import io
import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ValidationError

from backend.circuits.gates import prep_experiment_state
from backend.config import get_settings
from backend.errors import InputError
from backend.qcore.state import FIXTURE_PSD_TOL, DensityMatrix
from backend.tomography.fidelity import fidelity

logger = logging.getLogger(__name__)

FIXTURE_FILE = "hardware_density_matrices.json"

PAIRINGS = {
    "theory_vs_prime": ("rho_theory", "rho_prime"),
    "theory_vs_double_prime": ("rho_theory", "rho_double_prime"),
    "prime_vs_double_prime": ("rho_prime", "rho_double_prime"),
}


class DensityMatrixFile(BaseModel):
    real: List[List[float]]
    imag: Optional[List[List[float]]] = None

    def entries(self) -> np.ndarray:
        real = np.array(self.real, dtype=float)
        imag = np.array(self.imag, dtype=float) if self.imag is not None else np.zeros_like(real)
        if real.shape != imag.shape or real.ndim != 2:
            raise InputError(f"real/imag parts must be matching square matrices, got {real.shape} and {imag.shape}")
        return real + 1j * imag


class FixtureFile(BaseModel):
    printed_fidelities: List[float]
    matrices: Dict[str, DensityMatrixFile]


def density_to_payload(rho: DensityMatrix) -> dict:
    return {
        "real": [[float(x) + 0.0 for x in row] for row in rho.entries.real],
        "imag": [[float(x) + 0.0 for x in row] for row in rho.entries.imag],
    }


def parse_density_matrix(payload: dict, psd_tolerance: Optional[float] = FIXTURE_PSD_TOL) -> DensityMatrix:
    try:
        model = DensityMatrixFile.model_validate(payload)
    except ValidationError as e:
        raise InputError(f"Invalid density matrix: {e.errors()[0]['msg']} at {e.errors()[0]['loc']}") from None
    return DensityMatrix(model.entries(), psd_tolerance=psd_tolerance)


def load_density_matrix(path: Union[str, Path]) -> DensityMatrix:
    """Externally supplied matrix; admitted with the fixture PSD slack"""
    path = Path(path)
    if not path.is_file():
        raise InputError(f"Density matrix file not found: {path}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise InputError(f"{path.name}: not valid JSON ({e.msg})") from None
    return parse_density_matrix(payload)


def _load_fixture_file(fixture_dir: Optional[Path]) -> FixtureFile:
    path = Path(fixture_dir or get_settings().fixture_dir) / FIXTURE_FILE
    if not path.is_file():
        raise InputError(f"Fixture file not found: {path}")
    try:
        return FixtureFile.model_validate(json.loads(path.read_text(encoding="utf-8")))
    except (json.JSONDecodeError, ValidationError) as e:
        raise InputError(f"{path.name}: invalid fixture file ({e})") from None


def hardware_fixtures(fixture_dir: Optional[Path] = None) -> Tuple[DensityMatrix, DensityMatrix, DensityMatrix]:
    """
    (rho_theory, rho_prime, rho_double_prime)

    rho_theory is the prepared two-qubit state; the other two are the printed
    reconstructions. Printed entries carry 3-5 digits and are not exactly
    PSD, so they are loaded without the eigenvalue check.
    """
    fixtures = _load_fixture_file(fixture_dir)
    theory = prep_experiment_state().density()

    printed = []
    for name in ("rho_prime", "rho_double_prime"):
        if name not in fixtures.matrices:
            raise InputError(f"Fixture file has no matrix {name!r}")
        rho = DensityMatrix(fixtures.matrices[name].entries(), psd_tolerance=None)
        smallest = rho.min_eigenvalue()
        if smallest < -FIXTURE_PSD_TOL:
            logger.warning("[WARN] %s has eigenvalue %.4f below zero (printed precision)", name, smallest)
        printed.append(rho)

    return theory, printed[0], printed[1]


def hardware_fidelities(fixture_dir: Optional[Path] = None) -> dict:
    """
    Fidelities of all three pairings, next to the printed values

    Each printed value is matched to the pairing that lies closest to it.
    """
    theory, prime, double_prime = hardware_fixtures(fixture_dir)
    matrices = {"rho_theory": theory, "rho_prime": prime, "rho_double_prime": double_prime}
    computed = {name: fidelity(matrices[a], matrices[b]) for name, (a, b) in PAIRINGS.items()}
    printed = _load_fixture_file(fixture_dir).printed_fidelities

    closest = {}
    for value in printed:
        name = min(computed, key=lambda k: abs(computed[k] - value))
        closest[f"{value:.4f}"] = {"pairing": name, "computed": computed[name], "difference": computed[name] - value}

    for name, value in computed.items():
        logger.info("[OK] F(%s) = %.4f", name, value)
    return {"pairings": computed, "printed": printed, "closest": closest}


def bit_label(index: int, n_qubits: int) -> str:
    return format(index, f"0{n_qubits}b")


def density_csv(matrices: Dict[str, DensityMatrix]) -> str:
    """
    One row per entry: matrix,row,col,real,imag

    Row and column are computational-basis labels ("00", "01", ...).
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["matrix", "row", "col", "real", "imag"])
    for name, rho in matrices.items():
        n = rho.n_qubits
        for r in range(rho.dim):
            for c in range(rho.dim):
                value = rho.entries[r, c]
                writer.writerow([name, bit_label(r, n), bit_label(c, n), repr(float(value.real) + 0.0), repr(float(value.imag) + 0.0)])
    return buffer.getvalue()
