"""
Verification of hand-written compression unitaries (the literature table)

A claimed unitary is written as U = sum_t |t><bra_t| where each bra is a
small signed combination of computational basis vectors. Bras are
normalized before the unitarity check; whether they were already
normalized as printed is reported separately.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError

from backend.compiler.plan import SUPPORT_TOL, needed_qubits, support_leak
from backend.compiler.sparse import SparseState, SparseStateFile, count_unknowns
from backend.errors import InputError
from backend.qcore.state import UNITARY_TOL, unitarity_deviation

logger = logging.getLogger(__name__)

TABLE_FILE = "literature_table.json"


@dataclass(frozen=True)
class Image:
    """|target><bra| with bra = prefactor * sum_s c_s <s|"""

    target: int
    bra: Tuple[Tuple[int, complex], ...]


@dataclass(frozen=True)
class ClaimedUnitary:
    dim: int
    images: Tuple[Image, ...]
    prefactor: float = 1.0

    @property
    def is_permutation(self) -> bool:
        return all(len(image.bra) == 1 for image in self.images)

    def check_bijective(self):
        """Every target exactly once; a permutation also uses every source once"""
        targets = [image.target for image in self.images]
        for target in targets:
            if not 0 <= target < self.dim:
                raise InputError(f"non-bijective: target {target} outside 0..{self.dim - 1}")
        if sorted(targets) != list(range(self.dim)):
            duplicated = sorted({t for t in targets if targets.count(t) > 1})
            raise InputError(f"non-bijective: targets {duplicated or 'missing'} do not cover the basis once")

        for image in self.images:
            if not image.bra:
                raise InputError(f"non-bijective: empty bra for target {image.target}")
            for source, _ in image.bra:
                if not 0 <= source < self.dim:
                    raise InputError(f"non-bijective: source {source} outside 0..{self.dim - 1}")

        if self.is_permutation:
            sources = [image.bra[0][0] for image in self.images]
            if len(set(sources)) != len(sources):
                raise InputError("non-bijective: a source basis vector is used twice")

    def matrices(self) -> Tuple[np.ndarray, np.ndarray]:
        """(matrix as printed, matrix with every bra normalized)"""
        printed = np.zeros((self.dim, self.dim), dtype=complex)
        for image in self.images:
            for source, coefficient in image.bra:
                printed[image.target, source] += self.prefactor * coefficient

        norms = np.linalg.norm(printed, axis=1, keepdims=True)
        if np.any(norms == 0):
            raise InputError("non-bijective: a bra cancels to zero")
        return printed, printed / norms


@dataclass(frozen=True)
class VerificationReport:
    unitary: bool
    unitarity_deviation: float
    normalized_as_printed: bool
    compresses: bool
    leak: float
    m: int
    bell_pairs: int
    support_qubits: int
    claimed_bell_pairs: Optional[int]
    count_matches: bool

    @property
    def passed(self) -> bool:
        return self.unitary and self.compresses and self.count_matches

    def as_dict(self) -> dict:
        return {
            "unitary": self.unitary,
            "unitarity_deviation": self.unitarity_deviation,
            "normalized_as_printed": self.normalized_as_printed,
            "compresses": self.compresses,
            "leak": self.leak,
            "m": self.m,
            "bell_pairs": self.bell_pairs,
            "support_qubits": self.support_qubits,
            "claimed_bell_pairs": self.claimed_bell_pairs,
            "count_matches": self.count_matches,
            "passed": self.passed,
        }


def verify_claimed_unitary(
    state: SparseState,
    claimed: ClaimedUnitary,
    claimed_bell_pairs: Optional[int] = None,
) -> VerificationReport:
    """
    Check a claimed compression unitary against a state

    Raises:
        InputError: the claimed image set is not a bijection on the basis
    """
    if claimed.dim != state.dim:
        raise InputError(f"Claimed unitary acts on dimension {claimed.dim}, state has {state.dim}")
    claimed.check_bijective()

    printed, normalized = claimed.matrices()
    deviation = unitarity_deviation(normalized)
    as_printed = unitarity_deviation(printed) <= UNITARY_TOL

    m, m_prime = count_unknowns(state)
    image = normalized @ state.dense().amplitudes
    leak = support_leak(image, 1 << m_prime)

    report = VerificationReport(
        unitary=deviation <= UNITARY_TOL,
        unitarity_deviation=deviation,
        normalized_as_printed=as_printed,
        compresses=leak <= SUPPORT_TOL,
        leak=leak,
        m=m,
        bell_pairs=m_prime,
        support_qubits=needed_qubits(image),
        claimed_bell_pairs=claimed_bell_pairs,
        count_matches=claimed_bell_pairs is None or claimed_bell_pairs == m_prime,
    )
    return report


# --- Bundled table rows ---

class ImageModel(BaseModel):
    target: int
    bra: List[Tuple[int, float]] = Field(min_length=1)


class TableRow(BaseModel):
    row: int
    state_label: str
    n_qubits: int
    channel: str
    bell_pairs: int
    prefactor: float = 1.0
    state: SparseStateFile
    unitary: List[ImageModel]

    def sparse_state(self) -> SparseState:
        return self.state.to_state()

    def claimed_unitary(self) -> ClaimedUnitary:
        images = tuple(
            Image(image.target, tuple((source, complex(coefficient)) for source, coefficient in image.bra))
            for image in self.unitary
        )
        return ClaimedUnitary(dim=1 << self.n_qubits, images=images, prefactor=self.prefactor)


def parse_table_rows(payload: Union[list, Dict]) -> List[TableRow]:
    rows = payload.get("rows", []) if isinstance(payload, dict) else payload
    try:
        return [TableRow.model_validate(row) for row in rows]
    except ValidationError as e:
        raise InputError(f"Invalid table row: {e.errors()[0]['msg']} at {e.errors()[0]['loc']}") from None


def load_table_rows(fixture_dir: Path) -> List[TableRow]:
    path = Path(fixture_dir) / TABLE_FILE
    if not path.is_file():
        raise InputError(f"Table data not found: {path}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise InputError(f"{path.name}: not valid JSON ({e.msg})") from None

    rows = parse_table_rows(payload)
    logger.info("[OK] Loaded %d table rows from %s", len(rows), path)
    return rows
