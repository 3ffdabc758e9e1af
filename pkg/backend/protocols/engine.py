"""
Measurement engine over labelled qubits

Each measured qubit disappears from the state, so the register shrinks as
the protocol proceeds. Exhaustive runs fan out over every outcome and
return paths sorted by their outcome tuple.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from backend.circuits.gates import Circuit, Gate, GateKind, apply
from backend.errors import InputError
from backend.qcore.measurement import Basis, branch_all_outcomes
from backend.qcore.state import StateVector, tensor

logger = logging.getLogger(__name__)


class Mode(str, Enum):
    SAMPLED = "sampled"
    EXHAUSTIVE = "exhaustive"


@dataclass(frozen=True, eq=False)
class LabelledState:
    state: StateVector
    labels: Tuple[str, ...]

    def __post_init__(self):
        if len(self.labels) != self.state.n_qubits:
            raise InputError(f"{len(self.labels)} labels for {self.state.n_qubits} qubits")

    def positions(self, labels: Sequence[str]) -> List[int]:
        try:
            return [self.labels.index(label) for label in labels]
        except ValueError:
            raise InputError(f"Unknown qubit label in {list(labels)}; have {list(self.labels)}") from None

    def joined(self, other_state: StateVector, other_labels: Sequence[str]) -> "LabelledState":
        return LabelledState(tensor(self.state, other_state), self.labels + tuple(other_labels))

    def with_gates(self, kinds_by_label: Sequence[Tuple[str, Sequence[GateKind]]]) -> "LabelledState":
        gates = [Gate(kind, (self.labels.index(label),)) for label, kinds in kinds_by_label for kind in kinds]
        if not gates:
            return self
        return LabelledState(apply(Circuit(self.state.n_qubits, tuple(gates)), self.state), self.labels)


@dataclass(frozen=True)
class MeasurementStep:
    name: str
    party: str
    labels: Tuple[str, ...]
    basis: Basis


@dataclass(frozen=True, eq=False)
class Path:
    outcomes: Tuple[Tuple[str, str], ...]
    probability: float
    state: LabelledState

    def outcome(self, step_name: str) -> str:
        return dict(self.outcomes)[step_name]


def _expand(path: Path, step: MeasurementStep, rng: Optional[np.random.Generator]) -> List[Path]:
    current = path.state
    branches = branch_all_outcomes(current.state, current.positions(step.labels), step.basis)
    remaining = tuple(label for label in current.labels if label not in step.labels)

    if rng is not None:
        weights = np.array([b.probability for b in branches])
        branches = [branches[int(rng.choice(len(branches), p=weights / weights.sum()))]]

    return [
        Path(
            outcomes=path.outcomes + ((step.name, branch.outcome),),
            probability=path.probability * branch.probability,
            state=LabelledState(branch.remainder, remaining),
        )
        for branch in branches
    ]


def run_steps(
    initial: LabelledState,
    steps: Sequence[MeasurementStep],
    mode: Mode,
    seed=None,
) -> List[Path]:
    """
    Apply measurement steps in order

    Args:
        initial: joint state of every party
        steps: measurements, each removing its qubits
        mode: sampled draws one outcome per step from a generator seeded once;
            exhaustive keeps every non-zero branch
        seed: seed for sampled mode

    Returns:
        list of paths, sorted by outcome tuple
    """
    mode = Mode(mode)
    rng = np.random.default_rng(seed) if mode == Mode.SAMPLED else None

    paths = [Path((), 1.0, initial)]
    for step in steps:
        paths = [child for path in paths for child in _expand(path, step, rng)]

    paths.sort(key=lambda p: p.outcomes)
    logger.debug("[OK] %d measurement step(s), %d path(s)", len(steps), len(paths))
    return paths
