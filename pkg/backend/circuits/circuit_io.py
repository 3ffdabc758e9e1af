"""
Line-oriented circuit text format

    QUBITS 4        optional header, must precede the gates
    H 0
    CNOT 1 2        control first
    TDG 0           S† / T† are accepted as SDG / TDG
    # comment
"""

import logging
from pathlib import Path
from typing import List, Optional, Union

from backend.circuits.gates import Circuit, Gate, GateKind
from backend.errors import InputError

logger = logging.getLogger(__name__)


def parse_circuit(text: str, n_qubits: Optional[int] = None) -> Circuit:
    """
    Parse the text format

    Args:
        text: circuit source
        n_qubits: register width when the text has no QUBITS header;
            otherwise the width is 1 + the largest index used

    Returns:
        Circuit
    """
    gates: List[Gate] = []
    declared: Optional[int] = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        head = fields[0].upper()

        if head == "QUBITS":
            if gates or declared is not None or len(fields) != 2:
                raise InputError(f"line {line_no}: QUBITS header must come once, before any gate")
            declared = _as_index(fields[1], line_no)
            continue

        kind = GateKind.parse(head)
        try:
            gates.append(Gate(kind, tuple(_as_index(f, line_no) for f in fields[1:])))
        except InputError as e:
            raise InputError(f"line {line_no}: {e}") from None

    width = declared or n_qubits
    if width is None:
        if not gates:
            raise InputError("Empty circuit without a QUBITS header")
        width = 1 + max(max(g.targets) for g in gates)
    return Circuit(width, tuple(gates))


def _as_index(token: str, line_no: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise InputError(f"line {line_no}: expected an integer, got {token!r}") from None


def format_circuit(circuit: Circuit) -> str:
    lines = [f"QUBITS {circuit.n_qubits}"] + [str(g) for g in circuit.gates]
    return "\n".join(lines) + "\n"


def load_circuit(path: Union[str, Path], n_qubits: Optional[int] = None) -> Circuit:
    path = Path(path)
    if not path.is_file():
        raise InputError(f"Circuit file not found: {path}")
    circuit = parse_circuit(path.read_text(encoding="utf-8"), n_qubits)
    logger.info("[OK] Loaded circuit %s (%d qubits, %d gates)", path.name, circuit.n_qubits, len(circuit))
    return circuit
