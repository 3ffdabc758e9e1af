"""
Serializable protocol transcripts
"""

from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class ClassicalMessage(BaseModel):
    step: str
    sender: str
    receiver: str
    n_bits: int
    delivered: bool = True
    bits: Optional[str] = None  # only known in sampled mode


class BranchRecord(BaseModel):
    outcomes: Dict[str, str]
    probability: float
    fidelity: float


class Transcript(BaseModel):
    protocol: str
    mode: str
    seed: Optional[int] = None
    n_qubits: int
    m: int
    m_prime: int
    ebits: int
    classical_bits: int
    withheld_bits: int = 0
    outcomes: List[str] = Field(default_factory=list)
    fidelity: float
    averaged_fidelity: Optional[float] = None
    branch_count: int
    branches: List[BranchRecord] = Field(default_factory=list)
    messages: List[ClassicalMessage] = Field(default_factory=list)
    disclose: Optional[bool] = None
    charlie_first: Optional[bool] = None


class BidirectionalTranscript(BaseModel):
    protocol: str
    mode: str
    seed: Optional[int] = None
    ebits: int
    classical_bits: int
    withheld_bits: int = 0
    a_to_b: Transcript
    b_to_a: Transcript
