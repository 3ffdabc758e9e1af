"""
Teleportation protocols: optimal, controlled and bidirectional
"""

from backend.protocols.channels import CORRECTIONS, BellChannel, GhzChannel
from backend.protocols.engine import Mode
from backend.protocols.teleport import (
    BidirectionalRun,
    ProtocolRun,
    TeleportResult,
    bidirectional_teleport,
    controlled_teleport,
    run_optimal_teleport,
    teleport_compressed,
    z_twirl,
)
from backend.protocols.transcript import BidirectionalTranscript, BranchRecord, ClassicalMessage, Transcript

__all__ = [
    'CORRECTIONS',
    'BellChannel',
    'BidirectionalRun',
    'BidirectionalTranscript',
    'BranchRecord',
    'ClassicalMessage',
    'GhzChannel',
    'Mode',
    'ProtocolRun',
    'TeleportResult',
    'Transcript',
    'bidirectional_teleport',
    'controlled_teleport',
    'run_optimal_teleport',
    'teleport_compressed',
    'z_twirl',
]
