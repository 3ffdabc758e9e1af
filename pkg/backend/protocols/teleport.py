"""
Teleportation protocols over compressed registers

    optimal        compress, teleport m' qubits over m' Bell pairs, rebuild
    controlled     the same over GHZ triplets; Charlie's +/- outcome decides
                   whether Bob needs an extra Z
    bidirectional  two independent optimal (or controlled) runs, one each way
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np

from backend.circuits.gates import GateKind
from backend.compiler.plan import CompressionPlan, build_plan, compress, decompress
from backend.compiler.sparse import SparseState
from backend.errors import InputError, InvariantViolation, VerificationFailure
from backend.protocols.channels import CORRECTIONS, BellChannel, GhzChannel, bob_labels
from backend.protocols.engine import LabelledState, MeasurementStep, Mode, run_steps
from backend.protocols.transcript import BidirectionalTranscript, BranchRecord, ClassicalMessage, Transcript
from backend.qcore.measurement import Basis
from backend.qcore.state import DensityMatrix, StateVector, overlap_fidelity

logger = logging.getLogger(__name__)

FIDELITY_TOL = 1e-10

Channel = Union[BellChannel, GhzChannel]


@dataclass(frozen=True, eq=False)
class TeleportBranch:
    outcomes: Tuple[Tuple[str, str], ...]
    probability: float
    state: StateVector
    fidelity: float


@dataclass(frozen=True, eq=False)
class TeleportResult:
    mode: Mode
    m_prime: int
    branches: Tuple[TeleportBranch, ...]
    steps: Tuple[MeasurementStep, ...]

    @property
    def outcomes(self) -> Tuple[Tuple[str, str], ...]:
        return self.branches[0].outcomes

    @property
    def bob_state(self) -> StateVector:
        return self.branches[0].state

    def mixture(self) -> DensityMatrix:
        """Probability-weighted mixture of Bob's branch states"""
        total = sum(b.probability for b in self.branches)
        entries = sum(b.probability * np.outer(b.state.amplitudes, b.state.amplitudes.conj()) for b in self.branches)
        return DensityMatrix(entries / total)


def z_twirl(rho: DensityMatrix) -> DensityMatrix:
    """(1/2^k) sum_c Z^c rho Z^c over every qubit subset c"""
    entries = np.array(rho.entries)
    indices = np.arange(rho.dim)
    for qubit in range(rho.n_qubits):
        signs = 1 - 2 * ((indices >> (rho.n_qubits - 1 - qubit)) & 1)
        entries = (entries + np.outer(signs, signs) * entries) / 2
    return DensityMatrix(entries)


def _teleport(
    phi: StateVector,
    channel: Channel,
    mode: Mode,
    seed=None,
    disclose: bool = True,
    charlie_first: bool = True,
) -> TeleportResult:
    k = phi.n_qubits
    if channel.pairs != k:
        raise InputError(f"Channel has {channel.pairs} pair(s), register has {k} qubit(s)")

    phi_labels = tuple(f"P{i}" for i in range(1, k + 1))
    initial = LabelledState(phi, phi_labels).joined(channel.state, channel.labels)

    alice_steps = [MeasurementStep(f"A{i}", "sender", (f"P{i}", f"A{i}"), Basis.BELL) for i in range(1, k + 1)]
    charlie_steps = []
    if isinstance(channel, GhzChannel):
        charlie_steps = [MeasurementStep(f"C{i}", "Charlie", (f"C{i}",), Basis.PLUS_MINUS) for i in range(1, k + 1)]
    steps = charlie_steps + alice_steps if charlie_first else alice_steps + charlie_steps

    branches = []
    for path in run_steps(initial, steps, mode, seed):
        fixes = []
        for i in range(1, k + 1):
            kinds = list(CORRECTIONS[path.outcome(f"A{i}")])
            if charlie_steps and disclose and path.outcome(f"C{i}") == "1":
                kinds.insert(0, GateKind.Z)
            fixes.append((f"B{i}", kinds))

        final = path.state.with_gates(fixes)
        if list(final.labels) != bob_labels(k):
            raise InvariantViolation(f"Unmeasured qubits {final.labels} are not Bob's register")
        branches.append(TeleportBranch(path.outcomes, path.probability, final.state, overlap_fidelity(phi, final.state)))

    return TeleportResult(Mode(mode), k, tuple(branches), tuple(steps))


def teleport_compressed(
    phi: StateVector,
    channel: BellChannel,
    mode: Mode = Mode.EXHAUSTIVE,
    seed=None,
) -> TeleportResult:
    """
    Teleport an m'-qubit register over m' Bell pairs

    Alice Bell-measures each register qubit with her half of a pair and Bob
    applies the Pauli correction for each 2-bit outcome.
    """
    return _teleport(phi, channel, mode, seed)


@dataclass(frozen=True, eq=False)
class ProtocolRun:
    transcript: Transcript
    plan: CompressionPlan
    result: TeleportResult
    final_states: Tuple[StateVector, ...]
    bob_average: DensityMatrix


def _messages(result: TeleportResult, sender: str, receiver: str, disclose: bool) -> List[ClassicalMessage]:
    sampled = result.mode == Mode.SAMPLED
    outcomes = dict(result.outcomes) if sampled else {}
    messages = []
    for step in result.steps:
        from_charlie = step.party == "Charlie"
        messages.append(
            ClassicalMessage(
                step=step.name,
                sender="Charlie" if from_charlie else sender,
                receiver=receiver,
                n_bits=1 if from_charlie else 2,
                delivered=disclose or not from_charlie,
                bits=outcomes.get(step.name),
            )
        )
    return messages


def _finish(
    protocol: str,
    state: SparseState,
    plan: CompressionPlan,
    phi: StateVector,
    result: TeleportResult,
    seed,
    controlled: bool,
    disclose: bool,
    charlie_first: Optional[bool],
    sender: str = "Alice",
    receiver: str = "Bob",
) -> ProtocolRun:
    target = state.dense()
    final_states = tuple(decompress(branch.state, plan) for branch in result.branches)
    fidelities = [overlap_fidelity(target, final) for final in final_states]

    bob_average = result.mixture()
    if controlled and not disclose:
        bob_average = z_twirl(bob_average)
    averaged = float(np.vdot(phi.amplitudes, bob_average.entries @ phi.amplitudes).real)

    k = plan.m_prime
    delivered = 2 * k + (k if controlled and disclose else 0)
    messages = _messages(result, sender, receiver, disclose)

    transcript = Transcript(
        protocol=protocol,
        mode=result.mode.value,
        seed=seed if isinstance(seed, int) else None,
        n_qubits=plan.n_qubits,
        m=plan.m,
        m_prime=k,
        ebits=k,
        classical_bits=delivered,
        withheld_bits=k if controlled and not disclose else 0,
        outcomes=[f"{name}:{bits}" for name, bits in result.outcomes] if result.mode == Mode.SAMPLED else [],
        fidelity=min(fidelities),
        averaged_fidelity=float(np.sqrt(min(max(averaged, 0.0), 1.0))),
        branch_count=len(result.branches),
        branches=[
            BranchRecord(outcomes=dict(branch.outcomes), probability=branch.probability, fidelity=fidelity)
            for branch, fidelity in zip(result.branches, fidelities)
        ],
        messages=messages,
        disclose=disclose if controlled else None,
        charlie_first=charlie_first if controlled else None,
    )

    if disclose and transcript.fidelity < 1 - FIDELITY_TOL:
        logger.error("[ERROR] %s teleport lost fidelity: %.12f", protocol, transcript.fidelity)
        raise VerificationFailure(f"{protocol} teleport reached fidelity {transcript.fidelity:.12f}, expected 1")

    logger.info(
        "[OK] %s teleport: m=%d m'=%d, %d branch(es), min fidelity %.12f",
        protocol, plan.m, k, len(result.branches), transcript.fidelity,
    )
    return ProtocolRun(transcript, plan, result, final_states, bob_average)


def run_optimal_teleport(state: SparseState, mode: Mode = Mode.EXHAUSTIVE, seed=None) -> ProtocolRun:
    """
    Compile, compress, teleport the m'-qubit register and rebuild on Bob's side

    Bob pads |0>^(n-m') in front of the register and applies U^dagger.
    Fully known states (m=1) need no channel; Bob rebuilds from the plan.
    """
    plan = build_plan(state)
    phi = compress(state, plan).register()
    result = _teleport(phi, BellChannel.create(plan.m_prime), mode, seed)
    return _finish("optimal", state, plan, phi, result, seed, controlled=False, disclose=True, charlie_first=None)


def controlled_teleport(
    state: SparseState,
    mode: Mode = Mode.EXHAUSTIVE,
    disclose: bool = True,
    seed=None,
    charlie_first: bool = True,
) -> ProtocolRun:
    """
    Teleportation supervised by Charlie

    Charlie holds the third qubit of each GHZ triplet and measures it in the
    {|+>, |->} basis. Without his bits Bob's best description of the
    register is the Z-twirl of the input.

    Args:
        disclose: whether Charlie announces his outcomes
        charlie_first: measurement order; results do not depend on it
    """
    plan = build_plan(state)
    phi = compress(state, plan).register()
    result = _teleport(phi, GhzChannel.create(plan.m_prime), mode, seed, disclose, charlie_first)
    return _finish("controlled", state, plan, phi, result, seed, True, disclose, charlie_first)


@dataclass(frozen=True, eq=False)
class BidirectionalRun:
    transcript: BidirectionalTranscript
    a_to_b: ProtocolRun
    b_to_a: ProtocolRun


def bidirectional_teleport(
    state_a2b: SparseState,
    state_b2a: SparseState,
    controlled: bool = False,
    mode: Mode = Mode.EXHAUSTIVE,
    seed=None,
    disclose: bool = True,
) -> BidirectionalRun:
    """
    Alice -> Bob and Bob -> Alice over disjoint channels

    The two directions use independent generators spawned from one seed.
    """
    seeds = np.random.SeedSequence(seed).spawn(2) if seed is not None else [None, None]
    runs = []
    for (state, sender, receiver), child_seed in zip(((state_a2b, "Alice", "Bob"), (state_b2a, "Bob", "Alice")), seeds):
        plan = build_plan(state)
        phi = compress(state, plan).register()
        channel = GhzChannel.create(plan.m_prime) if controlled else BellChannel.create(plan.m_prime)
        result = _teleport(phi, channel, mode, child_seed, disclose)
        protocol = "bidirectional-controlled" if controlled else "bidirectional"
        runs.append(_finish(protocol, state, plan, phi, result, seed, controlled, disclose or not controlled,
                            True if controlled else None, sender, receiver))

    a_to_b, b_to_a = runs
    transcript = BidirectionalTranscript(
        protocol="bidirectional-controlled" if controlled else "bidirectional",
        mode=Mode(mode).value,
        seed=seed,
        ebits=a_to_b.transcript.ebits + b_to_a.transcript.ebits,
        classical_bits=a_to_b.transcript.classical_bits + b_to_a.transcript.classical_bits,
        withheld_bits=a_to_b.transcript.withheld_bits + b_to_a.transcript.withheld_bits,
        a_to_b=a_to_b.transcript,
        b_to_a=b_to_a.transcript,
    )
    return BidirectionalRun(transcript, a_to_b, b_to_a)
