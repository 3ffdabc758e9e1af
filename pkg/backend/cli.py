"""
Command-line front end

    python -m backend.cli compile STATE.json
    python -m backend.cli teleport STATE.json [--controlled] [--withhold] [--reverse STATE.json]
    python -m backend.cli verify-table1
    python -m backend.cli experiment [--shots N] [--seed S] [--noise-p P] [--readout-flip F]
    python -m backend.cli tomo [--counts FILE | --density FILE]
    python -m backend.cli fidelity RHO1.json RHO2.json

Machine-readable output goes to stdout (or --out); logs go to stderr.
Exit codes: 0 success, 2 input error, 3 invariant violation,
4 verification failure.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np
from pydantic import TypeAdapter, ValidationError

from backend.agents.experiment_runner import ExperimentRunner
from backend.agents.table_verifier import TableVerifier
from backend.circuits.circuit_io import load_circuit
from backend.circuits.gates import prep_experiment_state
from backend.compiler.plan import build_plan
from backend.compiler.sparse import load_sparse_state
from backend.config import get_settings
from backend.errors import InputError, TeleportError
from backend.protocols.engine import Mode
from backend.protocols.teleport import bidirectional_teleport, controlled_teleport, run_optimal_teleport
from backend.tomography.counts import CountsTable, NoiseSpec, simulate_all
from backend.tomography.fidelity import fidelity
from backend.tomography.fixtures import density_csv, density_to_payload, load_density_matrix
from backend.tomography.reconstruct import reconstruct

logger = logging.getLogger("backend.cli")


def _json_default(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"Cannot serialize {type(value).__name__}")


def render_json(payload) -> str:
    """Deterministic JSON: sorted keys, two-space indent, trailing newline"""
    return json.dumps(payload, sort_keys=True, indent=2, default=_json_default) + "\n"


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
        logger.info("[OK] Wrote %s", out)
    else:
        sys.stdout.write(text)


def _noise(args) -> Optional[NoiseSpec]:
    noise = NoiseSpec(depolarizing_p=args.noise_p, readout_flip=args.readout_flip)
    return None if noise.is_noiseless else noise


def _seed(args) -> int:
    return get_settings().default_seed if args.seed is None else args.seed


def _shots(args) -> int:
    shots = get_settings().default_shots if args.shots is None else args.shots
    if shots <= 0:
        raise InputError(f"--shots must be positive, got {shots}")
    return shots


def _record(kind: str, payload, command: str = "teleport") -> None:
    from backend.database import SessionLocal, init_db
    from backend.models import record_experiment, record_transcript

    init_db()
    db = SessionLocal()
    try:
        record = record_transcript(db, payload, command) if kind == "transcript" else record_experiment(db, payload)
        logger.info("[OK] Recorded run #%d", record.id)
    finally:
        db.close()


# --- Commands ---

def cmd_compile(args) -> int:
    state = load_sparse_state(args.state)
    plan = build_plan(state)
    summary = plan.summary()
    if plan.m_prime == 0:
        summary["notice"] = "state is fully known; no Bell pairs needed"
        logger.info("[OK] m'=0: Bob can rebuild the state from the plan alone")
    if args.dump_unitary:
        summary["unitary"] = {
            "real": plan.unitary.entries.real.tolist(),
            "imag": plan.unitary.entries.imag.tolist(),
        }
    _emit(render_json(summary), args.out)
    return 0


def cmd_teleport(args) -> int:
    mode = Mode(args.mode)
    seed = _seed(args) if mode == Mode.SAMPLED else args.seed
    state = load_sparse_state(args.state)
    if not args.controlled and (args.withhold or args.alice_first):
        raise InputError("--withhold and --alice-first need --controlled")

    if args.reverse:
        run = bidirectional_teleport(
            state,
            load_sparse_state(args.reverse),
            controlled=args.controlled,
            mode=mode,
            seed=seed,
            disclose=not args.withhold,
        )
        transcript = run.transcript
    elif args.controlled:
        run = controlled_teleport(state, mode, disclose=not args.withhold, seed=seed, charlie_first=not args.alice_first)
        transcript = run.transcript
    else:
        transcript = run_optimal_teleport(state, mode, seed).transcript

    if args.record:
        _record("transcript", transcript, command="teleport")
    _emit(render_json(transcript.model_dump(mode="json")), args.out)
    return 0


def cmd_verify_table1(args) -> int:
    fixture_dir = Path(args.fixtures) if args.fixtures else None
    report = TableVerifier(fixture_dir=fixture_dir).verify_all(teleport=not args.no_teleport)
    _emit(render_json(report), args.out)
    for row in report["rows"]:
        logger.info("Row %d: %s %s", row["row"], row["verdict"], row["reason"])
    if not report["all_passed"]:
        logger.error("[ERROR] %d row(s) failed", report["failed"])
        return 4
    return 0


def cmd_experiment(args) -> int:
    prep = load_circuit(args.prep_circuit, n_qubits=2) if args.prep_circuit else None
    runner = ExperimentRunner(prep=prep)
    report = runner.run(
        shots=_shots(args),
        seed=_seed(args),
        noise=_noise(args),
        analytic=args.analytic,
        include_fixtures=args.fixtures,
    )
    if args.record:
        _record("experiment", report)
    _emit(runner.csv() if args.format == "csv" else render_json(report), args.out)
    return 0


def _load_counts(path: str) -> List[CountsTable]:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise InputError(f"Counts file not found: {path}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: not valid JSON ({e.msg})") from None
    if isinstance(payload, dict):
        payload = payload.get("tables", [])
    try:
        return TypeAdapter(List[CountsTable]).validate_python(payload)
    except ValidationError as e:
        raise InputError(f"Invalid counts file: {e.errors()[0]['msg']} at {e.errors()[0]['loc']}") from None


def cmd_tomo(args) -> int:
    """
    Reconstruct from a counts file, or simulate counts first

    Without --counts, counts are sampled from --density (default: the
    prepared two-qubit state of the experiment).
    """
    if args.counts:
        tables = _load_counts(args.counts)
    else:
        rho = load_density_matrix(args.density) if args.density else prep_experiment_state().density()
        tables = simulate_all(rho, _shots(args), _seed(args), _noise(args))

    rho_hat = reconstruct(tables)
    if args.format == "csv":
        _emit(density_csv({"rho_reconstructed": rho_hat}), args.out)
        return 0

    payload = {
        "tables": [t.model_dump() for t in tables],
        "reconstructed": density_to_payload(rho_hat),
        "min_eigenvalue": rho_hat.min_eigenvalue(),
    }
    _emit(render_json(payload), args.out)
    return 0


def cmd_fidelity(args) -> int:
    rho1 = load_density_matrix(args.rho1)
    rho2 = load_density_matrix(args.rho2)
    _emit(render_json({"fidelity": fidelity(rho1, rho2)}), args.out)
    return 0


# --- Parser ---

def _add_sampling(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--shots", type=int, default=None, help="Shots per setting (default TELEPORT_DEFAULT_SHOTS)")
    parser.add_argument("--seed", type=int, default=None, help="RNG seed (default TELEPORT_DEFAULT_SEED)")
    parser.add_argument("--noise-p", type=float, default=0.0, help="Depolarizing probability after each gate")
    parser.add_argument("--readout-flip", type=float, default=0.0, help="Per-bit readout flip probability")


def _add_output(parser: argparse.ArgumentParser, formats=("json",)) -> None:
    parser.add_argument("--out", default=None, help="Write output here instead of stdout")
    parser.add_argument("--format", choices=formats, default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="teleport",
        description="Resource-optimal teleportation compiler and simulator",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("compile", help="Build the compression plan for a sparse state")
    p.add_argument("state", help="SparseState JSON file")
    p.add_argument("--dump-unitary", action="store_true", help="Include the full unitary")
    _add_output(p)
    p.set_defaults(handler=cmd_compile)

    p = commands.add_parser("teleport", help="Run a teleportation protocol and print its transcript")
    p.add_argument("state", help="SparseState JSON file (Alice -> Bob)")
    p.add_argument("--reverse", default=None, metavar="STATE", help="Second state for Bob -> Alice (bidirectional)")
    p.add_argument("--controlled", action="store_true", help="GHZ channel supervised by Charlie")
    p.add_argument("--withhold", action="store_true", help="Charlie keeps his outcomes")
    p.add_argument("--alice-first", action="store_true", help="Alice measures before Charlie")
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.EXHAUSTIVE.value)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--record", action="store_true", help="Store the transcript in the run ledger")
    _add_output(p)
    p.set_defaults(handler=cmd_teleport)

    p = commands.add_parser("verify-table1", help="Check the bundled literature unitaries")
    p.add_argument("--fixtures", default=None, help="Directory holding literature_table.json")
    p.add_argument("--no-teleport", action="store_true", help="Skip the exhaustive run per row")
    _add_output(p)
    p.set_defaults(handler=cmd_verify_table1)

    p = commands.add_parser("experiment", help="Replicate the two-qubit hardware experiment")
    _add_sampling(p)
    p.add_argument("--analytic", action="store_true", help="Use exact expectations instead of sampled counts")
    p.add_argument("--fixtures", action="store_true", help="Include the printed hardware matrices")
    p.add_argument("--prep-circuit", default=None, help="Circuit file replacing the preparation sequence")
    p.add_argument("--record", action="store_true", help="Store the report in the run ledger")
    _add_output(p, formats=("json", "csv"))
    p.set_defaults(handler=cmd_experiment)

    p = commands.add_parser("tomo", help="Pauli-setting tomography")
    source = p.add_mutually_exclusive_group()
    source.add_argument("--counts", default=None, help="Counts JSON (list of tables or {'tables': [...]})")
    source.add_argument("--density", default=None, help="Density matrix JSON to sample from")
    _add_sampling(p)
    _add_output(p, formats=("json", "csv"))
    p.set_defaults(handler=cmd_tomo)

    p = commands.add_parser("fidelity", help="Uhlmann fidelity of two density matrices")
    p.add_argument("rho1")
    p.add_argument("rho2")
    _add_output(p)
    p.set_defaults(handler=cmd_fidelity)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        logging.basicConfig(
            level=get_settings().log_level,
            format="%(levelname)s %(name)s: %(message)s",
            stream=sys.stderr,
        )
        return args.handler(args)
    except TeleportError as e:
        logger.error("[ERROR] %s", e)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
