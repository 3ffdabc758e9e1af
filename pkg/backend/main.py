import logging
import os
import sys
from typing import Optional

from dotenv import load_dotenv
from fastapi import Depends, FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field
from sqlalchemy.orm import Session

load_dotenv()

# Ensure project root is in path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

# Local imports (must be after sys.path hack)
from backend.agents.experiment_runner import ExperimentRunner  # noqa: E402
from backend.agents.table_verifier import TableVerifier  # noqa: E402
from backend.compiler.plan import build_plan  # noqa: E402
from backend.compiler.sparse import SparseStateFile  # noqa: E402
from backend.config import get_settings  # noqa: E402
from backend.database import get_db, init_db  # noqa: E402
from backend.errors import InputError, TeleportError  # noqa: E402
from backend.models import list_runs, record_experiment, record_transcript  # noqa: E402
from backend.protocols.engine import Mode  # noqa: E402
from backend.protocols.teleport import bidirectional_teleport, controlled_teleport, run_optimal_teleport  # noqa: E402
from backend.tomography.counts import NoiseSpec  # noqa: E402
from backend.tomography.fidelity import fidelity  # noqa: E402
from backend.tomography.fixtures import DensityMatrixFile, parse_density_matrix  # noqa: E402

logger = logging.getLogger(__name__)

VERSION = "0.2.0"

# Create ledger tables
init_db()

app = FastAPI(
    title="Optimal Teleportation API",
    description="Compile sparse states into resource-optimal teleportation plans and simulate the protocols",
    version=VERSION,
)

# CORS Configuration
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


# Domain errors carry their own status code
@app.exception_handler(TeleportError)
async def teleport_exception_handler(request: Request, exc: TeleportError):
    logger.warning("[WARN] %s on %s: %s", type(exc).__name__, request.url.path, exc)
    return JSONResponse(
        status_code=exc.http_status,
        content={"detail": str(exc), "error": type(exc).__name__},
    )


# Global Exception Handler
@app.exception_handler(Exception)
async def global_exception_handler(request: Request, exc: Exception):
    logger.error("[ERROR] Unhandled exception on %s: %s", request.url.path, exc)
    return JSONResponse(
        status_code=500,
        content={"detail": f"Internal Server Error: {str(exc)}"},
    )


# --- Pydantic Models ---

class TeleportRequest(BaseModel):
    state: SparseStateFile
    reverse: Optional[SparseStateFile] = None
    mode: Mode = Mode.EXHAUSTIVE
    seed: Optional[int] = None
    controlled: bool = False
    disclose: bool = True
    charlie_first: bool = True


class ExperimentRequest(BaseModel):
    shots: Optional[int] = Field(default=None, gt=0)
    seed: Optional[int] = None
    depolarizing_p: float = Field(default=0.0, ge=0.0, le=1.0)
    readout_flip: float = Field(default=0.0, ge=0.0, le=1.0)
    analytic: bool = False
    include_fixtures: bool = False


class FidelityRequest(BaseModel):
    rho1: DensityMatrixFile
    rho2: DensityMatrixFile


# --- Endpoints ---

@app.get("/health")
def health_check():
    return {
        "status": "healthy",
        "version": VERSION,
    }


@app.post("/api/v1/compile")
def compile_state(request: SparseStateFile):
    """
    Compression plan for a sparse state
    """
    plan = build_plan(request.to_state())
    return plan.summary()


@app.post("/api/v1/teleport")
def teleport(request: TeleportRequest, db: Session = Depends(get_db)):  # noqa: B008
    """
    Run the optimal, controlled or bidirectional protocol and store the transcript
    """
    state = request.state.to_state()
    if not request.controlled and not request.disclose:
        raise InputError("disclose=false needs controlled=true")

    # sampled runs without a seed use the configured default
    seed = request.seed
    if seed is None and request.mode == Mode.SAMPLED:
        seed = get_settings().default_seed

    if request.reverse is not None:
        transcript = bidirectional_teleport(
            state,
            request.reverse.to_state(),
            controlled=request.controlled,
            mode=request.mode,
            seed=seed,
            disclose=request.disclose,
        ).transcript
    elif request.controlled:
        transcript = controlled_teleport(
            state, request.mode, disclose=request.disclose, seed=seed, charlie_first=request.charlie_first
        ).transcript
    else:
        transcript = run_optimal_teleport(state, request.mode, seed).transcript

    record = record_transcript(db, transcript, command="api-teleport")
    payload = transcript.model_dump(mode="json")
    payload["run_id"] = record.id
    return payload


@app.get("/api/v1/verify-table1")
def verify_table1(teleport: bool = True):
    """
    Per-row verdicts for the bundled literature unitaries
    """
    return TableVerifier().verify_all(teleport=teleport)


@app.post("/api/v1/experiment")
def experiment(request: ExperimentRequest, db: Session = Depends(get_db)):  # noqa: B008
    """
    Simulated replication of the two-qubit experiment
    """
    noise = NoiseSpec(depolarizing_p=request.depolarizing_p, readout_flip=request.readout_flip)
    report = ExperimentRunner().run(
        shots=request.shots,
        seed=request.seed,
        noise=None if noise.is_noiseless else noise,
        analytic=request.analytic,
        include_fixtures=request.include_fixtures,
    )
    record = record_experiment(db, report)
    report["run_id"] = record.id
    return report


@app.post("/api/v1/fidelity")
def fidelity_endpoint(request: FidelityRequest):
    rho1 = parse_density_matrix(request.rho1.model_dump())
    rho2 = parse_density_matrix(request.rho2.model_dump())
    return {"fidelity": fidelity(rho1, rho2)}


@app.get("/api/v1/runs")
def get_runs(limit: int = 20, db: Session = Depends(get_db)):  # noqa: B008
    """
    Recent ledger entries, newest first
    """
    return list_runs(db, limit=limit)


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(app, host="0.0.0.0", port=8000)
