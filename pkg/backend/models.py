from datetime import datetime
from typing import List, Optional

from sqlalchemy import JSON, Column, DateTime, Float, Integer, String
from sqlalchemy.orm import Session

from backend.database import Base
from backend.protocols.transcript import BidirectionalTranscript, Transcript


class TranscriptRecord(Base):
    __tablename__ = "transcripts"

    id = Column(Integer, primary_key=True, index=True)
    created_at = Column(DateTime, default=datetime.utcnow)
    command = Column(String, index=True)  # e.g. "teleport", "controlled"
    protocol = Column(String)
    mode = Column(String)
    seed = Column(Integer, nullable=True)
    m = Column(Integer)
    m_prime = Column(Integer)
    ebits = Column(Integer)
    classical_bits = Column(Integer)
    branch_count = Column(Integer)
    min_fidelity = Column(Float)
    payload = Column(JSON)

    def __repr__(self):
        return f"<TranscriptRecord(id={self.id}, protocol='{self.protocol}', ebits={self.ebits})>"


class ExperimentRecord(Base):
    __tablename__ = "experiments"

    id = Column(Integer, primary_key=True, index=True)
    created_at = Column(DateTime, default=datetime.utcnow)
    shots = Column(Integer, nullable=True)  # None for analytic runs
    seed = Column(Integer)
    depolarizing_p = Column(Float)
    readout_flip = Column(Float)
    fidelities = Column(JSON)
    payload = Column(JSON)

    def __repr__(self):
        return f"<ExperimentRecord(id={self.id}, shots={self.shots}, seed={self.seed})>"


def record_transcript(db: Session, transcript, command: str = "teleport") -> TranscriptRecord:
    """Persist a single or bidirectional transcript"""
    if isinstance(transcript, BidirectionalTranscript):
        parts = [transcript.a_to_b, transcript.b_to_a]
        record = TranscriptRecord(
            command=command,
            protocol=transcript.protocol,
            mode=transcript.mode,
            seed=transcript.seed,
            m=sum(p.m for p in parts),
            m_prime=sum(p.m_prime for p in parts),
            ebits=transcript.ebits,
            classical_bits=transcript.classical_bits,
            branch_count=sum(p.branch_count for p in parts),
            min_fidelity=min(p.fidelity for p in parts),
            payload=transcript.model_dump(mode="json"),
        )
    else:
        record = TranscriptRecord(
            command=command,
            protocol=transcript.protocol,
            mode=transcript.mode,
            seed=transcript.seed,
            m=transcript.m,
            m_prime=transcript.m_prime,
            ebits=transcript.ebits,
            classical_bits=transcript.classical_bits,
            branch_count=transcript.branch_count,
            min_fidelity=transcript.fidelity,
            payload=transcript.model_dump(mode="json"),
        )
    db.add(record)
    db.commit()
    db.refresh(record)
    return record


def record_experiment(db: Session, report: dict) -> ExperimentRecord:
    record = ExperimentRecord(
        shots=report.get("shots"),
        seed=report.get("seed"),
        depolarizing_p=report["noise"]["depolarizing_p"],
        readout_flip=report["noise"]["readout_flip"],
        fidelities=report["fidelities"],
        payload=report,
    )
    db.add(record)
    db.commit()
    db.refresh(record)
    return record


def list_runs(db: Session, limit: int = 20) -> dict:
    """Newest first, transcripts and experiments separately"""
    transcripts: List[TranscriptRecord] = (
        db.query(TranscriptRecord).order_by(TranscriptRecord.id.desc()).limit(limit).all()
    )
    experiments: List[ExperimentRecord] = (
        db.query(ExperimentRecord).order_by(ExperimentRecord.id.desc()).limit(limit).all()
    )
    return {
        "transcripts": [_transcript_summary(r) for r in transcripts],
        "experiments": [_experiment_summary(r) for r in experiments],
    }


def _timestamp(value: Optional[datetime]) -> Optional[str]:
    return value.isoformat() if value else None


def _transcript_summary(record: TranscriptRecord) -> dict:
    return {
        "id": record.id,
        "created_at": _timestamp(record.created_at),
        "command": record.command,
        "protocol": record.protocol,
        "mode": record.mode,
        "seed": record.seed,
        "m": record.m,
        "m_prime": record.m_prime,
        "ebits": record.ebits,
        "classical_bits": record.classical_bits,
        "branch_count": record.branch_count,
        "min_fidelity": record.min_fidelity,
    }


def _experiment_summary(record: ExperimentRecord) -> dict:
    return {
        "id": record.id,
        "created_at": _timestamp(record.created_at),
        "shots": record.shots,
        "seed": record.seed,
        "depolarizing_p": record.depolarizing_p,
        "readout_flip": record.readout_flip,
        "fidelities": record.fidelities,
    }
