from sqlalchemy import create_engine
from sqlalchemy.orm import declarative_base, sessionmaker

from backend.config import get_settings

# Run ledger URL (TELEPORT_DATABASE_URL)
SQLALCHEMY_DATABASE_URL = get_settings().database_url

# check_same_thread=False is needed for SQLite with FastAPI
connect_args = {"check_same_thread": False} if SQLALCHEMY_DATABASE_URL.startswith("sqlite") else {}
engine = create_engine(SQLALCHEMY_DATABASE_URL, connect_args=connect_args)

# Session Factory
SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)

# Base Class for Models
Base = declarative_base()


# Dependency
def get_db():
    db = SessionLocal()
    try:
        yield db
    finally:
        db.close()


def init_db():
    """Create ledger tables if they do not exist"""
    import backend.models  # noqa: F401

    Base.metadata.create_all(bind=engine)
