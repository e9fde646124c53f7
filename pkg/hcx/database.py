"""
Search trial ledger: SQLAlchemy engine, session factory and ORM models
"""
from sqlalchemy import create_engine, Boolean, Column, DateTime, Float, ForeignKey, Integer, String
from sqlalchemy.engine import Engine
from sqlalchemy.orm import declarative_base, relationship, sessionmaker, Session
from datetime import datetime, timezone
from typing import List, Optional, Sequence
import logging
import uuid

from .config import settings
from .models import SearchReport

logger = logging.getLogger(__name__)


def build_engine(url: str) -> Engine:
    options = {"echo": settings.DEBUG, "pool_pre_ping": True}
    if not url.startswith("sqlite"):
        options.update(pool_size=10, max_overflow=20)
    return create_engine(url, **options)


# Create database engine
engine = build_engine(settings.HCX_DATABASE_URL)

# Create session factory
SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)

# Create base class for models
Base = declarative_base()


class SearchRunModel(Base):
    """SQLAlchemy model for one search invocation"""
    __tablename__ = "search_runs"

    id = Column(String, primary_key=True, default=lambda: f"run_{uuid.uuid4().hex[:12]}")
    seed = Column(Integer, nullable=False)
    trials = Column(Integer, nullable=False)
    optimize = Column(Boolean, nullable=False, default=False)
    best_residual = Column(Float, nullable=False)
    best_seed = Column(String, nullable=False)
    created_at = Column(DateTime(timezone=True), default=lambda: datetime.now(timezone.utc), nullable=False)

    trial_log = relationship("SearchTrialModel", back_populates="run", cascade="all, delete-orphan",
                             order_by="SearchTrialModel.trial_index")


class SearchTrialModel(Base):
    """SQLAlchemy model for one trial of a run"""
    __tablename__ = "search_trials"

    id = Column(Integer, primary_key=True, autoincrement=True)
    run_id = Column(String, ForeignKey("search_runs.id"), nullable=False, index=True)
    trial_index = Column(Integer, nullable=False)
    seed_token = Column(String, nullable=False)
    residual = Column(Float, nullable=False)
    optimized = Column(Boolean, nullable=False, default=False)

    run = relationship("SearchRunModel", back_populates="trial_log")


def init_db(bind: Optional[Engine] = None):
    """
    Initialize database tables
    """
    Base.metadata.create_all(bind=bind or engine)


def get_session(bind: Optional[Engine] = None) -> Session:
    """
    Get a database session, on the ledger engine unless bind is given
    """
    if bind is not None:
        return sessionmaker(autocommit=False, autoflush=False, bind=bind)()
    return SessionLocal()


def record_search(report: SearchReport, results: Sequence, bind: Optional[Engine] = None) -> str:
    """
    Store a run and its per-trial log

    Args:
        report: Summary of the run
        results: TrialResult records of the same run

    Returns:
        The new run id
    """
    init_db(bind)
    session = get_session(bind)
    try:
        run = SearchRunModel(
            seed=report.seed,
            trials=report.trials,
            optimize=report.optimize,
            best_residual=report.best_residual,
            best_seed=report.best_seed,
        )
        run.trial_log = [
            SearchTrialModel(trial_index=r.index, seed_token=r.seed, residual=r.residual, optimized=r.optimized)
            for r in results
        ]
        session.add(run)
        session.commit()
        logger.info(f"recorded search run {run.id} with {len(results)} trials")
        return run.id
    except Exception:
        session.rollback()
        raise
    finally:
        session.close()


def load_trials(run_id: str, bind: Optional[Engine] = None) -> List[SearchTrialModel]:
    session = get_session(bind)
    try:
        return (
            session.query(SearchTrialModel)
            .filter(SearchTrialModel.run_id == run_id)
            .order_by(SearchTrialModel.trial_index)
            .all()
        )
    finally:
        session.close()


def load_run(run_id: str, bind: Optional[Engine] = None) -> Optional[SearchRunModel]:
    session = get_session(bind)
    try:
        return session.get(SearchRunModel, run_id)
    finally:
        session.close()
