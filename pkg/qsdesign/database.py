"""Database connection and session management for the verdict archive."""

import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Generator

from alembic import command
from alembic.config import Config
from sqlalchemy import Engine, create_engine, inspect, text
from sqlalchemy.orm import Session, sessionmaker

logger = logging.getLogger(__name__)

PROJECT_ROOT = Path(__file__).resolve().parent.parent


def create_db_engine(database_url: str) -> Engine:
    """Create SQLAlchemy engine; pooled for server databases, plain for SQLite."""
    if database_url.startswith("sqlite"):
        return create_engine(database_url, echo=False)
    return create_engine(
        database_url,
        pool_size=5,
        max_overflow=10,
        pool_pre_ping=True,
        echo=False,
    )


@contextmanager
def get_db_session(engine: Engine) -> Generator[Session, None, None]:
    """Session scope: commit on success, roll back and re-raise on any failure."""
    db = sessionmaker(autocommit=False, autoflush=False, bind=engine)()
    try:
        yield db
        db.commit()
    except Exception:
        db.rollback()
        raise
    finally:
        db.close()


def check_database_health(engine: Engine) -> bool:
    """True when the archive answers a trivial query."""
    try:
        with get_db_session(engine) as db:
            db.execute(text("SELECT 1"))
        return True
    except Exception as e:
        logger.error(f"Database health check failed: {e}")
        return False


def list_tables(engine: Engine) -> list[str]:
    """Archive table names, sorted; empty when the archive is unreachable."""
    try:
        return sorted(inspect(engine).get_table_names())
    except Exception as e:
        logger.error(f"Failed to list tables: {e}")
        return []


def alembic_config(database_url: str) -> Config:
    config = Config(str(PROJECT_ROOT / "alembic.ini"))
    config.set_main_option("script_location", str(PROJECT_ROOT / "alembic"))
    config.set_main_option("sqlalchemy.url", database_url)
    return config


def upgrade_schema(database_url: str) -> None:
    """Run ``alembic upgrade head`` against ``database_url``."""
    logger.info("Upgrading archive schema")
    command.upgrade(alembic_config(database_url), "head")
