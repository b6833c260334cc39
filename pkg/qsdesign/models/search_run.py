"""Archived pipeline runs."""

from sqlalchemy import Integer, String, JSON
from sqlalchemy.orm import Mapped, mapped_column, relationship

from .base import Base, TimestampMixin


class SearchRun(Base, TimestampMixin):
    """One search invocation: the report header plus its summary.

    Verdicts hang off the run in stream order (``position``).
    """

    __tablename__ = "search_runs"

    id: Mapped[int] = mapped_column(Integer, primary_key=True, autoincrement=True)
    tool_version: Mapped[str] = mapped_column(String(32), nullable=False)
    config_hash: Mapped[str] = mapped_column(String(64), nullable=False, index=True)
    rng_seed: Mapped[int] = mapped_column(Integer, nullable=False)
    summary: Mapped[dict] = mapped_column(JSON, nullable=False)

    verdicts: Mapped[list["VerdictRecord"]] = relationship(
        "VerdictRecord",
        back_populates="run",
        order_by="VerdictRecord.position",
        cascade="all, delete-orphan",
    )

    def __repr__(self) -> str:
        return f"<SearchRun(id={self.id}, config_hash={self.config_hash[:12]})>"
