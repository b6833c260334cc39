"""Archived verdicts."""

from sqlalchemy import Enum, Float, ForeignKey, Integer, JSON, String, Text
from sqlalchemy.orm import Mapped, mapped_column, relationship

from ..search import Outcome
from .base import Base


class VerdictRecord(Base):
    """One verdict line of an archived run."""

    __tablename__ = "verdict_records"

    id: Mapped[int] = mapped_column(Integer, primary_key=True, autoincrement=True)
    run_id: Mapped[int] = mapped_column(
        Integer, ForeignKey("search_runs.id", ondelete="CASCADE"), nullable=False, index=True
    )
    position: Mapped[int] = mapped_column(Integer, nullable=False)
    code_id: Mapped[str] = mapped_column(String(255), nullable=False, index=True)
    triple: Mapped[list | None] = mapped_column(JSON, nullable=True)
    outcome: Mapped[Outcome] = mapped_column(
        Enum(Outcome, name="verdictoutcome", values_callable=lambda x: [e.value for e in x]),
        nullable=False,
    )
    stage: Mapped[int | None] = mapped_column(Integer, nullable=True)
    witness: Mapped[dict | None] = mapped_column(JSON, nullable=True)
    clique_count: Mapped[int | None] = mapped_column(Integer, nullable=True)
    survivor_blocks: Mapped[list | None] = mapped_column(JSON, nullable=True)
    elapsed_ms: Mapped[float | None] = mapped_column(Float, nullable=True)
    error: Mapped[str | None] = mapped_column(Text, nullable=True)

    run: Mapped["SearchRun"] = relationship("SearchRun", back_populates="verdicts")

    def __repr__(self) -> str:
        return f"<VerdictRecord(id={self.id}, code_id={self.code_id}, outcome={self.outcome.value})>"
