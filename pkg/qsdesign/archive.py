"""Store pipeline runs and their verdicts in the archive database."""

import logging

from sqlalchemy import Engine, select

from .database import get_db_session
from .models import SearchRun, VerdictRecord
from .pipeline import PipelineResult
from .search import Verdict

logger = logging.getLogger(__name__)


def record_run(engine: Engine, result: PipelineResult, header: dict) -> int:
    """Insert one run with all its verdicts; returns the run id."""
    with get_db_session(engine) as db:
        run = SearchRun(
            tool_version=header["version"],
            config_hash=header["config_hash"],
            rng_seed=header["rng_seed"],
            summary=result.summary(),
        )
        for position, verdict in enumerate(result.verdicts):
            run.verdicts.append(
                VerdictRecord(
                    position=position,
                    code_id=verdict.code_id,
                    triple=list(verdict.T) if verdict.T is not None else None,
                    outcome=verdict.outcome,
                    stage=verdict.stage,
                    witness=verdict.witness,
                    clique_count=verdict.clique_count,
                    survivor_blocks=verdict.survivor_blocks,
                    elapsed_ms=verdict.elapsed_ms,
                    error=verdict.error,
                )
            )
        db.add(run)
        db.flush()
        run_id = run.id
    logger.info(f"Archived run {run_id} with {len(result.verdicts)} verdicts")
    return run_id


def list_runs(engine: Engine) -> list[dict]:
    """Runs in insertion order, without their verdicts."""
    with get_db_session(engine) as db:
        runs = db.scalars(select(SearchRun).order_by(SearchRun.id)).all()
        return [
            {
                "id": run.id,
                "created_at": run.created_at.isoformat(),
                "tool_version": run.tool_version,
                "config_hash": run.config_hash,
                "rng_seed": run.rng_seed,
                "summary": run.summary,
            }
            for run in runs
        ]


def load_verdicts(engine: Engine, run_id: int) -> list[Verdict]:
    """The run's verdicts in their original stream order."""
    with get_db_session(engine) as db:
        records = db.scalars(
            select(VerdictRecord)
            .where(VerdictRecord.run_id == run_id)
            .order_by(VerdictRecord.position)
        ).all()
        return [
            Verdict(
                code_id=record.code_id,
                T=tuple(record.triple) if record.triple is not None else None,
                outcome=record.outcome,
                stage=record.stage,
                witness=record.witness,
                clique_count=record.clique_count,
                survivor_blocks=record.survivor_blocks,
                elapsed_ms=record.elapsed_ms,
                error=record.error,
            )
            for record in records
        ]
