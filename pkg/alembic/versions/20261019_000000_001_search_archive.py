"""Search runs and verdict records.

Revision ID: 001
Revises:
Create Date: 2026-10-19

"""
from typing import Sequence, Union

from alembic import op
import sqlalchemy as sa

# revision identifiers, used by Alembic.
revision: str = "001"
down_revision: Union[str, None] = None
branch_labels: Union[str, Sequence[str], None] = None
depends_on: Union[str, Sequence[str], None] = None

OUTCOMES = ("excluded_stage1", "excluded_stage2", "survivor", "error")


def upgrade() -> None:
    op.create_table(
        "search_runs",
        sa.Column("id", sa.Integer(), autoincrement=True, nullable=False),
        sa.Column("tool_version", sa.String(length=32), nullable=False),
        sa.Column("config_hash", sa.String(length=64), nullable=False),
        sa.Column("rng_seed", sa.Integer(), nullable=False),
        sa.Column("summary", sa.JSON(), nullable=False),
        sa.Column("created_at", sa.DateTime(), nullable=False),
        sa.PrimaryKeyConstraint("id"),
    )
    op.create_index("ix_search_runs_config_hash", "search_runs", ["config_hash"])

    op.create_table(
        "verdict_records",
        sa.Column("id", sa.Integer(), autoincrement=True, nullable=False),
        sa.Column("run_id", sa.Integer(), nullable=False),
        sa.Column("position", sa.Integer(), nullable=False),
        sa.Column("code_id", sa.String(length=255), nullable=False),
        sa.Column("triple", sa.JSON(), nullable=True),
        sa.Column("outcome", sa.Enum(*OUTCOMES, name="verdictoutcome"), nullable=False),
        sa.Column("witness", sa.JSON(), nullable=True),
        sa.Column("clique_count", sa.Integer(), nullable=True),
        sa.Column("survivor_blocks", sa.JSON(), nullable=True),
        sa.Column("elapsed_ms", sa.Float(), nullable=True),
        sa.Column("error", sa.Text(), nullable=True),
        sa.ForeignKeyConstraint(["run_id"], ["search_runs.id"], ondelete="CASCADE"),
        sa.PrimaryKeyConstraint("id"),
    )
    op.create_index("ix_verdict_records_run_id", "verdict_records", ["run_id"])
    op.create_index("ix_verdict_records_code_id", "verdict_records", ["code_id"])


def downgrade() -> None:
    op.drop_index("ix_verdict_records_code_id", table_name="verdict_records")
    op.drop_index("ix_verdict_records_run_id", table_name="verdict_records")
    op.drop_table("verdict_records")
    op.drop_index("ix_search_runs_config_hash", table_name="search_runs")
    op.drop_table("search_runs")
    sa.Enum(name="verdictoutcome").drop(op.get_bind(), checkfirst=True)
