"""Record the deciding stage on each verdict.

Revision ID: 002
Revises: 001
Create Date: 2026-10-19

"""
from typing import Sequence, Union

from alembic import op
import sqlalchemy as sa

revision: str = "002"
down_revision: Union[str, None] = "001"
branch_labels: Union[str, Sequence[str], None] = None
depends_on: Union[str, Sequence[str], None] = None


def upgrade() -> None:
    with op.batch_alter_table("verdict_records") as batch_op:
        batch_op.add_column(sa.Column("stage", sa.Integer(), nullable=True))


def downgrade() -> None:
    with op.batch_alter_table("verdict_records") as batch_op:
        batch_op.drop_column("stage")
