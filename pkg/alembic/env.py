"""Alembic environment for the verdict archive."""

from logging.config import fileConfig

from alembic import context
from qsdesign.config import get_settings
from qsdesign.database import create_db_engine
from qsdesign.models import Base

config = context.config
target_metadata = Base.metadata

# Invoked as `alembic ...`: settings win over the ini URL and the ini configures logging.
# qsdesign.database.upgrade_schema sets the URL itself and keeps the caller's logging.
if config.cmd_opts is not None:
    database_url = get_settings().database_url
    if database_url:
        config.set_main_option("sqlalchemy.url", database_url)
    if config.config_file_name is not None:
        fileConfig(config.config_file_name, disable_existing_loggers=False)


def archive_url() -> str:
    return config.get_main_option("sqlalchemy.url")


def run_migrations_offline() -> None:
    """Emit the archive DDL as SQL without connecting."""
    url = archive_url()
    context.configure(
        url=url,
        target_metadata=target_metadata,
        literal_binds=True,
        render_as_batch=url.startswith("sqlite"),
    )
    with context.begin_transaction():
        context.run_migrations()


def run_migrations_online() -> None:
    url = archive_url()
    engine = create_db_engine(url)
    with engine.connect() as connection:
        # SQLite has no ALTER COLUMN; batch mode rebuilds tables instead
        context.configure(
            connection=connection,
            target_metadata=target_metadata,
            render_as_batch=connection.dialect.name == "sqlite",
        )
        with context.begin_transaction():
            context.run_migrations()
    engine.dispose()


if context.is_offline_mode():
    run_migrations_offline()
else:
    run_migrations_online()
