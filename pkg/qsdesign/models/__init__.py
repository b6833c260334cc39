"""Database models for the verdict archive."""

from .base import Base, TimestampMixin
from .search_run import SearchRun
from .verdict_record import VerdictRecord

__all__ = [
    "Base",
    "TimestampMixin",
    "SearchRun",
    "VerdictRecord",
]
