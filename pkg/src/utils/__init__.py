"""Utility modules."""

from src.utils.logger import get_logger, run_context, setup_logging

__all__ = [
    "setup_logging",
    "get_logger",
    "run_context",
]
