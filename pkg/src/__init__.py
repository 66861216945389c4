"""Adaptive fault-tolerance simulator for cloud clusters."""

__version__ = "0.1.0"
