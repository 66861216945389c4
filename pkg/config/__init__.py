"""Configuration package."""

from config.settings import SCENARIO_DIR, settings

__all__ = ["settings", "SCENARIO_DIR"]
