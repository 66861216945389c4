"""Application settings using Pydantic Settings."""

from pathlib import Path
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

CONFIG_DIR = Path(__file__).resolve().parent
SCENARIO_DIR = CONFIG_DIR / "scenarios"


class Settings(BaseSettings):
    """Process configuration loaded from environment variables.

    Experiment parameters live in scenario files, not here.
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Scenario & Output Settings
    default_scenario: Path = Field(default=SCENARIO_DIR / "default.yaml")
    output_dir: Path = Field(default=Path("output"))
    write_event_logs: bool = Field(default=False)

    # Execution Settings
    max_concurrent_runs: int = Field(default=4, ge=1)

    # Logging Settings
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = Field(default="INFO")
    log_format: Literal["console", "json"] = Field(default="console")


settings = Settings()
