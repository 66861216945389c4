"""Scenario files: YAML in, validated ScenarioConfig out, and back."""

from pathlib import Path
from typing import Any

import yaml
from pydantic import ValidationError

from src.errors import ScenarioValidationError
from src.models.scenario import ScenarioConfig
from src.utils.logger import get_logger

logger = get_logger("scenario")


def _first_error(error: ValidationError) -> ScenarioValidationError:
    detail = error.errors()[0]
    field = ".".join(str(part) for part in detail["loc"]) or "<root>"
    constraint = detail["msg"].removeprefix("Value error, ")
    return ScenarioValidationError(field, constraint)


def load_scenario_text(text: str, source: str = "<string>") -> ScenarioConfig:
    """Parse and validate scenario YAML.

    Raises:
        ScenarioValidationError: Malformed YAML or a field violating its constraint.
    """
    try:
        data: Any = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ScenarioValidationError(source, f"not valid YAML ({e})") from e
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ScenarioValidationError(source, "top level must be a mapping of sections")
    try:
        return ScenarioConfig.model_validate(data)
    except ValidationError as e:
        raise _first_error(e) from e


def parse_scenario(path: Path) -> ScenarioConfig:
    """Read a scenario file with every default filled in."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"scenario file not found: {path}")
    scenario = load_scenario_text(path.read_text(encoding="utf-8"), source=str(path))
    logger.debug("scenario_loaded", path=str(path), name=scenario.name)
    return scenario


def dump_scenario(scenario: ScenarioConfig) -> str:
    """Normalized YAML listing every effective value."""
    return yaml.safe_dump(
        scenario.model_dump(mode="json"),
        sort_keys=False,
        allow_unicode=True,
        default_flow_style=None,
        width=100,
    )


def write_scenario(scenario: ScenarioConfig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_scenario(scenario), encoding="utf-8", newline="\n")
    return path
