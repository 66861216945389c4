"""Strategy kinds and their construction from a scenario."""

from typing import get_args

from pydantic import BaseModel, ConfigDict, Field

from src.errors import ConfigurationError
from src.models.scenario import STRATEGY_ORDER, ScenarioConfig, StrategyName
from src.predictor.model import PredictorWeights
from src.strategies.adaptive import AdaptiveController
from src.strategies.base import Strategy
from src.strategies.baselines import (
    PeriodicCheckpoint,
    PredictiveCheckpoint,
    Replication,
    StateMigration,
)

PREDICTOR_STRATEGIES = frozenset({"AD", "Adaptive"})


class StrategyKind(BaseModel):
    """A strategy name with the parameters that apply to it."""

    model_config = ConfigDict(frozen=True)

    name: StrategyName
    cp_interval: int = Field(default=20, ge=1)
    rp_replicas: int = Field(default=2, ge=1)
    sm_threshold: int = Field(default=2, ge=1)
    ad_threshold: float = Field(default=0.7, gt=0.0, lt=1.0)

    @property
    def needs_predictor(self) -> bool:
        return self.name in PREDICTOR_STRATEGIES

    @classmethod
    def from_scenario(cls, name: str, scenario: ScenarioConfig) -> "StrategyKind":
        if name not in get_args(StrategyName):
            raise ConfigurationError(
                f"unknown strategy {name!r}; expected one of {', '.join(STRATEGY_ORDER)}"
            )
        cfg = scenario.strategies
        return cls(
            name=name,
            cp_interval=cfg.cp_interval,
            rp_replicas=cfg.rp_replicas,
            sm_threshold=cfg.sm_threshold,
            ad_threshold=cfg.ad_threshold,
        )


def resolve_kind(strategy: "str | StrategyKind", scenario: ScenarioConfig) -> StrategyKind:
    if isinstance(strategy, StrategyKind):
        return strategy
    return StrategyKind.from_scenario(strategy, scenario)


def build_strategy(
    kind: StrategyKind,
    scenario: ScenarioConfig,
    weights: PredictorWeights | None = None,
) -> Strategy:
    """Fresh strategy instance for one run."""
    if kind.needs_predictor and weights is None:
        raise ConfigurationError(f"strategy {kind.name} needs trained predictor weights")
    if kind.name == "CP":
        return PeriodicCheckpoint(kind.cp_interval)
    if kind.name == "RP":
        return Replication(kind.rp_replicas)
    if kind.name == "SM":
        return StateMigration(kind.sm_threshold, kind.cp_interval)
    assert weights is not None
    if kind.name == "AD":
        return PredictiveCheckpoint(weights, kind.ad_threshold, kind.cp_interval)
    if kind.name == "Adaptive":
        return AdaptiveController(scenario, weights)
    raise ConfigurationError(f"unknown strategy {kind.name!r}")
