"""Exception hierarchy shared by every subsystem."""


class FaultSimError(Exception):
    """Base class for all simulator errors."""


class ConfigurationError(FaultSimError, ValueError):
    """A scenario, strategy or table is unusable as configured."""


class ScenarioValidationError(ConfigurationError):
    """A scenario field violates its constraint."""

    def __init__(self, field: str, constraint: str):
        self.field = field
        self.constraint = constraint
        super().__init__(f"{field}: {constraint}")


class TraceMismatchError(ConfigurationError):
    """A telemetry trace does not fit the scenario it is run against."""


class DimensionError(FaultSimError, ValueError):
    """Vector or weight lengths disagree."""


class NumericError(FaultSimError, ArithmeticError):
    """A parameter or intermediate value is not finite."""


class InputError(FaultSimError, ValueError):
    """An operation received an empty or otherwise unusable input."""


class UnknownNodeError(FaultSimError, LookupError):
    """A node id is not part of the scenario's node set."""


class TrainingError(FaultSimError):
    """Gradient descent diverged."""

    def __init__(self, epoch: int, loss: float):
        self.epoch = epoch
        self.loss = loss
        super().__init__(f"training diverged at epoch {epoch} (loss={loss})")


class ExperimentRunError(FaultSimError):
    """One (strategy, seed) run of an experiment failed."""

    def __init__(self, strategy: str, seed: int, cause: BaseException):
        self.strategy = strategy
        self.seed = seed
        self.cause = cause
        super().__init__(f"run strategy={strategy} seed={seed} failed: {cause}")
