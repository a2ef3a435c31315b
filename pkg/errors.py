"""Exception hierarchy for the FlipIt simulation lab.

Every error raised on purpose by the simulation, the agents, the numerics
or the experiment harness derives from FlipItLabError, so the command-line
layer can tell expected failures from bugs.
"""
from typing import Optional, Union


class FlipItLabError(Exception):
    """Base class for all expected failures."""


class ConfigurationError(FlipItLabError, ValueError):
    """Invalid configuration value.

    Attributes:
        field: Dotted path of the offending field (e.g. 'game.cost_1'), if known
        reason: Human readable description of the problem
    """

    def __init__(self, reason: str, field: Optional[str] = None) -> None:
        self.field = field
        self.reason = reason
        super().__init__(f"{field}: {reason}" if field else reason)

    def under(self, prefix: str) -> "ConfigurationError":
        """Return a copy whose field path is nested below prefix."""
        field = f"{prefix}.{self.field}" if self.field else prefix
        return ConfigurationError(self.reason, field)


class SequencingError(FlipItLabError, RuntimeError):
    """A game or environment was advanced past its horizon."""


class UndefinedAverageError(FlipItLabError, ValueError):
    """Average benefit requested before any tick was played."""


class NumericalError(FlipItLabError, ArithmeticError):
    """Quadrature did not converge within its subdivision budget.

    Attributes:
        estimate: Best estimate available when the routine gave up
    """

    def __init__(self, message: str, estimate: float) -> None:
        self.estimate = estimate
        super().__init__(f"{message} (best estimate {estimate!r})")


class CertainMovePassedError(FlipItLabError, ValueError):
    """The opponent's next move is certain to have already happened."""


class SnapshotParseError(FlipItLabError, ValueError):
    """Malformed Q-table snapshot text."""


class DropoutOptimalError(FlipItLabError, ValueError):
    """Move cost is too high to play profitably; dropping out is optimal.

    Attributes:
        benefit: Average benefit of the optimal (drop-out) strategy
    """

    def __init__(self, message: str) -> None:
        self.benefit = 0.0
        super().__init__(message)


class ExperimentError(FlipItLabError, RuntimeError):
    """A run inside an experiment failed.

    Attributes:
        run_index: Index of the failing run
        seed: Seed of the failing run
    """

    def __init__(self, run_index: int, seed: int, cause: Union[BaseException, str]) -> None:
        self.run_index = run_index
        self.seed = seed
        detail = cause if isinstance(cause, str) else f"{type(cause).__name__}: {cause}"
        super().__init__(f"run {run_index} (seed {seed}) failed: {detail}")
