"""Renewal strategies of the non-adaptive opponent (player 0).

A renewal strategy moves after i.i.d. gaps drawn from a fixed distribution.
Each RenewalSpec exposes the continuous distribution (pdf, cdf, mean) used
by the Greedy agent and the oracles, and a sampler that discretizes draws
to whole ticks for the engine.
"""
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, ClassVar, Dict, Iterable, List, Mapping, Optional, Tuple

import numpy as np
from scipy import special

from enums import Distribution
from errors import ConfigurationError

_SQRT_2PI = math.sqrt(2.0 * math.pi)


def discretize(value: float) -> int:
    """Round a continuous gap half-up to whole ticks, at least 1."""
    return max(1, math.floor(value + 0.5))


class RenewalSpec(ABC):
    """Distribution of the opponent's inter-move gaps."""

    distribution: ClassVar[Distribution]

    @abstractmethod
    def validate(self) -> None:
        """Raise ConfigurationError if parameters are out of range."""

    @abstractmethod
    def pdf(self, x: float) -> float:
        """Density of the continuous part at x (0 outside the support)."""

    @abstractmethod
    def cdf(self, x: float) -> float:
        """P(gap <= x)."""

    def sf(self, x: float) -> float:
        """P(gap > x)."""
        return 1.0 - self.cdf(x)

    @abstractmethod
    def mean(self) -> float:
        """Average gap rho."""

    @abstractmethod
    def support(self) -> Tuple[float, float]:
        """Smallest interval holding all probability mass (bounds may be infinite)."""

    def atom(self) -> Optional[float]:
        """Location of a point mass, None for continuous distributions."""
        return None

    def breakpoints(self) -> Tuple[float, ...]:
        """Points where the pdf is not smooth."""
        return ()

    @abstractmethod
    def draw(self, rng: np.random.Generator) -> float:
        """One continuous gap sample."""

    def sample_interarrival(self, rng: np.random.Generator) -> int:
        return discretize(self.draw(rng))

    def first_move(self, rng: np.random.Generator) -> int:
        """Logical time of the first move, one gap after t=0."""
        return self.sample_interarrival(rng)

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        """Configuration mapping this distribution was (or could be) read from."""

    def describe(self) -> str:
        params = ", ".join(f"{key}={value}" for key, value in self.to_dict().items() if key != "distribution")
        return f"{self.distribution.value}({params})"


@dataclass(frozen=True)
class Periodic(RenewalSpec):
    """Moves every delta ticks after a random phase in {0, ..., delta}."""
    delta: int
    distribution: ClassVar[Distribution] = Distribution.PERIODIC

    def validate(self) -> None:
        if isinstance(self.delta, bool) or not isinstance(self.delta, int) or self.delta < 1:
            raise ConfigurationError(f"must be an integer >= 1, got {self.delta!r}", "delta")

    def pdf(self, x: float) -> float:
        return 0.0

    def cdf(self, x: float) -> float:
        return 1.0 if x >= self.delta else 0.0

    def mean(self) -> float:
        return float(self.delta)

    def support(self) -> Tuple[float, float]:
        return (float(self.delta), float(self.delta))

    def atom(self) -> Optional[float]:
        return float(self.delta)

    def draw(self, rng: np.random.Generator) -> float:
        return float(self.delta)

    def sample_interarrival(self, rng: np.random.Generator) -> int:
        return self.delta

    def first_move(self, rng: np.random.Generator) -> int:
        return int(rng.integers(0, self.delta + 1))

    def to_dict(self) -> Dict[str, Any]:
        return {"distribution": self.distribution.value, "delta": self.delta}


@dataclass(frozen=True)
class Exponential(RenewalSpec):
    """Memoryless gaps with rate lambda per tick."""
    rate: float
    distribution: ClassVar[Distribution] = Distribution.EXPONENTIAL

    def validate(self) -> None:
        if not (self.rate > 0 and math.isfinite(self.rate)):
            raise ConfigurationError(f"must be > 0, got {self.rate!r}", "rate")

    def pdf(self, x: float) -> float:
        return self.rate * math.exp(-self.rate * x) if x >= 0 else 0.0

    def cdf(self, x: float) -> float:
        return -math.expm1(-self.rate * x) if x > 0 else 0.0

    def sf(self, x: float) -> float:
        return math.exp(-self.rate * x) if x > 0 else 1.0

    def mean(self) -> float:
        return 1.0 / self.rate

    def support(self) -> Tuple[float, float]:
        return (0.0, math.inf)

    def draw(self, rng: np.random.Generator) -> float:
        return -math.log1p(-rng.random()) / self.rate

    def to_dict(self) -> Dict[str, Any]:
        return {"distribution": self.distribution.value, "rate": self.rate}


@dataclass(frozen=True)
class Uniform(RenewalSpec):
    """Gaps uniform on [delta - width/2, delta + width/2]."""
    delta: float
    width: float
    distribution: ClassVar[Distribution] = Distribution.UNIFORM

    @property
    def low(self) -> float:
        return self.delta - self.width / 2.0

    @property
    def high(self) -> float:
        return self.delta + self.width / 2.0

    def validate(self) -> None:
        if not math.isfinite(self.delta):
            raise ConfigurationError(f"must be finite, got {self.delta!r}", "delta")
        if not (self.width > 0 and math.isfinite(self.width)):
            raise ConfigurationError(f"must be > 0, got {self.width!r}", "width")
        if self.low < 0:
            raise ConfigurationError(f"delta - width/2 must be >= 0, got {self.low!r}", "delta")

    def pdf(self, x: float) -> float:
        return 1.0 / self.width if self.low <= x <= self.high else 0.0

    def cdf(self, x: float) -> float:
        return min(1.0, max(0.0, (x - self.low) / self.width))

    def mean(self) -> float:
        return float(self.delta)

    def support(self) -> Tuple[float, float]:
        return (self.low, self.high)

    def breakpoints(self) -> Tuple[float, ...]:
        return (self.low, self.high)

    def draw(self, rng: np.random.Generator) -> float:
        return self.low + self.width * rng.random()

    def to_dict(self) -> Dict[str, Any]:
        return {"distribution": self.distribution.value, "delta": self.delta, "width": self.width}


@dataclass(frozen=True)
class Normal(RenewalSpec):
    """Gaps normal with mean mu and standard deviation sigma (before discretization)."""
    mu: float
    sigma: float
    distribution: ClassVar[Distribution] = Distribution.NORMAL

    def validate(self) -> None:
        if not (self.mu > 0 and math.isfinite(self.mu)):
            raise ConfigurationError(f"must be > 0, got {self.mu!r}", "mu")
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ConfigurationError(f"must be > 0, got {self.sigma!r}", "sigma")

    def pdf(self, x: float) -> float:
        z = (x - self.mu) / self.sigma
        return math.exp(-0.5 * z * z) / (self.sigma * _SQRT_2PI)

    def cdf(self, x: float) -> float:
        return float(special.ndtr((x - self.mu) / self.sigma))

    def sf(self, x: float) -> float:
        return float(special.ndtr((self.mu - x) / self.sigma))

    def mean(self) -> float:
        return float(self.mu)

    def support(self) -> Tuple[float, float]:
        return (-math.inf, math.inf)

    def draw(self, rng: np.random.Generator) -> float:
        return self.mu + self.sigma * rng.standard_normal()

    def to_dict(self) -> Dict[str, Any]:
        return {"distribution": self.distribution.value, "mu": self.mu, "sigma": self.sigma}


def first_move(spec: RenewalSpec, rng: np.random.Generator) -> int:
    return spec.first_move(rng)


def sample_interarrival(spec: RenewalSpec, rng: np.random.Generator) -> int:
    return spec.sample_interarrival(rng)


def pdf(spec: RenewalSpec, x: float) -> float:
    return spec.pdf(x)


def cdf(spec: RenewalSpec, x: float) -> float:
    return spec.cdf(x)


def mean(spec: RenewalSpec) -> float:
    return spec.mean()


class MoveSchedule:
    """Strictly increasing move ticks of a renewal opponent.

    Logical move times start at first_move() and grow by one sampled gap at
    a time. A logical move at t=0 is played on tick 1, the first tick the
    engine resolves.

    Args:
        spec: Renewal distribution
        rng: Generator owned by this schedule
    """

    def __init__(self, spec: RenewalSpec, rng: np.random.Generator):
        self.spec = spec
        self.rng = rng
        self.next_move = spec.first_move(rng)

    def advance(self) -> int:
        """Move on to the next logical move time and return it."""
        self.next_move += self.spec.sample_interarrival(self.rng)
        return self.next_move

    def due(self, tick: int) -> bool:
        """Consume the move(s) scheduled up to tick; True if the opponent moves at tick."""
        if self.next_move > tick:
            return False
        while self.next_move <= tick:
            self.advance()
        return True

    def take(self, count: int) -> List[int]:
        """Next `count` logical move times, consuming them."""
        ticks = []
        for _ in range(count):
            ticks.append(self.next_move)
            self.advance()
        return ticks


class FixedSchedule:
    """Opponent that moves at an explicit list of ticks."""

    def __init__(self, ticks: Iterable[int]):
        self.ticks = sorted(set(int(t) for t in ticks))
        self._index = 0

    @property
    def next_move(self) -> Optional[int]:
        return self.ticks[self._index] if self._index < len(self.ticks) else None

    def due(self, tick: int) -> bool:
        moved = False
        while self._index < len(self.ticks) and self.ticks[self._index] <= tick:
            self._index += 1
            moved = True
        return moved


_SPEC_FIELDS = {
    Distribution.PERIODIC: (Periodic, ("delta",)),
    Distribution.EXPONENTIAL: (Exponential, ("rate",)),
    Distribution.UNIFORM: (Uniform, ("delta", "width")),
    Distribution.NORMAL: (Normal, ("mu", "sigma")),
}


def spec_from_dict(mapping: Mapping[str, Any]) -> RenewalSpec:
    """Build and validate a RenewalSpec from its configuration mapping.

    Args:
        mapping: {'distribution': name, <parameters>}

    Returns:
        RenewalSpec: Validated specification

    Raises:
        ConfigurationError: On an unknown distribution, missing or invalid parameter
    """
    if not isinstance(mapping, Mapping):
        raise ConfigurationError("must be a mapping", None)
    name = mapping.get("distribution")
    try:
        distribution = Distribution(name)
    except ValueError:
        choices = ", ".join(d.value for d in Distribution)
        raise ConfigurationError(f"unknown distribution {name!r} (expected one of {choices})", "distribution")

    cls, fields = _SPEC_FIELDS[distribution]
    unknown = set(mapping) - set(fields) - {"distribution"}
    if unknown:
        raise ConfigurationError(f"unexpected key(s) {sorted(unknown)} for {distribution.value}", sorted(unknown)[0])
    values = {}
    for name in fields:
        if name not in mapping:
            raise ConfigurationError("is required", name)
        value = mapping[name]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigurationError(f"must be a number, got {value!r}", name)
        values[name] = value
    if distribution is Distribution.PERIODIC and isinstance(values["delta"], float) and values["delta"].is_integer():
        values["delta"] = int(values["delta"])
    spec = cls(**values)
    spec.validate()
    return spec
