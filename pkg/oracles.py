"""Optimal benefit of the best Last-Move response to the renewal opponents."""
import math
from typing import Optional, Tuple

from datatypes import MaximizerSettings
from errors import ConfigurationError, DropoutOptimalError
from numerics import maximize_scalar
from renewal import Exponential, Periodic, RenewalSpec


def oracle_per(delta: int, cost: float) -> float:
    """Average benefit of moving one tick after every Per(delta) move.

    Args:
        delta: Opponent period
        cost: Agent move cost c_1, 0 < c_1 < delta

    Returns:
        float: (delta - 1 - c_1) / delta

    Raises:
        DropoutOptimalError: If c_1 >= delta
    """
    if not delta >= 1:
        raise ConfigurationError(f"must be >= 1, got {delta!r}", "delta")
    if not cost > 0:
        raise ConfigurationError(f"must be > 0, got {cost!r}", "cost")
    if cost >= delta:
        raise DropoutOptimalError(f"cost {cost} >= period {delta}: dropping out is optimal")
    return (delta - 1 - cost) / delta


def periodic_benefit_vs_exponential(rate: float, cost: float, period: float) -> float:
    """(1/z) * [(1 - exp(-rate z)) / rate - c_1], the rate of playing Periodic(z) vs Exp(rate)."""
    return (-math.expm1(-rate * period) / rate - cost) / period


def oracle_exp(rate: float, cost: float) -> Tuple[int, float]:
    """Best period against an Exponential opponent and its benefit.

    Args:
        rate: Opponent rate lambda
        cost: Agent move cost c_1 < 1/lambda

    Returns:
        tuple: (period rounded to whole ticks, benefit at that period)

    Raises:
        DropoutOptimalError: If c_1 >= 1/lambda
    """
    if not rate > 0:
        raise ConfigurationError(f"must be > 0, got {rate!r}", "lambda")
    if not cost > 0:
        raise ConfigurationError(f"must be > 0, got {cost!r}", "cost")
    if cost >= 1.0 / rate:
        raise DropoutOptimalError(f"cost {cost} >= mean gap {1.0 / rate}: dropping out is optimal")
    z_star, _ = maximize_scalar(
        lambda z: periodic_benefit_vs_exponential(rate, cost, z),
        MaximizerSettings(lo=1.0, hi=50.0 / rate, resolution=1000),
    )
    period = max(1, math.floor(z_star + 0.5))
    return period, periodic_benefit_vs_exponential(rate, cost, period)


def reference_benefit(opponent: RenewalSpec, cost: float) -> Optional[float]:
    """Optimal average benefit of player 1, None when no closed form is known."""
    try:
        if isinstance(opponent, Periodic):
            return oracle_per(opponent.delta, cost)
        if isinstance(opponent, Exponential):
            return oracle_exp(opponent.rate, cost)[1]
    except DropoutOptimalError as exc:
        return exc.benefit
    return None
