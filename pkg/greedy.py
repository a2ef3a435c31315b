"""Greedy baseline strategy for player 1.

After every move the agent learns how long ago the opponent last moved (tau)
and schedules its next move z ticks ahead, maximizing the local benefit

    L(z) = (1/z) * [ E[min(X, z)] - k_1 ]

where X is the time until the opponent's next move given that its current
gap has already lasted tau ticks. If the best local benefit is not positive
the agent drops out for good.
"""
import logging
import math
from functools import lru_cache
from typing import Dict, Optional

from datatypes import GreedyState, MaximizerSettings, QuadratureSettings
from errors import CertainMovePassedError
from numerics import integrate, maximize_scalar
from renewal import RenewalSpec

logger = logging.getLogger(__name__)

SURVIVAL_FLOOR = 1e-12
GRID_RESOLUTION = 200


def _survival(spec: RenewalSpec, tau: float) -> float:
    survival = spec.sf(tau)
    if survival <= SURVIVAL_FLOOR:
        raise CertainMovePassedError(f"the opponent's move is certain to have happened within {tau} ticks")
    return survival


def conditional_pdf(spec: RenewalSpec, tau: float, x: float) -> float:
    """Density of the time to the opponent's next move, x ticks from now.

    Raises:
        CertainMovePassedError: If F_0(tau) >= 1 - 1e-12
    """
    survival = _survival(spec, tau)
    if x < 0:
        return 0.0
    return spec.pdf(tau + x) / survival


def local_benefit(
    spec: RenewalSpec,
    tau: float,
    z: float,
    move_cost: float,
    settings: Optional[QuadratureSettings] = None,
) -> float:
    """Expected benefit rate of moving z ticks from now.

    The captured time E[min(X, z)] is the integral of x * f(x) over [0, z]
    plus z times the tail mass beyond z. The tail mass of the conditional
    density is S(tau + z) / S(tau). A point mass of the opponent's gap law
    (Periodic) contributes its location when it falls inside [0, z].

    Args:
        spec: Opponent distribution
        tau: Ticks since the opponent's last known move
        z: Planning horizon, > 0
        move_cost: k_1
        settings: Quadrature tolerances

    Returns:
        float: L(z)

    Raises:
        CertainMovePassedError: If the opponent must already have moved again
        NumericalError: If quadrature fails
    """
    if not z > 0:
        raise ValueError(f"z must be > 0, got {z!r}")
    survival = _survival(spec, tau)

    low, high = spec.support()
    start = max(0.0, low - tau)
    stop = min(z, high - tau)
    captured = 0.0
    if stop > start:
        kinks = [b - tau for b in spec.breakpoints()]
        captured = integrate(lambda x: x * spec.pdf(tau + x), start, stop, settings, kinks) / survival

    atom = spec.atom()
    if atom is not None and atom - tau <= z:
        captured += (atom - tau) / survival * _atom_mass(spec, atom)

    captured += z * spec.sf(tau + z) / survival
    return (captured - move_cost) / z


def _atom_mass(spec: RenewalSpec, atom: float) -> float:
    return spec.cdf(atom) - spec.cdf(math.nextafter(atom, -math.inf))


def search_bracket(spec: RenewalSpec, tau: float) -> MaximizerSettings:
    """Bracket [1, max(20 rho, 10 tau + 10)] searched for the best z."""
    return MaximizerSettings(lo=1.0, hi=max(20.0 * spec.mean(), 10.0 * tau + 10.0), resolution=GRID_RESOLUTION)


def plan_offset(
    spec: RenewalSpec,
    tau: int,
    move_cost: float,
    settings: Optional[QuadratureSettings] = None,
) -> Optional[int]:
    """Ticks until the next move, or None to drop out.

    A move that would land on a tick where the opponent is certain to move
    is pushed one tick later, because the opponent takes that tick.
    """
    try:
        z_star, best = maximize_scalar(
            lambda z: local_benefit(spec, tau, z, move_cost, settings), search_bracket(spec, tau)
        )
    except CertainMovePassedError:
        return 1
    if best <= 0.0:
        return None
    offset = max(1, math.floor(z_star + 0.5))
    atom = spec.atom()
    if atom is not None and offset == atom - tau:
        offset += 1
    return offset


class GreedyPlanner:
    """Caches plan_offset() per integer tau for one opponent and cost."""

    def __init__(self, spec: RenewalSpec, move_cost: float, settings: Optional[QuadratureSettings] = None):
        self.spec = spec
        self.move_cost = move_cost
        self.settings = settings
        self._plans: Dict[int, Optional[int]] = {}

    def offset(self, tau: int) -> Optional[int]:
        if tau not in self._plans:
            self._plans[tau] = plan_offset(self.spec, tau, self.move_cost, self.settings)
        return self._plans[tau]


@lru_cache(maxsize=64)
def shared_planner(spec: RenewalSpec, move_cost: float) -> GreedyPlanner:
    """Planner reused by every run of one process that faces the same opponent and cost."""
    return GreedyPlanner(spec, move_cost)


def plan_next_move(state: GreedyState, now: int, planner: Optional[GreedyPlanner] = None) -> GreedyState:
    """Schedule the next move from tick `now`, or drop out.

    Args:
        state: Planning state, state.tau already set for tick `now`
        now: Current tick
        planner: Shared plan cache, a fresh one when omitted

    Returns:
        GreedyState: The same state, updated in place
    """
    if state.dropped_out:
        return state
    planner = planner or GreedyPlanner(state.opponent, state.move_cost)
    offset = planner.offset(state.tau)
    if offset is None:
        state.dropped_out = True
        state.next_move = None
        logger.debug("Greedy drops out at tick %d (tau=%d)", now, state.tau)
    else:
        state.next_move = now + offset
    return state


def on_feedback(
    state: GreedyState,
    revealed_last_move: Optional[int],
    now: int,
    planner: Optional[GreedyPlanner] = None,
) -> GreedyState:
    """Take in LM feedback after a move at tick `now` and plan again.

    An opponent that never moved is treated as having moved at tick 0.
    """
    if state.dropped_out:
        return state
    state.tau = now - (revealed_last_move or 0)
    return plan_next_move(state, now, planner)
