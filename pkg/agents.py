"""Strategies that can play player 1.

Every agent talks to the game through the same narrow protocol: it sees
observations, its own rewards and its own Last-Move feedback, never the
ground truth kept by the environment.
"""
import logging
from abc import ABC, abstractmethod
from typing import Optional

import numpy as np

from datatypes import AgentConfig, AgentParams, GreedyState, Observation, Transition
from enums import AgentKind
from errors import ConfigurationError, DropoutOptimalError
from greedy import GreedyPlanner, on_feedback, plan_next_move, shared_planner
from oracles import oracle_exp, oracle_per
from qflip import QTable, select_action, serialize, update
from renewal import Exponential, Periodic, RenewalSpec

logger = logging.getLogger(__name__)

WAIT = 0
MOVE = 1


class Agent(ABC):
    """Player 1 strategy."""

    kind: AgentKind

    def begin(self, observation: Observation, rng: np.random.Generator) -> None:
        """Prepare for a new game starting at t=0."""
        self.rng = rng

    @abstractmethod
    def choose(self, observation: Observation, tick: int) -> int:
        """Action for `tick`: 0 to wait, 1 to move."""

    def learn(self, transition: Transition) -> None:
        """Digest the outcome of the last tick."""

    @property
    def dropped_out(self) -> bool:
        return False

    def snapshot(self) -> Optional[str]:
        """Serialized learned state, None if the agent learns nothing."""
        return None


class PassiveAgent(Agent):
    """Never moves."""

    kind = AgentKind.NONE

    def choose(self, observation: Observation, tick: int) -> int:
        return WAIT


class QFlipAgent(Agent):
    """Tabular Q-learning agent."""

    kind = AgentKind.QFLIP

    def __init__(self, params: Optional[AgentParams] = None):
        self.params = params or AgentParams()
        self.params.validate()
        self.table = QTable()

    def begin(self, observation: Observation, rng: np.random.Generator) -> None:
        super().begin(observation, rng)
        self.table = QTable()

    def choose(self, observation: Observation, tick: int) -> int:
        return select_action(self.table, observation, self.params, self.rng)

    def learn(self, transition: Transition) -> None:
        update(self.table, transition.observation, transition.action, transition.reward,
               transition.next_observation, self.params)

    def snapshot(self) -> Optional[str]:
        return serialize(self.table)


class GreedyAgent(Agent):
    """Local-benefit maximizer with prior knowledge of the opponent's distribution."""

    kind = AgentKind.GREEDY

    def __init__(self, opponent: RenewalSpec, move_cost: float, planner: Optional[GreedyPlanner] = None):
        self.planner = planner or shared_planner(opponent, move_cost)
        self.state = GreedyState(opponent=opponent, move_cost=move_cost)

    def begin(self, observation: Observation, rng: np.random.Generator) -> None:
        super().begin(observation, rng)
        self.state = GreedyState(opponent=self.state.opponent, move_cost=self.state.move_cost)
        plan_next_move(self.state, 0, self.planner)

    def choose(self, observation: Observation, tick: int) -> int:
        next_move = self.state.next_move
        return MOVE if next_move is not None and tick >= next_move else WAIT

    def learn(self, transition: Transition) -> None:
        if transition.feedback is not None:
            on_feedback(self.state, transition.feedback.revealed_opponent_last_move, transition.tick, self.planner)

    @property
    def dropped_out(self) -> bool:
        return self.state.dropped_out


class ScriptedOptimalAgent(Agent):
    """Known optimal Last-Move response to a Periodic or Exponential opponent.

    Against Per(delta) it moves at delta + 1 and then one tick after every
    opponent move it learns about. Against Exp(lambda) it plays Periodic
    with the best period. When moving cannot pay off it never moves.

    Raises:
        ConfigurationError: For any other opponent
    """

    kind = AgentKind.SCRIPTED_OPTIMAL

    def __init__(self, opponent: RenewalSpec, move_cost: float):
        self.opponent = opponent
        self.idle = False
        if isinstance(opponent, Periodic):
            self.period = opponent.delta
            self.follows_opponent = True
            try:
                oracle_per(opponent.delta, move_cost)
            except DropoutOptimalError:
                self.idle = True
        elif isinstance(opponent, Exponential):
            self.follows_opponent = False
            try:
                self.period, _ = oracle_exp(opponent.rate, move_cost)
            except DropoutOptimalError:
                self.period = 0
                self.idle = True
        else:
            raise ConfigurationError(
                f"no scripted optimum is known against {opponent.distribution.value}", "agent.kind"
            )
        self.next_move: Optional[int] = None
        if self.idle:
            logger.info("Scripted agent sits out: moving at cost %s cannot pay against %s",
                        move_cost, opponent.describe())

    def begin(self, observation: Observation, rng: np.random.Generator) -> None:
        super().begin(observation, rng)
        if self.idle:
            self.next_move = None
        elif self.follows_opponent:
            self.next_move = self.period + 1
        else:
            self.next_move = self.period

    def choose(self, observation: Observation, tick: int) -> int:
        return MOVE if self.next_move is not None and tick >= self.next_move else WAIT

    def learn(self, transition: Transition) -> None:
        feedback = transition.feedback
        if feedback is None or self.next_move is None:
            return
        if not self.follows_opponent:
            self.next_move = transition.tick + self.period
        elif feedback.revealed_opponent_last_move is None:
            self.next_move = transition.tick + 1
        else:
            self.next_move = max(transition.tick + 1, feedback.revealed_opponent_last_move + self.period + 1)

    @property
    def dropped_out(self) -> bool:
        return self.idle


def build_agent(config: AgentConfig, opponent: RenewalSpec, move_cost: float) -> Agent:
    """Instantiate the configured player 1 strategy.

    Args:
        config: Agent section of the experiment
        opponent: True opponent distribution (prior knowledge for Greedy and scripted play)
        move_cost: c_1

    Returns:
        Agent: Fresh agent, begin() not yet called
    """
    if config.kind is AgentKind.QFLIP:
        return QFlipAgent(config.params)
    if config.kind is AgentKind.GREEDY:
        return GreedyAgent(opponent, move_cost)
    if config.kind is AgentKind.SCRIPTED_OPTIMAL:
        return ScriptedOptimalAgent(opponent, move_cost)
    return PassiveAgent()
