"""FlipIt as a reset/step environment for an adaptive player 1.

The environment owns the game ledger and the opponent's move schedule. The
agent only ever sees observations, rewards and its own Last-Move feedback;
the ground truth goes into StepResult.info for logging.
"""
import logging
from typing import Iterable, Optional

import numpy as np

from datatypes import EnvConfig, MoveOutcome, Observation, RewardParams, StepInfo, StepResult, SENTINEL
from enums import MoveKind, ObservationScheme
from errors import SequencingError
from game import apply_tick, new_game
from renewal import FixedSchedule, MoveSchedule
from utils import spawn_generators

logger = logging.getLogger(__name__)

WAIT = 0
MOVE = 1


def compute_reward(
    action: int,
    outcome: Optional[MoveOutcome],
    last_capture: Optional[int],
    params: RewardParams,
) -> float:
    """Reward of one agent action.

    Waiting earns 0. A consecutive move, or a move while no opponent move has
    ever been revealed, costs -c_1. A flip that reveals the opponent's last
    move LM_0 earns (G - c_1) / c with G = LM_0 - LM_1 + 1, LM_1 being the
    agent's previous capture (0 before the first).

    Args:
        action: 0 to wait, 1 to move
        outcome: The agent's MoveOutcome, present iff action is 1
        last_capture: Tick of the agent's previous flipping move, None if none
        params: Reward constants

    Returns:
        float: The reward
    """
    if action == WAIT:
        return 0.0
    if outcome is None:
        raise ValueError("a move needs its MoveOutcome to be rewarded")
    if outcome.kind is MoveKind.CONSECUTIVE or outcome.revealed_opponent_last_move is None:
        return -params.move_cost
    credited = outcome.revealed_opponent_last_move - (last_capture or 0) + 1
    return (credited - params.move_cost) / params.scale


class FlipItEnv:
    """Episodic FlipIt environment against a renewal opponent.

    Args:
        config: Game, opponent, observation scheme, reward constants and seed
        opponent_moves: Explicit opponent move ticks replacing the renewal schedule
    """

    def __init__(self, config: EnvConfig, opponent_moves: Optional[Iterable[int]] = None):
        self.config = config
        self.opponent_moves = None if opponent_moves is None else list(opponent_moves)
        self.ledger = None
        self.schedule = None
        self.agent_rng: Optional[np.random.Generator] = None
        self.known_opponent_move: Optional[int] = None
        self.own_last_move: Optional[int] = None
        self.last_capture: Optional[int] = None

    @property
    def scheme(self) -> ObservationScheme:
        return self.config.scheme

    def reset(self) -> Observation:
        """Start a fresh game at t=0 and return the initial observation.

        Raises:
            ConfigurationError: If the configuration is invalid
        """
        config = self.config
        config.validate()
        rho = config.opponent.mean()
        if config.game.cost_1 >= rho:
            logger.warning(
                "cost_1=%s is not below the opponent's mean gap %s; dropping out is optimal",
                config.game.cost_1, rho,
            )
        opponent_rng, self.agent_rng = spawn_generators(config.seed)
        if self.opponent_moves is None:
            self.schedule = MoveSchedule(config.opponent, opponent_rng)
        else:
            self.schedule = FixedSchedule(self.opponent_moves)
        self.ledger = new_game(config.game)
        self.known_opponent_move = None
        self.own_last_move = None
        self.last_capture = None
        return self.observe()

    def observe(self) -> Observation:
        """Observation for the decision at the next tick."""
        now = self.ledger.now
        scheme = self.config.scheme
        if scheme is ObservationScheme.OPP_LM:
            return Observation(scheme, opp=self._opponent_age(now))
        if scheme is ObservationScheme.OWN_LM:
            return Observation(scheme, own=self._own_age(now))
        return Observation(scheme, own=self._own_age(now), opp=self._opponent_age(now))

    def _opponent_age(self, now: int) -> int:
        if self.known_opponent_move is None:
            return SENTINEL
        return now + 1 - self.known_opponent_move

    def _own_age(self, now: int) -> int:
        if self.own_last_move is None:
            return now
        return now + 1 - self.own_last_move

    def step(self, action: int) -> StepResult:
        """Advance one tick with the agent's action.

        Args:
            action: 0 to wait, 1 to move

        Returns:
            StepResult: Next observation, reward, horizon flag, LM feedback and ground truth

        Raises:
            SequencingError: Before reset() or past the horizon
        """
        ledger = self.ledger
        if ledger is None:
            raise SequencingError("reset() must be called before step()")
        if action not in (WAIT, MOVE):
            raise ValueError(f"action must be 0 or 1, got {action!r}")
        if ledger.now >= ledger.config.horizon:
            raise SequencingError(f"tick {ledger.now + 1} is past the horizon {ledger.config.horizon}")

        tick = ledger.now + 1
        opponent_moves = self.schedule.due(tick)
        _, (_, outcome) = apply_tick(ledger, opponent_moves, action == MOVE)
        reward = compute_reward(action, outcome, self.last_capture, self.config.reward)

        if outcome is not None:
            self.own_last_move = tick
            if outcome.revealed_opponent_last_move is not None:
                self.known_opponent_move = outcome.revealed_opponent_last_move
            if outcome.kind is MoveKind.FLIP:
                self.last_capture = tick

        game = ledger.config
        beta_0 = ledger.gain[0] - game.cost_0 * ledger.moves[0]
        beta_1 = ledger.gain[1] - game.cost_1 * ledger.moves[1]
        info = StepInfo(
            tick=tick,
            controller=ledger.controller,
            opponent_last_move=ledger.last_move[0],
            gain=(ledger.gain[0], ledger.gain[1]),
            moves=(ledger.moves[0], ledger.moves[1]),
            benefit=(beta_0 / tick, beta_1 / tick),
        )
        return StepResult(
            observation=self.observe(),
            reward=reward,
            terminated=tick >= game.horizon,
            feedback=outcome,
            info=info,
        )
