"""Discrete-time FlipIt engine.

Advances ticks, resolves moves, keeps the ground-truth control ledger and
hands Last-Move (LM) feedback back to the players that moved.
"""
from typing import Optional, Tuple

from datatypes import BenefitReport, ControlLedger, GameConfig, MoveOutcome, PlayerBenefit
from enums import MoveKind
from errors import SequencingError, UndefinedAverageError

TickOutcomes = Tuple[Optional[MoveOutcome], Optional[MoveOutcome]]


def new_game(config: GameConfig) -> ControlLedger:
    """Create the ledger of a fresh game at t=0.

    Args:
        config: Game parameters, validated here

    Returns:
        ControlLedger: Ledger with the initial controller and no moves

    Raises:
        ConfigurationError: If the configuration is invalid
    """
    config.validate()
    return ControlLedger(config=config, now=0, controller=config.initial_controller)


def apply_tick(ledger: ControlLedger, move_0: bool, move_1: bool) -> Tuple[ControlLedger, TickOutcomes]:
    """Play one tick.

    The tie winner's move resolves last within the tick, so it owns a
    contested tick. Whoever controls the resource after all moves owns the
    tick. The ledger is updated in place and returned for chaining.

    Args:
        ledger: Game state before the tick
        move_0: Player 0 moves this tick
        move_1: Player 1 moves this tick

    Returns:
        tuple: (ledger, (outcome_0, outcome_1)) with None for a player that did not move

    Raises:
        SequencingError: If the horizon was already reached
    """
    config = ledger.config
    if ledger.now >= config.horizon:
        raise SequencingError(f"tick {ledger.now + 1} is past the horizon {config.horizon}")

    tick = ledger.now + 1
    ledger.now = tick
    wants = (bool(move_0), bool(move_1))
    outcomes: list = [None, None]

    for player in (1 - config.tie_winner, config.tie_winner):
        if not wants[player]:
            continue
        opponent = 1 - player
        kind = MoveKind.FLIP if ledger.controller == opponent else MoveKind.CONSECUTIVE
        ledger.controller = player
        ledger.moves[player] += 1
        ledger.last_move[player] = tick
        outcomes[player] = MoveOutcome(
            mover=player,
            tick=tick,
            kind=kind,
            revealed_opponent_last_move=ledger.last_move[opponent],
        )

    ledger.gain[ledger.controller] += 1
    return ledger, (outcomes[0], outcomes[1])


def benefit(ledger: ControlLedger, config: Optional[GameConfig] = None) -> BenefitReport:
    """Compute benefit figures of both players.

    Args:
        ledger: Game state
        config: Costs to charge, defaults to the ledger's own configuration

    Returns:
        BenefitReport: beta_i = gain_i - cost_i * moves_i and its rate per tick

    Raises:
        UndefinedAverageError: If no tick was played yet
    """
    if ledger.now == 0:
        raise UndefinedAverageError("average benefit is undefined before the first tick")
    config = config or ledger.config
    players = []
    for player in (0, 1):
        value = ledger.gain[player] - config.cost(player) * ledger.moves[player]
        players.append(PlayerBenefit(
            benefit=value,
            average_benefit=value / ledger.now,
            gain=ledger.gain[player],
            moves=ledger.moves[player],
        ))
    return BenefitReport(now=ledger.now, players=(players[0], players[1]))
