"""Data type definitions for the FlipIt simulation lab.

This module defines dataclass structures for representing:
- Game configuration, ground-truth control ledger, move outcomes and benefits
- Agent observations, rewards and environment step results
- QFlip hyper-parameters and Q-table entries, Greedy planning state
- Numerics settings
- Experiment configuration, sweeps and run results
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import TYPE_CHECKING, Any, Dict, List, Optional, Tuple

from enums import AgentKind, MoveKind, ObservationScheme
from errors import ConfigurationError

if TYPE_CHECKING:
    from renewal import RenewalSpec

SENTINEL = -1
PLAYERS = (0, 1)
NON_OPTIMAL_THRESHOLD = 0.02


@dataclass
class GameConfig:
    """Parameters of one discrete FlipIt game.

    Attributes:
        horizon: Number of ticks played before the game is truncated
        cost_0: Move cost of player 0 (the renewal opponent)
        cost_1: Move cost of player 1 (the adaptive agent)
        initial_controller: Player controlling the resource at t=0
        tie_winner: Player whose move resolves last when both move in one tick
    """
    horizon: int
    cost_0: float
    cost_1: float
    initial_controller: int = 0
    tie_winner: int = 0

    def cost(self, player: int) -> float:
        return self.cost_0 if player == 0 else self.cost_1

    def validate(self) -> None:
        """Raise ConfigurationError if any field is out of range."""
        if isinstance(self.horizon, bool) or not isinstance(self.horizon, int) or self.horizon < 1:
            raise ConfigurationError(f"must be an integer >= 1, got {self.horizon!r}", "horizon")
        for name in ("cost_0", "cost_1"):
            value = getattr(self, name)
            if not value > 0:
                raise ConfigurationError(f"must be > 0, got {value!r}", name)
        if self.initial_controller not in PLAYERS:
            raise ConfigurationError(f"must be 0 or 1, got {self.initial_controller!r}", "initial_controller")
        if self.tie_winner not in PLAYERS:
            raise ConfigurationError(f"must be 0 or 1, got {self.tie_winner!r}", "tie_winner")


@dataclass
class ControlLedger:
    """Ground-truth state of a game.

    Attributes:
        config: Game the ledger belongs to
        now: Number of elapsed ticks
        controller: Player in control at the end of tick `now`
        gain: Ticks owned by each player
        moves: Moves made by each player
        last_move: Tick of each player's last move, None before the first
    """
    config: GameConfig
    now: int
    controller: int
    gain: List[int] = field(default_factory=lambda: [0, 0])
    moves: List[int] = field(default_factory=lambda: [0, 0])
    last_move: List[Optional[int]] = field(default_factory=lambda: [None, None])


@dataclass(frozen=True)
class MoveOutcome:
    """Result of one move, as fed back to the mover.

    Attributes:
        mover: Player who moved
        tick: Tick of the move
        kind: Flip or consecutive
        revealed_opponent_last_move: Opponent's last move known at that point, None if never
    """
    mover: int
    tick: int
    kind: MoveKind
    revealed_opponent_last_move: Optional[int]


@dataclass(frozen=True)
class PlayerBenefit:
    """Benefit figures of one player."""
    benefit: float
    average_benefit: float
    gain: int
    moves: int


@dataclass(frozen=True)
class BenefitReport:
    """Benefit of both players after `now` ticks."""
    now: int
    players: Tuple[PlayerBenefit, PlayerBenefit]

    def __getitem__(self, player: int) -> PlayerBenefit:
        return self.players[player]


@dataclass(frozen=True)
class Observation:
    """Agent-visible state.

    Components not exposed by the scheme are None, so that observations of
    one scheme compare and hash only on what the agent may see.

    Attributes:
        scheme: Observation scheme that produced the value
        own: Ticks since the agent's own last move (elapsed time before the first)
        opp: Ticks since the opponent's last known move, or -1 if none is known
    """
    scheme: ObservationScheme
    own: Optional[int] = None
    opp: Optional[int] = None

    @property
    def opponent_unknown(self) -> bool:
        return self.opp == SENTINEL


@dataclass
class RewardParams:
    """Reward shaping constants.

    Attributes:
        move_cost: Agent move cost c_1
        scale: Normalization constant c dividing flip rewards
    """
    move_cost: float
    scale: float = 5.0

    def validate(self) -> None:
        if not self.move_cost > 0:
            raise ConfigurationError(f"must be > 0, got {self.move_cost!r}", "cost_1")
        if not self.scale > 0:
            raise ConfigurationError(f"must be > 0, got {self.scale!r}", "c")


@dataclass
class EnvConfig:
    """Everything needed to build a FlipIt environment.

    Attributes:
        game: Game parameters
        opponent: Renewal strategy of player 0
        scheme: What the agent observes
        reward: Reward constants (reward.move_cost is the game's cost_1)
        seed: Seed of the run's random streams
    """
    game: GameConfig
    opponent: RenewalSpec
    scheme: ObservationScheme = ObservationScheme.OPP_LM
    reward: Optional[RewardParams] = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.reward is None:
            self.reward = RewardParams(move_cost=self.game.cost_1)

    def validate(self) -> None:
        self.game.validate()
        try:
            self.opponent.validate()
        except ConfigurationError as exc:
            raise exc.under("opponent")
        self.reward.validate()
        if self.reward.move_cost != self.game.cost_1:
            raise ConfigurationError(
                f"reward cost {self.reward.move_cost!r} differs from cost_1 {self.game.cost_1!r}", "reward.move_cost"
            )


@dataclass(frozen=True)
class StepInfo:
    """Ground-truth snapshot after a tick. Logging only, never shown to agents."""
    tick: int
    controller: int
    opponent_last_move: Optional[int]
    gain: Tuple[int, int]
    moves: Tuple[int, int]
    benefit: Tuple[float, float]


@dataclass(frozen=True)
class StepResult:
    """What the environment returns from step().

    Attributes:
        observation: Next observation
        reward: Reward for the action just taken
        terminated: True once the horizon is reached
        feedback: The agent's own move outcome (LM feedback), None if it waited
        info: Ground-truth snapshot for logs
    """
    observation: Observation
    reward: float
    terminated: bool
    feedback: Optional[MoveOutcome]
    info: StepInfo


@dataclass(frozen=True)
class Transition:
    """What an agent may learn from after one tick.

    Attributes:
        observation: Observation the action was chosen on
        action: 0 (wait) or 1 (move)
        reward: Reward of the action
        next_observation: Observation after the tick
        feedback: The agent's own move outcome, None if it waited
        tick: Tick the action was played on
    """
    observation: Observation
    action: int
    reward: float
    next_observation: Observation
    feedback: Optional[MoveOutcome]
    tick: int


@dataclass
class AgentParams:
    """QFlip hyper-parameters.

    Attributes:
        gamma: Future discount
        epsilon: Exploration base rate
        decay: Exploration discount per state visit
        p: Probability of waiting in a fresh state
    """
    gamma: float = 0.8
    epsilon: float = 0.5
    decay: float = 0.05
    p: float = 0.7

    def validate(self) -> None:
        if not 0 <= self.gamma < 1:
            raise ConfigurationError(f"must be in [0, 1), got {self.gamma!r}", "gamma")
        if not 0 <= self.epsilon <= 1:
            raise ConfigurationError(f"must be in [0, 1], got {self.epsilon!r}", "epsilon")
        if not self.decay >= 0:
            raise ConfigurationError(f"must be >= 0, got {self.decay!r}", "decay")
        if not 0 <= self.p <= 1:
            raise ConfigurationError(f"must be in [0, 1], got {self.p!r}", "p")


@dataclass
class QEntry:
    """Per-state record of the Q-table.

    Attributes:
        q: Value estimate of waiting and moving
        alpha: Number of updates of each action
        visits: Number of action selections in the state
    """
    q: List[float] = field(default_factory=lambda: [0.0, 0.0])
    alpha: List[int] = field(default_factory=lambda: [0, 0])
    visits: int = 0

    @property
    def fresh(self) -> bool:
        return self.q[0] == 0.0 and self.q[1] == 0.0


@dataclass
class GreedyState:
    """Planning state of the Greedy agent.

    Attributes:
        opponent: Opponent distribution, known a priori
        move_cost: Agent move cost k_1
        tau: Ticks since the opponent's last known move, at the last plan
        next_move: Tick of the scheduled move, None when dropped out
        dropped_out: True once the agent stopped playing
    """
    opponent: RenewalSpec
    move_cost: float
    tau: int = 0
    next_move: Optional[int] = None
    dropped_out: bool = False


@dataclass
class QuadratureSettings:
    """Tolerances of the adaptive quadrature."""
    abs_tol: float = 1e-9
    rel_tol: float = 1e-8
    max_subdivisions: int = 200

    def validate(self) -> None:
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ConfigurationError("tolerances must be > 0", "quadrature")
        if self.max_subdivisions < 1:
            raise ConfigurationError("must be >= 1", "quadrature.max_subdivisions")


@dataclass
class MaximizerSettings:
    """Search bracket and resolution of the scalar maximizer."""
    lo: float
    hi: float
    resolution: int = 200
    tolerance: float = 1e-10

    def validate(self) -> None:
        if not self.lo < self.hi:
            raise ConfigurationError(f"empty bracket [{self.lo}, {self.hi}]", "maximizer")
        if self.resolution < 2:
            raise ConfigurationError("must be >= 2", "maximizer.resolution")


@dataclass
class AgentConfig:
    """Player 1 strategy and its parameters."""
    kind: AgentKind = AgentKind.QFLIP
    scheme: ObservationScheme = ObservationScheme.OPP_LM
    params: AgentParams = field(default_factory=AgentParams)
    reward_scale: float = 5.0


@dataclass
class ExperimentConfig:
    """Declarative description of an experiment.

    Attributes:
        game: Game parameters
        opponent: Renewal strategy of player 0
        agent: Strategy of player 1
        runs: Number of independent runs
        base_seed: Seed of run 0; run k uses base_seed + k
        sample_every: Benefit sampling period in ticks
        output_dir: Folder receiving emitted files
        reference: Optimal average benefit for player 1, None if unknown
        plot_data: Emit two-column plot files
        save_tables: Emit the final Q-table of every QFlip run
    """
    game: GameConfig
    opponent: RenewalSpec
    agent: AgentConfig = field(default_factory=AgentConfig)
    runs: int = 1
    base_seed: int = 0
    sample_every: int = 1000
    output_dir: str = "results"
    reference: Optional[float] = None
    plot_data: bool = True
    save_tables: bool = False

    def seed_for(self, run_index: int) -> int:
        return self.base_seed + run_index


@dataclass
class SweepSpec:
    """Cartesian parameter sweep over an experiment file.

    Attributes:
        base: Raw experiment mapping the axes are applied to
        axes: Dotted field path -> list of values, in declaration order
    """
    base: Dict[str, Any]
    axes: Dict[str, List[Any]]


CSV_HEADER = ("run_id", "seed", "tick", "avg_benefit_1", "avg_benefit_0", "n_1", "n_0", "gain_1", "gain_0")


@dataclass(frozen=True)
class RunRow:
    """One benefit sample of one run."""
    run_id: int
    seed: int
    tick: int
    avg_benefit_1: float
    avg_benefit_0: float
    n_1: int
    n_0: int
    gain_1: int
    gain_0: int

    def as_tuple(self) -> tuple:
        return tuple(getattr(self, name) for name in CSV_HEADER)


@dataclass(frozen=True)
class SeriesPoint:
    """Across-run aggregate at one sampled tick."""
    tick: int
    mean_1: float
    min_1: float
    max_1: float
    mean_0: float
    min_0: float
    max_0: float
    ratio: Optional[float] = None


@dataclass
class ExperimentSummary:
    """Final statistics of an experiment."""
    runs: int
    final_tick: int
    mean_benefit_1: float
    min_benefit_1: float
    max_benefit_1: float
    mean_benefit_0: float
    min_benefit_0: float
    max_benefit_0: float
    reference: Optional[float]
    non_optimal_count: Optional[int]
    dropped_out_count: int = 0
    non_optimal_threshold: float = NON_OPTIMAL_THRESHOLD
    series: List[SeriesPoint] = field(default_factory=list)

    def to_dict(self, with_series: bool = False) -> Dict[str, Any]:
        record = asdict(self)
        if not with_series:
            record.pop("series")
        return record


@dataclass
class RunTrace:
    """Output of one run.

    Attributes:
        run_index: Index of the run in its experiment
        seed: Seed the run used
        rows: Benefit samples in tick order
        dropped_out: The agent stopped playing for good
        table: Final Q-table snapshot, None for agents without one
    """
    run_index: int
    seed: int
    rows: List[RunRow]
    dropped_out: bool = False
    table: Optional[str] = None


@dataclass
class RunResult:
    """Rows of every run plus their summary.

    Attributes:
        rows: Samples sorted by (run_id, tick)
        summary: Aggregated statistics
        tables: Q-table snapshots by run index (only when requested)
    """
    rows: List[RunRow]
    summary: ExperimentSummary
    tables: Dict[int, str] = field(default_factory=dict)
