import logging

import numpy as np
import pytest
from hypothesis import given, strategies as st

from agents import ScriptedOptimalAgent
from datatypes import EnvConfig, GameConfig, MoveOutcome, Observation, RewardParams, Transition
from enums import MoveKind, ObservationScheme
from environment import MOVE, WAIT, FlipItEnv, compute_reward
from errors import ConfigurationError, SequencingError
from renewal import Exponential, Normal, Periodic, Uniform

PARAMS = RewardParams(move_cost=25, scale=5)


def make_env(scheme=ObservationScheme.OPP_LM, horizon=1000, cost_1=25, opponent=None, seed=0, opponent_moves=None):
    config = EnvConfig(
        game=GameConfig(horizon=horizon, cost_0=1, cost_1=cost_1),
        opponent=opponent or Periodic(50),
        scheme=scheme,
        seed=seed,
    )
    return FlipItEnv(config, opponent_moves=opponent_moves)


@pytest.mark.parametrize("scheme, expected", [
    (ObservationScheme.OPP_LM, Observation(ObservationScheme.OPP_LM, opp=-1)),
    (ObservationScheme.OWN_LM, Observation(ObservationScheme.OWN_LM, own=0)),
    (ObservationScheme.COMPOSITE, Observation(ObservationScheme.COMPOSITE, own=0, opp=-1)),
])
def test_initial_observation(scheme, expected):
    assert make_env(scheme).reset() == expected


def test_reset_rejects_invalid_config():
    with pytest.raises(ConfigurationError) as info:
        make_env(opponent=Periodic(0)).reset()
    assert info.value.field == "opponent.delta"


def test_reset_warns_when_moving_cannot_pay(caplog):
    with caplog.at_level(logging.WARNING):
        make_env(cost_1=60).reset()
    assert "dropping out is optimal" in caplog.text


def test_step_before_reset_is_a_sequencing_error():
    with pytest.raises(SequencingError):
        make_env().step(WAIT)


def test_step_past_horizon_is_a_sequencing_error():
    env = make_env(horizon=3)
    env.reset()
    results = [env.step(WAIT) for _ in range(3)]
    assert [r.terminated for r in results] == [False, False, True]
    with pytest.raises(SequencingError):
        env.step(WAIT)


def test_step_rejects_unknown_action():
    env = make_env()
    env.reset()
    with pytest.raises(ValueError):
        env.step(2)


def test_flip_reveals_last_move_in_next_observation():
    env = make_env(ObservationScheme.COMPOSITE, horizon=20, opponent_moves=[7])
    env.reset()
    for _ in range(9):
        assert env.step(WAIT).reward == 0.0
    result = env.step(MOVE)
    assert result.feedback.kind is MoveKind.FLIP
    assert result.feedback.revealed_opponent_last_move == 7
    assert result.observation == Observation(ObservationScheme.COMPOSITE, own=1, opp=4)
    assert result.info.controller == 1
    assert env.step(WAIT).observation.opp == 5


def test_move_before_any_opponent_move_costs_and_keeps_sentinel():
    env = make_env(horizon=20, opponent_moves=[15])
    env.reset()
    result = env.step(MOVE)
    assert result.reward == -25
    assert result.feedback.kind is MoveKind.FLIP
    assert result.observation.opp == -1


def test_own_observation_counts_ticks_since_own_move():
    env = make_env(ObservationScheme.OWN_LM, horizon=20, opponent_moves=[])
    env.reset()
    assert [env.step(WAIT).observation.own for _ in range(3)] == [1, 2, 3]
    assert env.step(MOVE).observation.own == 1
    assert env.step(WAIT).observation.own == 2


def test_compute_reward_cases():
    flip = MoveOutcome(mover=1, tick=50, kind=MoveKind.FLIP, revealed_opponent_last_move=49)
    consecutive = MoveOutcome(mover=1, tick=60, kind=MoveKind.CONSECUTIVE, revealed_opponent_last_move=49)
    assert compute_reward(WAIT, None, None, PARAMS) == 0.0
    assert compute_reward(MOVE, consecutive, 50, PARAMS) == -25
    assert compute_reward(MOVE, flip, None, PARAMS) == 5.0
    assert compute_reward(MOVE, MoveOutcome(1, 101, MoveKind.FLIP, 100), 51, PARAMS) == 5.0
    with pytest.raises(ValueError):
        compute_reward(MOVE, None, None, PARAMS)


def test_reward_table_in_steady_optimal_play():
    """Against Per(50) every flip one tick late pays 5.0 and every premature move -25."""
    env = make_env(horizon=20000, seed=4)
    agent = ScriptedOptimalAgent(Periodic(50), 25)
    observation = env.reset()
    agent.begin(observation, env.agent_rng)
    flips, premature = [], []
    captures = 0
    for tick in range(1, 20001):
        action = agent.choose(observation, tick)
        injected = action == WAIT and observation.opp is not None and 2 <= observation.opp <= 50 and tick % 97 == 0
        if injected:
            action = MOVE
        result = env.step(action)
        if action == MOVE:
            if result.feedback.kind is MoveKind.FLIP:
                captures += 1
                # with phase 1 the opponent retakes tick 51, so the second capture is still off-rhythm
                if captures > 2:
                    flips.append(result.reward)
            else:
                premature.append(result.reward)
        agent.learn(Transition(observation, action, result.reward, result.observation, result.feedback, tick))
        observation = result.observation
    assert len(flips) > 350
    assert premature
    assert set(flips) == {5.0}
    assert set(premature) == {-25.0}


def test_moves_at_known_age_up_to_period_are_always_consecutive():
    env = make_env(horizon=30000, seed=9)
    observation = env.reset()
    seen = 0
    for tick in range(1, 30001):
        action = MOVE if tick % 7 == 0 else WAIT
        result = env.step(action)
        if action == MOVE and observation.opp is not None and 1 <= observation.opp <= 50:
            seen += 1
            assert result.reward == -25
            assert result.feedback.kind is MoveKind.CONSECUTIVE
        observation = result.observation
    assert seen > 1000


def test_runs_are_deterministic_per_seed():
    def trace(seed):
        env = make_env(ObservationScheme.COMPOSITE, horizon=2000, opponent=Exponential(0.01), seed=seed)
        env.reset()
        return [(r.observation, r.reward) for r in (env.step(MOVE if t % 13 == 0 else WAIT) for t in range(1, 2001))]

    assert trace(3) == trace(3)
    assert trace(3) != trace(4)


def test_transition_has_no_ground_truth():
    assert "info" not in Transition.__dataclass_fields__


@given(
    st.sets(st.integers(min_value=1, max_value=200), max_size=40),
    st.sets(st.integers(min_value=1, max_value=200), max_size=40),
    st.data(),
)
def test_unrevealed_opponent_moves_never_reach_the_agent(agent_ticks, opponent_ticks, data):
    """Dropping opponent moves no agent move ever reveals leaves the agent's view unchanged."""
    revealed = set()
    for tick in agent_ticks:
        earlier = [t for t in opponent_ticks if t < tick]
        if earlier:
            revealed.add(max(earlier))
    hidden = sorted(opponent_ticks - revealed)
    dropped = set(data.draw(st.lists(st.sampled_from(hidden), unique=True)) if hidden else [])

    def agent_view(moves):
        env = make_env(ObservationScheme.COMPOSITE, horizon=200, cost_1=5, opponent_moves=moves)
        view = [env.reset()]
        for tick in range(1, 201):
            result = env.step(MOVE if tick in agent_ticks else WAIT)
            feedback = None if result.feedback is None else (result.feedback.kind, result.feedback.revealed_opponent_last_move)
            view.append((result.observation, result.reward, feedback))
        return view

    assert agent_view(sorted(opponent_ticks)) == agent_view(sorted(opponent_ticks - dropped))


def test_state_after_a_full_period_keeps_recurring():
    """With moves at rate 0.1 against Per(50), state 51 is seen in every stretch of the run."""
    env = make_env(horizon=50000, seed=21)
    env.reset()
    chooser = np.random.default_rng(21)
    visits = [0] * 5
    for tick in range(1, 50001):
        result = env.step(MOVE if chooser.random() < 0.1 else WAIT)
        if result.observation.opp == 51:
            visits[(tick - 1) // 10000] += 1
    assert min(visits) >= 30
    assert sum(visits) / 50000 >= 0.005


opponents = st.one_of(
    st.builds(Periodic, st.integers(min_value=1, max_value=60)),
    st.builds(Exponential, st.floats(min_value=0.005, max_value=0.5)),
    st.builds(Uniform, st.floats(min_value=20, max_value=80), st.floats(min_value=1, max_value=40)),
    st.builds(Normal, st.floats(min_value=5, max_value=80), st.floats(min_value=1, max_value=20)),
)


@given(
    opponents,
    st.floats(min_value=0.1, max_value=100),
    st.floats(min_value=0.5, max_value=10),
    st.lists(st.booleans(), min_size=150, max_size=150),
    st.integers(min_value=0, max_value=2 ** 32),
)
def test_rewards_stay_within_their_bounds(opponent, cost_1, scale, moves, seed):
    env = FlipItEnv(EnvConfig(
        game=GameConfig(horizon=150, cost_0=1, cost_1=cost_1),
        opponent=opponent,
        reward=RewardParams(move_cost=cost_1, scale=scale),
        seed=seed,
    ))
    env.reset()
    for move in moves:
        result = env.step(MOVE if move else WAIT)
        if not move:
            assert result.reward == 0.0
            continue
        feedback = result.feedback
        if feedback.kind is MoveKind.CONSECUTIVE or feedback.revealed_opponent_last_move is None:
            assert result.reward == -cost_1
            continue
        credited = result.reward * scale + cost_1
        assert result.reward > -cost_1 / scale
        assert credited == pytest.approx(round(credited), abs=1e-6)
        assert round(credited) >= 1
