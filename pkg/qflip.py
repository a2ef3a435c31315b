"""QFlip: tabular Q-learning for the FlipIt agent.

Action choice is epsilon-greedy with an exploration rate that decays with
every visit of a state. States whose value estimates are still (0, 0), and
states in which no opponent move is known yet, use the new-state rule
instead: wait with probability p, move otherwise. Values are sample averages
of the targets r + gamma * max Q(s').
"""
import math
from typing import Dict, Iterator, Optional, Tuple

import numpy as np

from datatypes import AgentParams, Observation, QEntry
from enums import ObservationScheme
from errors import SnapshotParseError

WAIT = 0
MOVE = 1

_PREFIX = {
    ObservationScheme.OPP_LM: "o",
    ObservationScheme.OWN_LM: "w",
    ObservationScheme.COMPOSITE: "c",
}
_SCHEME = {prefix: scheme for scheme, prefix in _PREFIX.items()}


class QTable:
    """Lazily populated map Observation -> QEntry.

    Absent states behave like the default entry q=(0,0), alpha=(0,0), v=0.
    """

    def __init__(self) -> None:
        self.entries: Dict[Observation, QEntry] = {}

    def get(self, state: Observation) -> Optional[QEntry]:
        return self.entries.get(state)

    def entry(self, state: Observation) -> QEntry:
        """Entry of state, created on first access."""
        found = self.entries.get(state)
        if found is None:
            found = self.entries[state] = QEntry()
        return found

    def __contains__(self, state: Observation) -> bool:
        return state in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Observation]:
        return iter(self.entries)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, QTable) and self.entries == other.entries

    def items(self):
        return self.entries.items()


def exploration_rate(params: AgentParams, visits: int) -> float:
    """epsilon' = epsilon * exp(-d * v)."""
    return params.epsilon * math.exp(-params.decay * visits)


def select_action(table: QTable, state: Observation, params: AgentParams, rng: np.random.Generator) -> int:
    """Choose the action for state and count the visit.

    Args:
        table: Q-table, its entry for state is created if needed
        state: Current observation
        params: Hyper-parameters
        rng: The agent's random generator

    Returns:
        int: 0 to wait, 1 to move
    """
    entry = table.entry(state)
    visits = entry.visits
    entry.visits = visits + 1

    if state.opponent_unknown or entry.fresh:
        return MOVE if rng.random() < 1.0 - params.p else WAIT

    epsilon = exploration_rate(params, visits)
    if epsilon > 0.0 and rng.random() < epsilon:
        return int(rng.integers(0, 2))
    return MOVE if entry.q[MOVE] > entry.q[WAIT] else WAIT


def update(
    table: QTable,
    state: Observation,
    action: int,
    reward: float,
    next_state: Observation,
    params: AgentParams,
) -> QTable:
    """Fold one transition into the sample average of Q(state, action).

    Returns:
        QTable: The same table, updated in place
    """
    following = table.get(next_state)
    future = max(following.q) if following is not None else 0.0
    target = reward + params.gamma * future if params.gamma else reward
    entry = table.entry(state)
    entry.alpha[action] += 1
    entry.q[action] += (target - entry.q[action]) / entry.alpha[action]
    return table


def greedy_policy(table: QTable) -> Dict[Observation, Optional[int]]:
    """Best action per state, None for states never updated."""
    policy: Dict[Observation, Optional[int]] = {}
    for state, entry in table.items():
        if entry.alpha[WAIT] == 0 and entry.alpha[MOVE] == 0:
            policy[state] = None
        else:
            policy[state] = MOVE if entry.q[MOVE] > entry.q[WAIT] else WAIT
    return policy


def format_state(state: Observation) -> str:
    prefix = _PREFIX[state.scheme]
    if state.scheme is ObservationScheme.OPP_LM:
        return f"{prefix}:{state.opp}"
    if state.scheme is ObservationScheme.OWN_LM:
        return f"{prefix}:{state.own}"
    return f"{prefix}:{state.own},{state.opp}"


def parse_state(text: str) -> Observation:
    """Inverse of format_state.

    Raises:
        SnapshotParseError: On an unknown prefix or non-integer component
    """
    prefix, sep, body = text.partition(":")
    scheme = _SCHEME.get(prefix)
    if scheme is None or not sep:
        raise SnapshotParseError(f"bad state {text!r}")
    try:
        if scheme is ObservationScheme.COMPOSITE:
            own, opp = body.split(",")
            return Observation(scheme, own=int(own), opp=int(opp))
        value = int(body)
    except ValueError:
        raise SnapshotParseError(f"bad state {text!r}")
    if scheme is ObservationScheme.OPP_LM:
        return Observation(scheme, opp=value)
    return Observation(scheme, own=value)


def _sort_key(state: Observation) -> Tuple:
    return (state.scheme.value, state.own if state.own is not None else 0, state.opp if state.opp is not None else 0)


def serialize(table: QTable) -> str:
    """Snapshot text, one 'state q0 q1 alpha0 alpha1 visits' line per state, sorted by state."""
    lines = []
    for state in sorted(table.entries, key=_sort_key):
        entry = table.entries[state]
        lines.append(
            f"{format_state(state)} {entry.q[0]!r} {entry.q[1]!r} {entry.alpha[0]} {entry.alpha[1]} {entry.visits}"
        )
    return "".join(line + "\n" for line in lines)


def deserialize(text: str) -> QTable:
    """Rebuild a table from serialize() output.

    Raises:
        SnapshotParseError: On malformed lines or duplicate states
    """
    table = QTable()
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        fields = line.split()
        if len(fields) != 6:
            raise SnapshotParseError(f"line {number}: expected 6 fields, got {len(fields)}")
        try:
            state = parse_state(fields[0])
        except SnapshotParseError as exc:
            raise SnapshotParseError(f"line {number}: {exc}")
        try:
            q = [float(fields[1]), float(fields[2])]
            counts = [int(fields[3]), int(fields[4]), int(fields[5])]
        except ValueError:
            raise SnapshotParseError(f"line {number}: non-numeric value")
        if min(counts) < 0:
            raise SnapshotParseError(f"line {number}: negative count")
        if state in table:
            raise SnapshotParseError(f"line {number}: duplicate state {fields[0]}")
        table.entries[state] = QEntry(q=q, alpha=counts[:2], visits=counts[2])
    return table
