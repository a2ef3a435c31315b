"""Enumeration definitions for FlipIt game elements.

This module defines enumerations used throughout the application
to categorize moves, observation schemes, opponent distributions and agents.
"""
from enum import Enum


class MoveKind(Enum):
    """Effect of a move on resource control.

    Attributes:
        FLIP: The opponent controlled the resource just before the move
        CONSECUTIVE: The mover already controlled the resource (wasted cost)
    """
    FLIP = "flip"
    CONSECUTIVE = "consecutive"


class ObservationScheme(Enum):
    """What the adaptive agent observes between moves.

    Attributes:
        OPP_LM: Time since the opponent's last known move
        OWN_LM: Time since the agent's own last move
        COMPOSITE: Both of the above
    """
    OPP_LM = "oppLM"
    OWN_LM = "ownLM"
    COMPOSITE = "composite"


class Distribution(Enum):
    """Renewal distributions available for the opponent."""
    PERIODIC = "periodic"
    EXPONENTIAL = "exponential"
    UNIFORM = "uniform"
    NORMAL = "normal"


class AgentKind(Enum):
    """Strategies available for player 1."""
    QFLIP = "qflip"
    GREEDY = "greedy"
    SCRIPTED_OPTIMAL = "scripted-optimal"
    NONE = "none"
