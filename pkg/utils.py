"""Utility functions for logging setup, seeding and dotted configuration paths."""
import logging
import os
import sys
from typing import Any, Dict, MutableMapping, Optional, Tuple

import numpy as np

SEED_ENV_VAR = "FLIPIT_LAB_SEED"
LOG_FORMAT = "[%(levelname)s] %(message)s"


def configure_logging(verbose: int = 0) -> None:
    """Send library log records to stderr as '[LEVEL] message' lines.

    Args:
        verbose: 0 = warnings only, 1 = info, 2 or more = debug
    """
    level = logging.WARNING if verbose <= 0 else logging.INFO if verbose == 1 else logging.DEBUG
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_flipit_lab", False):
            root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._flipit_lab = True
    root.addHandler(handler)
    root.setLevel(level)


def default_seed(environ: Optional[MutableMapping[str, str]] = None) -> int:
    """Base seed from FLIPIT_LAB_SEED, 0 when unset.

    Raises:
        ValueError: If the variable is set but not an integer
    """
    environ = os.environ if environ is None else environ
    raw = environ.get(SEED_ENV_VAR, "").strip()
    if not raw:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}")


def spawn_generators(seed: int) -> Tuple[np.random.Generator, np.random.Generator]:
    """Independent (opponent, agent) generators derived from one run seed."""
    opponent_seq, agent_seq = np.random.SeedSequence(seed).spawn(2)
    return np.random.Generator(np.random.PCG64(opponent_seq)), np.random.Generator(np.random.PCG64(agent_seq))


def set_path(mapping: Dict[str, Any], dotted: str, value: Any) -> None:
    """Set a dotted key path, creating intermediate mappings as needed."""
    keys = dotted.split(".")
    node = mapping
    for key in keys[:-1]:
        child = node.get(key)
        if not isinstance(child, dict):
            child = {}
            node[key] = child
        node = child
    node[keys[-1]] = value


def format_value(value: Any) -> str:
    """Short filesystem-friendly rendering of a sweep axis value."""
    if isinstance(value, float):
        text = repr(value)
    else:
        text = str(value)
    return "".join(ch if ch.isalnum() or ch in "-." else "_" for ch in text)
