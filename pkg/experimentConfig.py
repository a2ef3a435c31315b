"""Loading and validation of experiment and sweep files.

Experiment files are JSON mappings (YAML is accepted for .yaml/.yml files).
Every validation error carries the dotted path of the offending field, e.g.
'game.cost_1' or 'agent.epsilon'.
"""
import copy
import itertools
import json
from pathlib import Path
from typing import Any, Dict, Iterator, List, Mapping, Optional, Tuple

import yaml

from datatypes import AgentConfig, AgentParams, ExperimentConfig, GameConfig, SweepSpec
from enums import AgentKind, ObservationScheme
from errors import ConfigurationError
from oracles import reference_benefit
from renewal import spec_from_dict
from utils import default_seed, set_path

TOP_LEVEL_KEYS = {
    "game", "opponent", "agent", "runs", "base_seed", "sample_every",
    "output_dir", "reference", "plot_data", "save_tables",
}
GAME_KEYS = {"horizon", "cost_0", "cost_1", "initial_controller", "tie_winner"}
AGENT_KEYS = {"kind", "scheme", "gamma", "epsilon", "decay", "p", "c"}


def read_mapping(path: str) -> Dict[str, Any]:
    """Read a JSON or YAML file holding a mapping.

    Raises:
        ConfigurationError: If the file is missing, unreadable or not a mapping
    """
    file_path = Path(path)
    if not file_path.is_file():
        raise ConfigurationError(f"configuration file not found: {file_path}")
    try:
        text = file_path.read_text(encoding="utf-8")
        if file_path.suffix.lower() in (".yaml", ".yml"):
            data = yaml.safe_load(text)
        else:
            data = json.loads(text)
    except (OSError, json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ConfigurationError(f"cannot parse {file_path}: {exc}")
    if not isinstance(data, dict):
        raise ConfigurationError(f"{file_path} must hold a mapping at top level")
    return data


def _section(raw: Mapping[str, Any], name: str, allowed: Optional[set] = None) -> Dict[str, Any]:
    section = raw.get(name, {})
    if not isinstance(section, dict):
        raise ConfigurationError("must be a mapping", name)
    if allowed is not None:
        unknown = sorted(set(section) - allowed)
        if unknown:
            raise ConfigurationError(f"unexpected key {unknown[0]!r}", f"{name}.{unknown[0]}")
    return section


def _number(section: Mapping[str, Any], key: str, path: str, default: Any = None, integer: bool = False) -> Any:
    if key not in section:
        if default is None:
            raise ConfigurationError("is required", path)
        return default
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigurationError(f"must be a number, got {value!r}", path)
    if integer:
        if isinstance(value, float) and not value.is_integer():
            raise ConfigurationError(f"must be an integer, got {value!r}", path)
        return int(value)
    return float(value)


def _flag(raw: Mapping[str, Any], key: str, default: bool) -> bool:
    value = raw.get(key, default)
    if not isinstance(value, bool):
        raise ConfigurationError(f"must be true or false, got {value!r}", key)
    return value


def parse_game(raw: Mapping[str, Any]) -> GameConfig:
    section = _section(raw, "game", GAME_KEYS)
    game = GameConfig(
        horizon=_number(section, "horizon", "game.horizon", integer=True),
        cost_0=_number(section, "cost_0", "game.cost_0", default=1.0),
        cost_1=_number(section, "cost_1", "game.cost_1"),
        initial_controller=_number(section, "initial_controller", "game.initial_controller", default=0, integer=True),
        tie_winner=_number(section, "tie_winner", "game.tie_winner", default=0, integer=True),
    )
    try:
        game.validate()
    except ConfigurationError as exc:
        raise exc.under("game")
    return game


def parse_agent(raw: Mapping[str, Any]) -> AgentConfig:
    section = _section(raw, "agent", AGENT_KEYS)
    try:
        kind = AgentKind(section.get("kind", AgentKind.QFLIP.value))
    except ValueError:
        choices = ", ".join(k.value for k in AgentKind)
        raise ConfigurationError(f"unknown agent {section.get('kind')!r} (expected one of {choices})", "agent.kind")
    try:
        scheme = ObservationScheme(section.get("scheme", ObservationScheme.OPP_LM.value))
    except ValueError:
        choices = ", ".join(s.value for s in ObservationScheme)
        raise ConfigurationError(f"unknown scheme {section.get('scheme')!r} (expected one of {choices})", "agent.scheme")
    defaults = AgentParams()
    params = AgentParams(
        gamma=_number(section, "gamma", "agent.gamma", default=defaults.gamma),
        epsilon=_number(section, "epsilon", "agent.epsilon", default=defaults.epsilon),
        decay=_number(section, "decay", "agent.decay", default=defaults.decay),
        p=_number(section, "p", "agent.p", default=defaults.p),
    )
    try:
        params.validate()
    except ConfigurationError as exc:
        raise exc.under("agent")
    scale = _number(section, "c", "agent.c", default=5.0)
    if not scale > 0:
        raise ConfigurationError(f"must be > 0, got {scale!r}", "agent.c")
    return AgentConfig(kind=kind, scheme=scheme, params=params, reward_scale=scale)


def parse_experiment(raw: Mapping[str, Any], environ: Optional[Mapping[str, str]] = None) -> ExperimentConfig:
    """Build a validated ExperimentConfig from its raw mapping.

    Args:
        raw: Experiment mapping as read from the file
        environ: Environment for the FLIPIT_LAB_SEED default (os.environ if None)

    Returns:
        ExperimentConfig: Validated configuration, reference filled from the oracles when omitted

    Raises:
        ConfigurationError: On the first invalid field
    """
    if not isinstance(raw, Mapping):
        raise ConfigurationError("experiment must be a mapping")
    unknown = sorted(set(raw) - TOP_LEVEL_KEYS)
    if unknown:
        raise ConfigurationError("unexpected key", unknown[0])

    game = parse_game(raw)
    if "opponent" not in raw:
        raise ConfigurationError("is required", "opponent")
    try:
        opponent = spec_from_dict(raw["opponent"])
    except ConfigurationError as exc:
        raise exc.under("opponent")
    agent = parse_agent(raw)

    try:
        seed_default = default_seed(environ)
    except ValueError as exc:
        raise ConfigurationError(str(exc), "base_seed")
    runs = _number(raw, "runs", "runs", default=1, integer=True)
    base_seed = _number(raw, "base_seed", "base_seed", default=seed_default, integer=True)
    sample_every = _number(raw, "sample_every", "sample_every", default=1000, integer=True)
    if runs < 1:
        raise ConfigurationError(f"must be >= 1, got {runs}", "runs")
    if base_seed < 0:
        raise ConfigurationError(f"must be >= 0, got {base_seed}", "base_seed")
    if sample_every < 1:
        raise ConfigurationError(f"must be >= 1, got {sample_every}", "sample_every")
    if sample_every > game.horizon:
        raise ConfigurationError(f"must not exceed game.horizon ({game.horizon}), got {sample_every}", "sample_every")

    output_dir = raw.get("output_dir", "results")
    if not isinstance(output_dir, str) or not output_dir:
        raise ConfigurationError("must be a non-empty path", "output_dir")

    reference = raw.get("reference")
    if reference is None:
        reference = reference_benefit(opponent, game.cost_1)
    elif isinstance(reference, bool) or not isinstance(reference, (int, float)):
        raise ConfigurationError(f"must be a number or null, got {reference!r}", "reference")
    else:
        reference = float(reference)

    if agent.kind is AgentKind.SCRIPTED_OPTIMAL and opponent.distribution.value not in ("periodic", "exponential"):
        raise ConfigurationError(
            f"scripted-optimal needs a periodic or exponential opponent, got {opponent.distribution.value}", "agent.kind"
        )

    return ExperimentConfig(
        game=game,
        opponent=opponent,
        agent=agent,
        runs=runs,
        base_seed=base_seed,
        sample_every=sample_every,
        output_dir=output_dir,
        reference=reference,
        plot_data=_flag(raw, "plot_data", True),
        save_tables=_flag(raw, "save_tables", False),
    )


def apply_overrides(raw: Dict[str, Any], overrides: Mapping[str, Any]) -> Dict[str, Any]:
    """Copy of raw with dotted-path overrides applied; None values are skipped."""
    updated = copy.deepcopy(raw)
    for path, value in overrides.items():
        if value is not None:
            set_path(updated, path, value)
    return updated


def load_experiment(
    path: str,
    overrides: Optional[Mapping[str, Any]] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> ExperimentConfig:
    """Read, override and validate an experiment file."""
    raw = apply_overrides(read_mapping(path), overrides or {})
    return parse_experiment(raw, environ)


def parse_sweep(raw: Mapping[str, Any]) -> SweepSpec:
    """Validate the shape of a sweep mapping {'base': ..., 'axes': {...}}."""
    unknown = sorted(set(raw) - {"base", "axes"})
    if unknown:
        raise ConfigurationError("unexpected key", unknown[0])
    base = raw.get("base")
    if not isinstance(base, dict):
        raise ConfigurationError("must be an experiment mapping", "base")
    axes = raw.get("axes")
    if not isinstance(axes, dict) or not axes:
        raise ConfigurationError("must name at least one axis", "axes")
    for name, values in axes.items():
        if not isinstance(values, list) or not values:
            raise ConfigurationError("must be a non-empty list of values", f"axes.{name}")
    return SweepSpec(base=copy.deepcopy(base), axes={name: list(values) for name, values in axes.items()})


def load_sweep(path: str, overrides: Optional[Mapping[str, Any]] = None) -> SweepSpec:
    raw = read_mapping(path)
    sweep = parse_sweep(raw)
    sweep.base = apply_overrides(sweep.base, overrides or {})
    return sweep


def sweep_points(sweep: SweepSpec) -> Iterator[Tuple[Dict[str, Any], Dict[str, Any]]]:
    """Yield (axis values, raw experiment) for every grid point, first axis slowest."""
    names: List[str] = list(sweep.axes)
    for values in itertools.product(*(sweep.axes[name] for name in names)):
        point = dict(zip(names, values))
        raw = copy.deepcopy(sweep.base)
        for path, value in point.items():
            set_path(raw, path, value)
        yield point, raw


def to_raw(config: ExperimentConfig) -> Dict[str, Any]:
    """Fully resolved experiment mapping; parse_experiment(to_raw(c)) rebuilds c."""
    game = config.game
    agent = config.agent
    return {
        "game": {
            "horizon": game.horizon,
            "cost_0": game.cost_0,
            "cost_1": game.cost_1,
            "initial_controller": game.initial_controller,
            "tie_winner": game.tie_winner,
        },
        "opponent": config.opponent.to_dict(),
        "agent": {
            "kind": agent.kind.value,
            "scheme": agent.scheme.value,
            "gamma": agent.params.gamma,
            "epsilon": agent.params.epsilon,
            "decay": agent.params.decay,
            "p": agent.params.p,
            "c": agent.reward_scale,
        },
        "runs": config.runs,
        "base_seed": config.base_seed,
        "sample_every": config.sample_every,
        "output_dir": config.output_dir,
        "reference": config.reference,
        "plot_data": config.plot_data,
        "save_tables": config.save_tables,
    }
