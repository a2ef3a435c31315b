"""Core experiment logic for the FlipIt simulation lab.

This module runs experiments independently of the command-line interface:
single seeded runs, multi-run experiments with aggregation, and Cartesian
parameter sweeps. ExperimentProcessor wraps them into result dictionaries
for the CLI.
"""
import logging
import multiprocessing
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

import numpy as np

from agents import build_agent
from datatypes import (
    EnvConfig, ExperimentConfig, ExperimentSummary, RewardParams, RunResult, RunRow, RunTrace,
    SeriesPoint, SweepSpec, Transition, NON_OPTIMAL_THRESHOLD,
)
from environment import FlipItEnv
from errors import ConfigurationError, ExperimentError, FlipItLabError
from experimentConfig import load_experiment, load_sweep, parse_experiment, sweep_points
from resultWriter import emit, write_sweep_index, write_sweep_summary
from utils import format_value

logger = logging.getLogger(__name__)


def run_single(config: ExperimentConfig, run_index: int) -> RunTrace:
    """Play one seeded game to the horizon.

    Args:
        config: Validated experiment
        run_index: Index of the run; its seed is base_seed + run_index

    Returns:
        RunTrace: One row every sample_every ticks, plus the agent's final state
    """
    seed = config.seed_for(run_index)
    game = config.game
    env = FlipItEnv(EnvConfig(
        game=game,
        opponent=config.opponent,
        scheme=config.agent.scheme,
        reward=RewardParams(move_cost=game.cost_1, scale=config.agent.reward_scale),
        seed=seed,
    ))
    observation = env.reset()
    agent = build_agent(config.agent, config.opponent, game.cost_1)
    agent.begin(observation, env.agent_rng)

    rows: List[RunRow] = []
    sample_every = config.sample_every
    for tick in range(1, game.horizon + 1):
        action = agent.choose(observation, tick)
        step = env.step(action)
        agent.learn(Transition(observation, action, step.reward, step.observation, step.feedback, tick))
        observation = step.observation
        if tick % sample_every == 0:
            info = step.info
            rows.append(RunRow(
                run_id=run_index,
                seed=seed,
                tick=tick,
                avg_benefit_1=info.benefit[1],
                avg_benefit_0=info.benefit[0],
                n_1=info.moves[1],
                n_0=info.moves[0],
                gain_1=info.gain[1],
                gain_0=info.gain[0],
            ))

    final = rows[-1].avg_benefit_1 if rows else float("nan")
    logger.info("Run %d (seed %d) finished: average benefit %.6f", run_index, seed, final)
    return RunTrace(
        run_index=run_index,
        seed=seed,
        rows=rows,
        dropped_out=agent.dropped_out,
        table=agent.snapshot() if config.save_tables else None,
    )


def _run_job(job: Tuple[ExperimentConfig, int]) -> Tuple[int, Optional[RunTrace], Optional[str]]:
    config, run_index = job
    try:
        return run_index, run_single(config, run_index), None
    except Exception as exc:
        return run_index, None, f"{type(exc).__name__}: {exc}"


def aggregate(config: ExperimentConfig, traces: List[RunTrace]) -> ExperimentSummary:
    """Across-run statistics per sampled tick and at the final sample."""
    traces = sorted(traces, key=lambda trace: trace.run_index)
    benefit_1 = np.array([[row.avg_benefit_1 for row in trace.rows] for trace in traces], dtype=float)
    benefit_0 = np.array([[row.avg_benefit_0 for row in trace.rows] for trace in traces], dtype=float)
    ticks = [row.tick for row in traces[0].rows]
    reference = config.reference

    series = []
    for column, tick in enumerate(ticks):
        mean_1 = float(benefit_1[:, column].mean())
        series.append(SeriesPoint(
            tick=tick,
            mean_1=mean_1,
            min_1=float(benefit_1[:, column].min()),
            max_1=float(benefit_1[:, column].max()),
            mean_0=float(benefit_0[:, column].mean()),
            min_0=float(benefit_0[:, column].min()),
            max_0=float(benefit_0[:, column].max()),
            ratio=mean_1 / reference if reference else None,
        ))

    final_1 = benefit_1[:, -1]
    final_0 = benefit_0[:, -1]
    non_optimal = None
    if reference is not None:
        non_optimal = int(np.sum(final_1 < reference - NON_OPTIMAL_THRESHOLD))
    return ExperimentSummary(
        runs=len(traces),
        final_tick=ticks[-1],
        mean_benefit_1=float(final_1.mean()),
        min_benefit_1=float(final_1.min()),
        max_benefit_1=float(final_1.max()),
        mean_benefit_0=float(final_0.mean()),
        min_benefit_0=float(final_0.min()),
        max_benefit_0=float(final_0.max()),
        reference=reference,
        non_optimal_count=non_optimal,
        dropped_out_count=sum(1 for trace in traces if trace.dropped_out),
        series=series,
    )


def run_experiment(config: ExperimentConfig, jobs: int = 1) -> RunResult:
    """Execute every run of an experiment and aggregate them.

    Args:
        config: Validated experiment
        jobs: Worker processes; runs are independent so any value gives identical results

    Returns:
        RunResult: Rows sorted by (run_id, tick), summary and optional Q-table snapshots

    Raises:
        ExperimentError: If any run fails; no run is silently dropped
    """
    work = [(config, index) for index in range(config.runs)]
    if jobs > 1 and config.runs > 1:
        with multiprocessing.Pool(processes=min(jobs, config.runs)) as pool:
            outcomes = pool.map(_run_job, work)
    else:
        outcomes = [_run_job(job) for job in work]

    traces = []
    for run_index, trace, error in sorted(outcomes, key=lambda outcome: outcome[0]):
        if error is not None:
            raise ExperimentError(run_index, config.seed_for(run_index), error)
        traces.append(trace)

    rows = [row for trace in traces for row in trace.rows]
    tables = {trace.run_index: trace.table for trace in traces if trace.table is not None}
    return RunResult(rows=rows, summary=aggregate(config, traces), tables=tables)


def run_sweep(sweep: SweepSpec, jobs: int = 1, output_dir: Optional[str] = None) -> List[Dict[str, Any]]:
    """Run every grid point of a sweep and write its results.

    Each point gets its own sub-directory below the sweep's output folder;
    index.json maps parameters to files and sweep_summary.csv tabulates the
    final statistics.

    Args:
        sweep: Base experiment and axes
        jobs: Worker processes per experiment
        output_dir: Output folder, defaults to the base experiment's output_dir

    Returns:
        list: Index entries, one per grid point in enumeration order

    Raises:
        ConfigurationError: If any grid point is invalid (checked before running)
        ExperimentError: If a run fails
    """
    # Validate every grid point before the first run
    points = []
    for index, (point, raw) in enumerate(sweep_points(sweep)):
        try:
            points.append((point, parse_experiment(raw)))
        except ConfigurationError as exc:
            label = ", ".join(f"{name}={value!r}" for name, value in point.items())
            raise ConfigurationError(f"{exc.reason} (grid point {index}: {label})", exc.field)

    # Run each point into its own folder
    root = Path(output_dir or points[0][1].output_dir)
    entries = []
    for index, (point, config) in enumerate(points):
        label = "_".join(f"{name.split('.')[-1]}-{format_value(value)}" for name, value in point.items())
        directory = f"point_{index:03d}_{label}"
        logger.info("Sweep point %d/%d: %s", index + 1, len(points), point)
        result = run_experiment(config, jobs)
        files = emit(result, config, root / directory)
        entries.append({
            "index": index,
            "parameters": point,
            "directory": directory,
            "files": {name: str(path.relative_to(root)) for name, path in files.items()},
            "summary": result.summary.to_dict(),
        })

    # Index and summary table
    write_sweep_index(root, sweep, entries)
    write_sweep_summary(root, list(sweep.axes), entries)
    return entries


class ExperimentProcessor:
    """Standalone runner used by the CLI.

    Args:
        config_path: Experiment or sweep file
        overrides: Dotted-path overrides from command-line flags (None values ignored)
        jobs: Worker processes
    """

    def __init__(self, config_path: str, overrides: Optional[Mapping[str, Any]] = None, jobs: int = 1):
        self.config_path = config_path
        self.overrides = dict(overrides or {})
        self.jobs = max(1, jobs)

    def _result(self) -> Dict[str, Any]:
        return {'success': False, 'error': None, 'error_kind': None}

    def _fail(self, result: Dict[str, Any], exc: BaseException) -> Dict[str, Any]:
        result['error'] = str(exc)
        result['error_kind'] = 'validation' if isinstance(exc, ConfigurationError) else 'runtime'
        return result

    def validate(self) -> Dict[str, Any]:
        """Load and check the experiment without running it.

        Returns:
            dict: success, config (ExperimentConfig), seeds (per-run seeds), error, error_kind
        """
        result = self._result()
        try:
            config = load_experiment(self.config_path, self.overrides)
        except FlipItLabError as exc:
            return self._fail(result, exc)
        result.update(success=True, config=config, seeds=[config.seed_for(i) for i in range(config.runs)])
        return result

    def simulate(self) -> Dict[str, Any]:
        """Run the experiment and emit its files.

        Returns:
            dict: success, config, summary (ExperimentSummary), files (name -> Path), error, error_kind
        """
        result = self._result()
        try:
            # Load and validate the experiment file
            config = load_experiment(self.config_path, self.overrides)

            # Run all seeds, then write the result files
            run = run_experiment(config, self.jobs)
            files = emit(run, config, Path(config.output_dir))
        except FlipItLabError as exc:
            return self._fail(result, exc)
        except OSError as exc:
            result['error'] = f"Cannot write results: {exc}"
            result['error_kind'] = 'runtime'
            return result
        result.update(success=True, config=config, summary=run.summary, files=files)
        return result

    def sweep(self) -> Dict[str, Any]:
        """Run every grid point of a sweep file.

        Returns:
            dict: success, points (index entries), output_dir, error, error_kind
        """
        result = self._result()
        # The sweep root comes from --out, not from the per-point overrides
        output_dir = self.overrides.pop('output_dir', None)
        try:
            spec = load_sweep(self.config_path, self.overrides)
            entries = run_sweep(spec, self.jobs, output_dir)
        except FlipItLabError as exc:
            return self._fail(result, exc)
        except OSError as exc:
            result['error'] = f"Cannot write results: {exc}"
            result['error_kind'] = 'runtime'
            return result
        root = output_dir or spec.base.get('output_dir', 'results')
        result.update(success=True, points=entries, output_dir=root)
        return result
