"""Writers for experiment results.

One experiment folder holds:
- runs.csv: every benefit sample of every run
- summary.json: resolved configuration and final statistics
- benefit_1.dat / benefit_0.dat / ratio.dat: two-column plot data (tick, value)
- qtable_run<k>.txt: final Q-table of run k, when requested
"""
import csv
import json
import logging
from pathlib import Path
from typing import Any, Dict, List

from datatypes import CSV_HEADER, ExperimentConfig, RunResult, RunRow, SweepSpec
from experimentConfig import to_raw
from version import __version__

logger = logging.getLogger(__name__)

SWEEP_SUMMARY_FIELDS = (
    "mean_benefit_1", "min_benefit_1", "max_benefit_1",
    "mean_benefit_0", "min_benefit_0", "max_benefit_0",
    "non_optimal_count", "dropped_out_count",
)


def write_rows(path: Path, rows: List[RunRow]) -> Path:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow(row.as_tuple())
    return path


def read_rows(path: Path) -> List[RunRow]:
    """Parse a runs.csv file back into RunRow records."""
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        return [
            RunRow(
                run_id=int(record["run_id"]),
                seed=int(record["seed"]),
                tick=int(record["tick"]),
                avg_benefit_1=float(record["avg_benefit_1"]),
                avg_benefit_0=float(record["avg_benefit_0"]),
                n_1=int(record["n_1"]),
                n_0=int(record["n_0"]),
                gain_1=int(record["gain_1"]),
                gain_0=int(record["gain_0"]),
            )
            for record in reader
        ]


def write_series(path: Path, points: List[tuple]) -> Path:
    with open(path, "w", encoding="utf-8") as handle:
        for tick, value in points:
            handle.write(f"{tick} {value!r}\n")
    return path


def emit(result: RunResult, config: ExperimentConfig, out_dir: Path) -> Dict[str, Path]:
    """Write all files of one experiment.

    Args:
        result: Rows and summary of the experiment
        config: The experiment, echoed into summary.json
        out_dir: Target folder, created if missing

    Returns:
        dict: File role -> written path

    Raises:
        OSError: If the folder cannot be created or written
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    files: Dict[str, Path] = {"runs": write_rows(out_dir / "runs.csv", result.rows)}

    summary_path = out_dir / "summary.json"
    record = {"version": __version__, "experiment": to_raw(config), **result.summary.to_dict()}
    summary_path.write_text(json.dumps(record, indent=2) + "\n", encoding="utf-8")
    files["summary"] = summary_path

    if config.plot_data:
        series = result.summary.series
        files["benefit_1"] = write_series(out_dir / "benefit_1.dat", [(p.tick, p.mean_1) for p in series])
        files["benefit_0"] = write_series(out_dir / "benefit_0.dat", [(p.tick, p.mean_0) for p in series])
        if series and series[0].ratio is not None:
            files["ratio"] = write_series(out_dir / "ratio.dat", [(p.tick, p.ratio) for p in series])

    for run_index, snapshot in sorted(result.tables.items()):
        path = out_dir / f"qtable_run{run_index}.txt"
        path.write_text(snapshot, encoding="utf-8")
        files[f"qtable_run{run_index}"] = path

    logger.info("Results written to %s", out_dir)
    return files


def write_sweep_index(root: Path, sweep: SweepSpec, entries: List[Dict[str, Any]]) -> Path:
    """index.json mapping every grid point's parameters to its folder and files."""
    root.mkdir(parents=True, exist_ok=True)
    path = root / "index.json"
    record = {"axes": sweep.axes, "points": entries}
    path.write_text(json.dumps(record, indent=2) + "\n", encoding="utf-8")
    return path


def write_sweep_summary(root: Path, axes: List[str], entries: List[Dict[str, Any]]) -> Path:
    """sweep_summary.csv with one row of final statistics per grid point."""
    path = root / "sweep_summary.csv"
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["point", *axes, *SWEEP_SUMMARY_FIELDS])
        for entry in entries:
            summary = entry["summary"]
            writer.writerow([
                entry["index"],
                *(entry["parameters"][axis] for axis in axes),
                *("" if summary[name] is None else summary[name] for name in SWEEP_SUMMARY_FIELDS),
            ])
    return path
