"""Experiment documents in, ensemble reports and trajectory tables out."""

import csv
import io
import json
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Iterator, Literal, TextIO, Union

from pydantic import ValidationError

from app.config import get_logger, settings
from app.errors import ConfigError, InvalidSpec, ReportIOError
from app.models.dynamics import Trajectory
from app.models.experiment import EnsembleSummary, ExperimentConfig
from app.services.scenario_service import check_scenario

logger = get_logger(__name__)

Destination = Union[str, Path, TextIO]

CSV_COLUMNS = (
    "run_id",
    "scenario",
    "controller",
    "displacement",
    "burden_displacement",
    "paths_ok",
    "floor_ok",
    "capacity_ok",
    "burden_ok",
    "classification",
)
TRAJECTORY_COLUMNS = ("time", "path_id", "rate")
FAILED = "Failed"


def parse_config(document: Union[str, bytes, dict]) -> ExperimentConfig:
    """
    Validate an experiment document (JSON text or an already parsed mapping).

    Raises:
        ConfigError: On malformed JSON, unknown keys, violated field constraints or
            an invalid scenario.
    """
    try:
        if isinstance(document, (str, bytes)):
            cfg = ExperimentConfig.model_validate_json(document)
        else:
            cfg = ExperimentConfig.model_validate(document)
        check_scenario(cfg.scenario)
    except ValidationError as e:
        raise ConfigError(f"invalid experiment configuration: {e}") from e
    except InvalidSpec as e:
        raise ConfigError(f"invalid scenario: {e}") from e
    return cfg


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    """
    Read and validate a UTF-8 JSON experiment document.

    Raises:
        ConfigError: If the file cannot be read or is not a valid document.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigError(f"cannot read configuration {path}: {e}") from e
    return parse_config(text)


def dump_config(cfg: ExperimentConfig) -> str:
    return json.dumps(cfg.model_dump(mode="json"), indent=2) + "\n"


def significant(value: float) -> float:
    """Round to settings.REPORT_SIGNIFICANT_DIGITS significant digits."""
    return float(format(value, f".{settings.REPORT_SIGNIFICANT_DIGITS}g"))


def summary_document(summary: EnsembleSummary) -> dict[str, Any]:
    """JSON-ready nested document with every float rounded to the report precision."""
    return _round_floats(summary.model_dump(mode="json"))


def emit_report(
    summary: EnsembleSummary,
    format: Literal["csv", "json"],
    dest: Destination,
):
    """
    Write an ensemble summary as CSV (one row per run) or JSON (full reports).

    Args:
        summary: The ensemble summary.
        format: "csv" or "json".
        dest: File path or writable text stream.

    Raises:
        ValueError: On an unknown format.
        ReportIOError: If the destination cannot be written.
    """
    if format == "json":
        text = json.dumps(summary_document(summary), indent=2) + "\n"
    elif format == "csv":
        text = _summary_csv(summary)
    else:
        raise ValueError(f"unknown report format: {format}")

    with _open_destination(dest) as stream:
        stream.write(text)
    logger.info(f"Wrote {format} report with {len(summary.runs)} runs")


def export_trajectory_csv(traj: Trajectory, dest: Destination):
    """
    Write trajectory samples as (time, path_id, rate) rows.

    Raises:
        ReportIOError: If the destination cannot be written.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(TRAJECTORY_COLUMNS)
    for t, row in zip(traj.times, traj.rates):
        time_text = _number(float(t))
        for path_id, rate in zip(traj.path_ids, row):
            writer.writerow((time_text, path_id, _number(float(rate))))

    with _open_destination(dest) as stream:
        stream.write(buffer.getvalue())
    logger.info(f"Wrote trajectory with {traj.n_samples} samples")


def _summary_csv(summary: EnsembleSummary) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(CSV_COLUMNS)
    for run in summary.runs:
        report = run.report
        if report is None:
            writer.writerow(
                (run.run_id, run.scenario, run.controller, "", "", "", "", "", "", FAILED)
            )
            continue
        verdicts = report.constraint_verdicts
        writer.writerow(
            (
                run.run_id,
                run.scenario,
                run.controller,
                _number(report.displacement),
                _number(report.burden_displacement),
                _flag(verdicts.paths_ok),
                _flag(verdicts.floor_ok),
                _flag(verdicts.capacity_ok),
                _flag(verdicts.burden_ok),
                report.classification.value,
            )
        )
    return buffer.getvalue()


def _number(value: float) -> str:
    return format(value, f".{settings.REPORT_SIGNIFICANT_DIGITS}g")


def _flag(value: bool) -> str:
    return "true" if value else "false"


def _round_floats(node: Any) -> Any:
    if isinstance(node, float):
        return significant(node)
    if isinstance(node, dict):
        return {key: _round_floats(value) for key, value in node.items()}
    if isinstance(node, list):
        return [_round_floats(value) for value in node]
    return node


@contextmanager
def _open_destination(dest: Destination) -> Iterator[TextIO]:
    if isinstance(dest, (str, Path)):
        try:
            with open(dest, "w", encoding="utf-8", newline="") as stream:
                yield stream
        except OSError as e:
            raise ReportIOError(f"cannot write {dest}: {e}") from e
    else:
        try:
            yield dest
        except OSError as e:
            raise ReportIOError(f"cannot write report: {e}") from e
