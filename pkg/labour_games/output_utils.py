"""Console output, logging setup, and deterministic result files."""

import csv
import io
import logging
import os
import sys
from pathlib import Path

from . import run_messages
from . import sim_engine
from .command_errors import OutputError


logger = logging.getLogger(__name__)

RUN_FILES = ("series.csv", "beveridge.csv", "summary.txt", "steady_state.txt")


def configure_logging(verbose=False):
    """Log to stderr; --verbose shows per-period detail."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def write_output(output):
    """Write progress to the console, and record it in the log."""
    output_str = output if isinstance(output, str) else str(output)
    for line in output_str.splitlines():
        logger.info(line)
    print(output_str)


def format_value(value):
    """Fixed, locale-free formatting: integers as-is, floats to 9 significant digits."""
    if isinstance(value, tuple):
        return ";".join(format_value(v) for v in value)
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    return f"{value:.9g}"


def csv_text(columns, rows, comment=""):
    """CSV with an optional '#' comment line above the header."""
    buffer = io.StringIO()
    if comment:
        buffer.write(f"# {comment}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(value) for value in row])
    return buffer.getvalue()


def write_atomic(path, text):
    """Write UTF-8 text with "\n" line endings through a temporary file, then rename it into place."""
    path = Path(path)
    tmp_path = path.with_name(f".{path.name}.tmp")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp_path.write_bytes(text.encode("utf-8"))
        os.replace(tmp_path, path)
    except OSError as exc:
        if tmp_path.exists():
            tmp_path.unlink()
        raise OutputError(f"Could not write {path.as_posix()}: {exc.strerror or exc}") from exc


def series_csv(series):
    rows = [[getattr(row, name) for name in sim_engine.SERIES_COLUMNS] for row in series.rows]
    comment = "columns: " + ", ".join(sim_engine.SERIES_COLUMNS) + "; prices are ';'-separated per firm"
    return csv_text(sim_engine.SERIES_COLUMNS, rows, comment)


def beveridge_csv(series):
    points = sim_engine.beveridge_points(series)
    rows = [(row.t, u, v) for row, (u, v) in zip(series.rows, points)]
    return csv_text(("t", "u_rate", "v_rate"), rows, "one Beveridge observation per period")


def steady_state_analysis(scenario, series):
    """Whole-run, pre-shock, and post-shock steady states plus the wage-gap half-life."""
    window, tol = scenario.output.steady_window, scenario.output.steady_tol
    analysis = {"run": None, "pre_shock": None, "post_shock": None, "half_life": None}
    if len(series) >= window:
        analysis["run"] = sim_engine.detect_steady_state(series, window, tol)

    if scenario.shocks:
        first = min(shock.start for shock in scenario.shocks)
        last = max(shock.start + shock.duration for shock in scenario.shocks)
        analysis["pre_shock"] = sim_engine.steady_state_between(series, 0, first, window, tol)
        analysis["post_shock"] = sim_engine.steady_state_between(series, last, scenario.periods, window, tol)
        if first >= 1:
            analysis["half_life"] = sim_engine.wage_gap_half_life(series, first)
    return analysis


def steady_state_text(analysis):
    lines = [run_messages.steady_state_report("run", analysis["run"])]
    for label in ("pre_shock", "post_shock"):
        if analysis[label] is not None:
            lines.append(run_messages.steady_state_report(label, analysis[label]))
    return "\n".join(lines) + "\n"


def write_run_outputs(out_dir, scenario, series):
    """Write the four run files; returns the analysis used for the summary."""
    out_dir = Path(out_dir)
    analysis = steady_state_analysis(scenario, series)
    summary = run_messages.run_summary(scenario, series, analysis["run"], analysis["half_life"])

    write_atomic(out_dir / "series.csv", series_csv(series))
    write_atomic(out_dir / "beveridge.csv", beveridge_csv(series))
    write_atomic(out_dir / "summary.txt", summary.lstrip("\n"))
    write_atomic(out_dir / "steady_state.txt", steady_state_text(analysis))
    return analysis
