import json
import os

import pandas as pd

from metrics.evaluation import normalized_iterations
from metrics.trace import TRACE_COLUMNS

from .output import write_frame

PLOT_SUFFIXES = ("_iterations.csv", "_shots.csv")


class MissingTracesError(FileNotFoundError):
    pass


def find_traces(root: str) -> list[str]:
    """Every run trace CSV under ``root`` (files with a sibling run JSON), sorted"""

    if not os.path.isdir(root):
        raise MissingTracesError(f"{root} is not a directory")

    traces = []
    for directory, _, files in os.walk(root):
        for name in files:
            if not name.endswith(".csv") or name.endswith(PLOT_SUFFIXES):
                continue
            stem = os.path.splitext(name)[0]
            if os.path.exists(os.path.join(directory, f"{stem}.json")):
                traces.append(os.path.join(directory, name))

    if not traces:
        raise MissingTracesError(f"no run traces found under {root}")
    return sorted(traces)


def _param_count(trace_path: str) -> int:
    with open(os.path.splitext(trace_path)[0] + ".json", "r", encoding="utf-8") as f:
        return int(json.load(f)["param_count"])


def emit_plot_data(root: str, logger) -> list[str]:
    """
    Two curve files per run trace, written next to it:
      <method>_iterations.csv  normalized_iteration,overlap
      <method>_shots.csv       cumulative_shots,overlap

    The normalised iteration of a row counts the evaluations made up to and
    including it, so a 200-evaluation trace of 20 parameters ends at 10.0.
    """
    written = []

    for trace_path in find_traces(root):
        frame = pd.read_csv(trace_path)
        missing = set(TRACE_COLUMNS) - set(frame.columns)
        if missing:
            raise MissingTracesError(f"{trace_path} lacks trace columns {sorted(missing)}")

        param_count = _param_count(trace_path)
        stem = os.path.splitext(trace_path)[0]

        iterations = pd.DataFrame(
            {
                "normalized_iteration": [
                    normalized_iterations(t + 1, param_count) for t in frame["t"]
                ],
                "overlap": frame["overlap"],
            }
        )
        shots = frame[["cumulative_shots", "overlap"]]

        write_frame(iterations, f"{stem}_iterations.csv")
        write_frame(shots, f"{stem}_shots.csv")
        written.extend([f"{stem}_iterations.csv", f"{stem}_shots.csv"])

    logger.info(f"Wrote {len(written)} curve files under {root}")
    return written
