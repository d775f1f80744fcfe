from dataclasses import dataclass

import numpy as np
import pandas as pd

from .oracle import GroundTruth
from .trace import RunTrace

SUCCESS_THRESHOLD = 0.10

SUMMARY_COLUMNS = (
    "method",
    "successful",
    "avg_overlap_pct",
    "avg_norm_iters",
    "instances",
    "avg_overlap_successful_pct",
)


class UndefinedRatioError(ValueError):
    pass


def is_success(overlap: float, threshold: float = SUCCESS_THRESHOLD) -> bool:
    return overlap >= threshold


def normalized_iterations(evaluations: int, param_count: int) -> float:
    if param_count < 1:
        raise ValueError(f"param_count must be >= 1, got {param_count}")
    return evaluations / param_count


def approximation_ratio(expectation: float, truth: GroundTruth) -> float:
    """<H> / E_ground for minimisation-form hamiltonians"""

    if truth.ground_energy == 0:
        raise UndefinedRatioError(
            "approximation ratio is undefined when the ground energy is 0"
        )
    return expectation / truth.ground_energy


def iterations_to_threshold(
    trace: RunTrace, threshold: float, param_count: int
) -> float | None:
    """Normalised iterations at the first record reaching ``threshold``"""

    if not 0 < threshold <= 1:
        raise ValueError(f"threshold must lie in (0, 1], got {threshold}")

    for record in trace:
        if record.overlap >= threshold:
            return normalized_iterations(record.t, param_count)
    return None


@dataclass(frozen=True)
class RunOutcome:
    method: str
    instance: str
    trace: RunTrace
    param_count: int
    final_overlap: float


@dataclass(frozen=True)
class SummaryRow:
    method: str
    successful_instances: int
    instances: int
    average_overlap: float
    average_normalized_iterations: float | None
    average_overlap_successful: float | None

    def as_record(self) -> dict:
        return {
            "method": self.method,
            "successful": self.successful_instances,
            "avg_overlap_pct": self.average_overlap,
            "avg_norm_iters": self.average_normalized_iterations,
            "instances": self.instances,
            "avg_overlap_successful_pct": self.average_overlap_successful,
        }


def summarize(
    runs: list[RunOutcome], threshold: float = SUCCESS_THRESHOLD
) -> list[SummaryRow]:
    """
    One row per method, in order of first appearance.

    Success and the overlap columns use each run's final overlap; the
    iteration column averages time-to-threshold over successful runs only
    and is None when no run succeeded.
    """
    if not runs:
        raise ValueError("cannot summarise an empty list of runs")

    by_method: dict[str, list[RunOutcome]] = {}
    for run in runs:
        by_method.setdefault(run.method, []).append(run)

    rows = []
    for method, method_runs in by_method.items():
        finals = np.array([run.final_overlap for run in method_runs])
        successful = [run for run in method_runs if is_success(run.final_overlap, threshold)]

        iterations = [
            iterations_to_threshold(run.trace, threshold, run.param_count)
            for run in successful
        ]
        iterations = [value for value in iterations if value is not None]

        rows.append(
            SummaryRow(
                method=method,
                successful_instances=len(successful),
                instances=len(method_runs),
                average_overlap=float(100.0 * finals.mean()),
                average_normalized_iterations=(
                    float(np.mean(iterations)) if iterations else None
                ),
                average_overlap_successful=(
                    float(100.0 * np.mean([run.final_overlap for run in successful]))
                    if successful
                    else None
                ),
            )
        )

    return rows


def summary_frame(rows: list[SummaryRow]) -> pd.DataFrame:
    return pd.DataFrame([row.as_record() for row in rows], columns=list(SUMMARY_COLUMNS))


def summary_to_csv(rows: list[SummaryRow], file_path: str):
    summary_frame(rows).to_csv(file_path, index=False, float_format="%.6f")
