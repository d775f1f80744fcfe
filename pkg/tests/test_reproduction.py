import dataclasses
import os

import pytest

from harness.experiment import run_experiment
from metrics.evaluation import SummaryRow, summarize
from utils.spec_loader import ExperimentSpecLoader
from utils.vqa_logging import experiment_logger

TEMPLATES_DIR = os.path.join(os.path.dirname(__file__), "..", "experiment_templates")

pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def summaries(tmp_path_factory):
    cache: dict[str, dict[str, SummaryRow]] = {}

    def summary_of(template: str) -> dict[str, SummaryRow]:
        if template not in cache:
            spec = ExperimentSpecLoader(
                os.path.join(TEMPLATES_DIR, f"{template}.json"), experiment_logger
            ).load()
            spec = dataclasses.replace(
                spec, output_dir=str(tmp_path_factory.mktemp(template))
            )
            report = run_experiment(spec, experiment_logger)
            assert report.exit_code == 0
            rows = summarize(report.completed, spec.success_threshold)
            cache[template] = {row.method: row for row in rows}
        return cache[template]

    return summary_of


def ascending_row(rows: dict[str, SummaryRow]) -> SummaryRow:
    (row,) = [row for method, row in rows.items() if method.startswith("ascending-")]
    return row


def test_maxcut_ascending_leads(summaries):
    rows = summaries("maxcut_random")
    ascending = ascending_row(rows)
    constants = [row for method, row in rows.items() if method.startswith("alpha=")]

    assert len(constants) == 4
    for row in constants:
        assert ascending.successful_instances >= row.successful_instances
        assert ascending.average_overlap >= row.average_overlap


def test_numpart_expectation_value_fails(summaries):
    rows = summaries("numpart_n2")
    ascending = ascending_row(rows)

    assert ascending.successful_instances >= rows["alpha=0.1"].successful_instances
    assert rows["alpha=1"].successful_instances <= 0.1 * rows["alpha=1"].instances


def test_portfolio_ascending_succeeds(summaries):
    rows = summaries("portfolio_random")
    ascending = ascending_row(rows)

    assert ascending.successful_instances >= 0.8 * ascending.instances
    assert rows["alpha=1"].successful_instances <= 0.2 * rows["alpha=1"].instances


@pytest.mark.parametrize("template", ["maxcut_random", "numpart_n2", "portfolio_random"])
def test_ascending_reaches_threshold_no_slower(summaries, template):
    rows = summaries(template)
    ascending = ascending_row(rows)
    reference = rows["alpha=0.2"].average_normalized_iterations

    assert ascending.average_normalized_iterations is not None
    if reference is not None:
        assert ascending.average_normalized_iterations <= reference
