from dataclasses import dataclass, field

import numpy as np

from ansatz.ansatz_base import AnsatzMixin, ParameterVector
from metrics.oracle import GroundTruth, brute_force_ground, overlap
from metrics.trace import RunTrace
from objective.cvar import ObjectiveSpec, evaluate
from optimizer.cobyla import OptimizerConfig, minimize
from problems.hamiltonians import DiagonalHamiltonian
from quantum_sim.random_source import RandomSource
from utils.vqa_logging import simulation_logger

from .ascending import (
    CAP_SLACK,
    AscendingSchedule,
    alpha_sequence,
    stage_budgets,
    thin_alphas,
)


@dataclass(frozen=True)
class StoppingRule:
    """
    Global stop: the evaluation budget is spent, or (when ``threshold_overlap``
    is set) the tracked overlap reached it while alpha sits at ``alpha_cap``.
    """

    budget: int
    threshold_overlap: float | None = None
    alpha_cap: float = 1.0


def stopping_condition(trace: RunTrace, rule: StoppingRule) -> bool:
    if not len(trace):
        raise ValueError("stopping condition needs a non-empty trace")

    if trace.evaluations >= rule.budget:
        return True

    if rule.threshold_overlap is None:
        return False

    last = trace.last
    return (
        last.overlap >= rule.threshold_overlap
        and last.alpha >= rule.alpha_cap - CAP_SLACK
    )


@dataclass(frozen=True, eq=False)
class StageResult:
    alpha: float
    best_params: ParameterVector
    best_value: float
    evaluations: int
    cumulative_shots: int
    start_params: ParameterVector


@dataclass
class AscendingRunResult:
    final_params: ParameterVector
    trace: RunTrace
    stages: list[StageResult] = field(default_factory=list)
    budget_exhausted: bool = False
    stopped_at_threshold: bool = False


class _ThresholdReached(Exception):
    def __init__(self, params: ParameterVector):
        self.params = params
        super().__init__("overlap threshold reached at alpha cap")


class _StageObjective:
    """CVaR_alpha of the prepared state; appends one trace record per call"""

    def __init__(
        self,
        ansatz: AnsatzMixin,
        hamiltonian: DiagonalHamiltonian,
        spec: ObjectiveSpec,
        truth: GroundTruth,
        trace: RunTrace,
        rng: RandomSource,
        rule: StoppingRule,
    ):
        self.ansatz = ansatz
        self.hamiltonian = hamiltonian
        self.spec = spec
        self.truth = truth
        self.trace = trace
        self.rng = rng
        self.rule = rule

        self.evaluations = 0

    def __call__(self, params: ParameterVector) -> float:
        state = self.ansatz.prepare(params)
        value, shots = evaluate(self.spec, state, self.hamiltonian, self.rng)

        self.trace.append(self.spec.alpha, value, overlap(state, self.truth), shots)
        self.evaluations += 1

        if self.rule.threshold_overlap is not None and stopping_condition(
            self.trace, self.rule
        ):
            raise _ThresholdReached(np.array(params, dtype=np.float64))

        return value


def run_ascending_cvar(
    ansatz: AnsatzMixin,
    hamiltonian: DiagonalHamiltonian,
    schedule: AscendingSchedule,
    objective_spec: ObjectiveSpec,
    optimizer_config: OptimizerConfig,
    initial_params,
    rng: RandomSource,
    truth: GroundTruth | None = None,
    threshold_overlap: float | None = None,
) -> AscendingRunResult:
    """
    Minimise CVaR_alpha for each alpha of the schedule in turn, every stage
    starting from the previous stage's best parameters.

    ``optimizer_config.max_evaluations`` is the budget of the whole run and is
    split across stages by ``stage_budgets``. A budget too small to fund
    every stage drops alphas from the middle of the schedule, never
    alpha_cap, and marks the run ``budget_exhausted``. Setting
    ``threshold_overlap`` ends the run as soon as a state at alpha_cap
    reaches that overlap.
    """
    params = ansatz.checked_params(initial_params)
    if truth is None:
        truth = brute_force_ground(hamiltonian)

    alphas = alpha_sequence(schedule)
    budgets = stage_budgets(
        optimizer_config.max_evaluations, len(alphas), ansatz.param_count
    )
    thinned = len(budgets) < len(alphas)
    if thinned:
        simulation_logger.warning(
            f"budget {optimizer_config.max_evaluations} funds {len(budgets)} "
            f"of {len(alphas)} stages, running evenly spaced alphas up to the cap"
        )
        alphas = thin_alphas(alphas, len(budgets))

    rule = StoppingRule(
        budget=optimizer_config.max_evaluations,
        threshold_overlap=threshold_overlap,
        alpha_cap=schedule.alpha_cap,
    )

    trace = RunTrace()
    stages: list[StageResult] = []
    stopped_at_threshold = False

    for index, (alpha, budget) in enumerate(zip(alphas, budgets)):
        rho_begin = optimizer_config.warm_rho_begin if index else None
        stage_config = optimizer_config.with_budget(budget, rho_begin=rho_begin)
        stage_objective = _StageObjective(
            ansatz,
            hamiltonian,
            objective_spec.with_alpha(alpha),
            truth,
            trace,
            rng,
            rule,
        )

        simulation_logger.debug(
            f"stage {index}: alpha={alpha:.4f}, budget={budget}, from {len(trace)} evaluations"
        )

        start_params = params.copy()
        try:
            result = minimize(stage_objective, start_params, stage_config)
            best_params, best_value = result.best_params, result.best_value
        except _ThresholdReached as reached:
            best_params, best_value = reached.params, trace.last.objective
            stopped_at_threshold = True

        stages.append(
            StageResult(
                alpha=alpha,
                best_params=best_params,
                best_value=best_value,
                evaluations=stage_objective.evaluations,
                cumulative_shots=trace.cumulative_shots,
                start_params=start_params,
            )
        )
        params = best_params

        if stopped_at_threshold or stopping_condition(trace, rule):
            break

    budget_exhausted = not stopped_at_threshold and (
        trace.evaluations >= rule.budget or thinned
    )
    trace.final_overlap = overlap(ansatz.prepare(params), truth)

    simulation_logger.debug(
        f"{schedule.label}: {len(stages)} stages, {trace.evaluations} evaluations, "
        f"final overlap {trace.final_overlap:.4f}"
    )

    return AscendingRunResult(
        final_params=params,
        trace=trace,
        stages=stages,
        budget_exhausted=budget_exhausted,
        stopped_at_threshold=stopped_at_threshold,
    )
