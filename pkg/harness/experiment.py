import glob
import os
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field

import numpy as np

from ansatz.ansatz_base import ParameterVector
from ansatz.factory import build_ansatz, parameter_bounds
from metrics.evaluation import (
    RunOutcome,
    UndefinedRatioError,
    approximation_ratio,
    is_success,
    summarize,
    summary_to_csv,
)
from metrics.oracle import GroundTruth, brute_force_ground
from objective.cvar import ObjectiveSpec, expectation
from optimizer.cobyla import OptimizerConfig, params_hash, random_initial_params
from problems.generators import (
    generate_maxcut_instance,
    generate_numpart_instance,
    generate_portfolio_instance,
)
from problems.hamiltonians import DiagonalHamiltonian, build_hamiltonian
from problems.instance_io import (
    instance_hash,
    instance_to_dict,
    instance_type,
    load_instance,
)
from problems.instances import Instance, problem_value
from problems.qubo import bits_of
from quantum_sim.random_source import RandomSource
from quantum_sim.statevector import probabilities
from schedule.runner import run_ascending_cvar

from .output import file_slug, write_frame, write_json
from .spec import ExperimentSpec, ExperimentSpecError, MethodSpec


@dataclass
class PreparedInstance:
    """Everything every method of one instance shares"""

    instance_id: str
    instance: Instance
    hamiltonian: DiagonalHamiltonian
    truth: GroundTruth
    initial_params: ParameterVector
    bounds: np.ndarray | None
    instance_hash: str


@dataclass
class ExperimentReport:
    completed: list[RunOutcome] = field(default_factory=list)
    failed: list[tuple[str, str, str]] = field(default_factory=list)
    summary_path: str | None = None

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0


def spread_into_box(params: ParameterVector, bounds: np.ndarray | None) -> ParameterVector:
    """Map a uniform [0, 2 pi) draw affinely onto the box, keeping it uniform"""

    if bounds is None:
        return params
    low, high = bounds[:, 0], bounds[:, 1]
    return low + params / (2 * np.pi) * (high - low)


class ExperimentRunner:
    """
    Runs every method of an ExperimentSpec on every instance.

    All methods of an instance see the same instance data and the same initial
    parameters; each (instance, method) run draws from its own RandomSource
    derived from the master seed, so the output tree depends only on the experiment spec.
    """

    def __init__(self, spec: ExperimentSpec, logger):
        self.spec = spec
        self.logger = logger
        self.master = RandomSource(spec.master_seed)

    @property
    def family_dir(self) -> str:
        return os.path.join(self.spec.output_dir, "traces", self.spec.family)

    def generate_instance(self, index: int, n: int) -> Instance:
        spec = self.spec
        rng = self.master.derive(f"{spec.family}/instance/{index}")
        generation = spec.generation

        if spec.family == "maxcut":
            return generate_maxcut_instance(
                n, generation["graph_family"], float(generation["parameter"]), rng
            )
        if spec.family == "numpart":
            return generate_numpart_instance(n, int(generation["bound"]), rng)
        return generate_portfolio_instance(
            n, float(generation["q"]), rng, generation.get("penalty_weight")
        )

    def build_instances(self) -> list[tuple[str, Instance]]:
        spec = self.spec

        if spec.instances_dir:
            paths = sorted(glob.glob(os.path.join(spec.instances_dir, "*.json")))
            if not paths:
                raise ExperimentSpecError(f"no instance files in {spec.instances_dir}")

            instances = []
            for path in paths:
                instance = load_instance(path)
                if instance_type(instance) != spec.family:
                    raise ExperimentSpecError(
                        f"{path} holds a {instance_type(instance)} instance, "
                        f"spec family is {spec.family}"
                    )
                instances.append((os.path.splitext(os.path.basename(path))[0], instance))
            return instances

        return [
            (f"{spec.family}_{index:03d}_n{n}", self.generate_instance(index, n))
            for index, n in enumerate(spec.qubit_sizes())
        ]

    def prepare_instance(self, instance_id: str, instance: Instance) -> PreparedInstance:
        hamiltonian = build_hamiltonian(instance)
        truth = brute_force_ground(hamiltonian)

        ansatz = build_ansatz(self.spec.ansatz.kind, self.spec.ansatz.layers, hamiltonian)
        bounds = parameter_bounds(ansatz, instance)

        rng = self.master.derive(f"{self.spec.family}/{instance_id}/initial-params")
        initial_params = spread_into_box(
            random_initial_params(ansatz.param_count, rng), bounds
        )

        prepared = PreparedInstance(
            instance_id=instance_id,
            instance=instance,
            hamiltonian=hamiltonian,
            truth=truth,
            initial_params=initial_params,
            bounds=bounds,
            instance_hash=instance_hash(instance),
        )

        write_json(
            {
                "instance_id": instance_id,
                "instance": instance_to_dict(instance),
                "instance_hash": prepared.instance_hash,
                "ground_truth": truth.to_dict(),
                "initial_params": [float(v) for v in initial_params],
            },
            os.path.join(self.family_dir, instance_id, "instance.json"),
        )

        self.logger.info(
            f"{instance_id}: ground energy {truth.ground_energy:.6g}, degeneracy {truth.degeneracy}"
        )
        return prepared

    def run_method(self, prepared: PreparedInstance, method: MethodSpec) -> RunOutcome:
        spec = self.spec
        hamiltonian = prepared.hamiltonian
        ansatz = build_ansatz(spec.ansatz.kind, spec.ansatz.layers, hamiltonian)

        rng = self.master.derive(f"{spec.family}/{prepared.instance_id}/{method.label}")
        config = OptimizerConfig(
            max_evaluations=spec.budget_multiplier * ansatz.param_count,
            rho_begin=spec.rho_begin,
            rho_end=spec.rho_end,
            bounds=prepared.bounds,
            warm_rho_begin=spec.warm_rho_begin,
        )
        objective_spec = ObjectiveSpec(
            alpha=method.schedule.alpha0,
            base_shots=spec.base_shots,
            mode=spec.objective_mode,
        )

        result = run_ascending_cvar(
            ansatz,
            hamiltonian,
            method.schedule,
            objective_spec,
            config,
            prepared.initial_params,
            rng,
            truth=prepared.truth,
            threshold_overlap=spec.success_threshold if spec.stop_at_threshold else None,
        )

        final_overlap = float(result.trace.final_overlap)
        final_state = ansatz.prepare(result.final_params)
        final_expectation = expectation(final_state, hamiltonian)
        most_likely = int(np.argmax(probabilities(final_state)))
        try:
            ratio = approximation_ratio(final_expectation, prepared.truth)
        except UndefinedRatioError:
            ratio = None

        run_dir = os.path.join(self.family_dir, prepared.instance_id)
        slug = file_slug(method.label)

        write_frame(result.trace.to_frame(), os.path.join(run_dir, f"{slug}.csv"))
        write_json(
            {
                "method": method.label,
                "schedule": {
                    "kind": method.schedule.kind,
                    "lambda": method.schedule.ascending_factor,
                    "alpha0": method.schedule.alpha0,
                    "alpha_cap": method.schedule.alpha_cap,
                },
                "instance_id": prepared.instance_id,
                "instance_hash": prepared.instance_hash,
                "initial_params_hash": params_hash(prepared.initial_params),
                "seed": rng.seed,
                "param_count": ansatz.param_count,
                "max_evaluations": config.max_evaluations,
                "evaluations": result.trace.evaluations,
                "cumulative_shots": result.trace.cumulative_shots,
                "stages": len(result.stages),
                "budget_exhausted": result.budget_exhausted,
                "stopped_at_threshold": result.stopped_at_threshold,
                "ground_truth": prepared.truth.to_dict(),
                "final_overlap": final_overlap,
                "final_expectation": final_expectation,
                "approximation_ratio": ratio,
                "most_likely_index": most_likely,
                "most_likely_value": problem_value(
                    prepared.instance, bits_of(most_likely, hamiltonian.n_qubits)
                ),
                "success": is_success(final_overlap, spec.success_threshold),
                "final_params": [float(v) for v in result.final_params],
            },
            os.path.join(run_dir, f"{slug}.json"),
        )

        self.logger.info(
            f"{prepared.instance_id} / {method.label}: {result.trace.evaluations} evaluations, "
            f"final overlap {final_overlap:.4f}"
        )

        return RunOutcome(
            method=method.label,
            instance=prepared.instance_id,
            trace=result.trace,
            param_count=ansatz.param_count,
            final_overlap=final_overlap,
        )

    def _execute(self, tasks, report: ExperimentReport):
        def attempt(prepared: PreparedInstance, method: MethodSpec):
            try:
                return self.run_method(prepared, method), None
            except Exception as e:
                self.logger.error(f"{prepared.instance_id} / {method.label} failed: {e}")
                return None, (prepared.instance_id, method.label, str(e))

        if self.spec.workers == 1:
            results = [attempt(prepared, method) for prepared, method in tasks]
        else:
            with ThreadPoolExecutor(max_workers=self.spec.workers) as pool:
                futures = [pool.submit(attempt, prepared, method) for prepared, method in tasks]
                results = [future.result() for future in as_completed(futures)]

        for outcome, failure in results:
            if outcome is not None:
                report.completed.append(outcome)
            else:
                report.failed.append(failure)

    def run(self) -> ExperimentReport:
        spec = self.spec
        report = ExperimentReport()

        self.logger.info(
            f"Experiment {spec.name}: {len(spec.methods)} methods, output in {spec.output_dir}"
        )

        prepared_instances = []
        for instance_id, instance in self.build_instances():
            try:
                prepared_instances.append(self.prepare_instance(instance_id, instance))
            except Exception as e:
                self.logger.error(f"{instance_id} could not be prepared: {e}")
                report.failed.extend(
                    (instance_id, method.label, str(e)) for method in spec.methods
                )

        tasks = [
            (prepared, method) for prepared in prepared_instances for method in spec.methods
        ]
        self._execute(tasks, report)

        method_order = {method.label: i for i, method in enumerate(spec.methods)}
        report.completed.sort(key=lambda run: (method_order[run.method], run.instance))

        if report.completed:
            report.summary_path = os.path.join(
                spec.output_dir, f"summary_{spec.family}.csv"
            )
            summary_to_csv(summarize(report.completed, spec.success_threshold), report.summary_path)
            self.logger.info(f"Summary written to {report.summary_path}")

        if report.failed:
            self.logger.warning(f"{len(report.failed)} runs failed")

        return report


def run_experiment(spec: ExperimentSpec, logger) -> ExperimentReport:
    return ExperimentRunner(spec, logger).run()
