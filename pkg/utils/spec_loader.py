import json

from ansatz.factory import ANSATZ_KINDS
from harness.spec import (
    DEFAULT_GENERATION,
    FAMILIES,
    FULL_SCALE_INSTANCE_COUNT,
    FULL_SCALE_QUBITS,
    ROSTERS,
    AnsatzSpec,
    ExperimentSpec,
    ExperimentSpecError,
    MethodSpec,
)
from objective.cvar import OBJECTIVE_MODES
from quantum_sim.statevector import MAX_QUBITS
from schedule.ascending import AscendingSchedule

MAX_QAOA_LAYERS = 6

KNOWN_KEYS = {
    "name",
    "family",
    "generation",
    "instance_count",
    "qubits",
    "ansatz",
    "methods",
    "base_shots",
    "objective_mode",
    "budget_multiplier",
    "success_threshold",
    "stop_at_threshold",
    "master_seed",
    "output_dir",
    "workers",
    "optimizer",
    "instances_dir",
    "full_scale",
}


class ExperimentSpecLoader:
    def __init__(self, spec_path: str, logger):
        self.spec_path = spec_path
        self.logger = logger

    def fetch_document(self) -> dict:
        """Raw JSON document of the spec file"""

        try:
            with open(self.spec_path, "r", encoding="utf-8") as f:
                document = json.load(f)
        except FileNotFoundError:
            raise ExperimentSpecError(f"spec file {self.spec_path} does not exist")
        except json.JSONDecodeError as e:
            raise ExperimentSpecError(f"spec file {self.spec_path} is not valid JSON: {e}")

        if not isinstance(document, dict):
            raise ExperimentSpecError("spec document must be a JSON object")
        return document

    def parse_method(self, method: dict) -> MethodSpec:
        """{"kind": ..., "lambda": ..., "alpha0": ..., "alpha_cap": ...} or {"kind": "constant", "alpha": ...}"""

        kind = method.get("kind")
        try:
            if kind == "constant":
                schedule = AscendingSchedule.constant(float(method["alpha"]))
            else:
                schedule = AscendingSchedule(
                    kind=kind,
                    ascending_factor=float(method.get("lambda", 0.0)),
                    alpha0=float(method.get("alpha0", 0.01)),
                    alpha_cap=float(method.get("alpha_cap", 1.0)),
                )
        except KeyError as e:
            raise ExperimentSpecError(f"method {method} lacks key {e}")
        except ValueError as e:
            raise ExperimentSpecError(f"invalid method {method}: {e}")

        return MethodSpec(label=method.get("label", schedule.label), schedule=schedule)

    def parse_methods(self, methods) -> tuple[MethodSpec, ...]:
        if isinstance(methods, str):
            if methods not in ROSTERS:
                raise ExperimentSpecError(
                    f"unknown method roster {methods!r}, expected one of {sorted(ROSTERS)}"
                )
            return tuple(ROSTERS[methods]())

        if not isinstance(methods, list) or not methods:
            raise ExperimentSpecError("methods must be a roster name or a non-empty list")

        parsed = tuple(self.parse_method(method) for method in methods)
        labels = [method.label for method in parsed]
        if len(set(labels)) != len(labels):
            raise ExperimentSpecError(f"method labels must be unique, got {labels}")
        return parsed

    @staticmethod
    def parse_ansatz(document: dict) -> AnsatzSpec:
        ansatz = AnsatzSpec(
            kind=document.get("kind", "hea"), layers=int(document.get("layers", 1))
        )
        if ansatz.kind not in ANSATZ_KINDS:
            raise ExperimentSpecError(
                f"unknown ansatz {ansatz.kind!r}, expected one of {ANSATZ_KINDS}"
            )
        if ansatz.layers < 1:
            raise ExperimentSpecError(f"ansatz layers must be >= 1, got {ansatz.layers}")
        if ansatz.kind == "qaoa" and ansatz.layers > MAX_QAOA_LAYERS:
            raise ExperimentSpecError(
                f"qaoa depth must be <= {MAX_QAOA_LAYERS}, got {ansatz.layers}"
            )
        return ansatz

    def validate(self, spec: ExperimentSpec):
        if spec.family not in FAMILIES:
            raise ExperimentSpecError(
                f"unknown family {spec.family!r}, expected one of {FAMILIES}"
            )
        if spec.instance_count < 1:
            raise ExperimentSpecError(
                f"instance_count must be >= 1, got {spec.instance_count}"
            )

        low, high = spec.qubits
        if not 2 <= low <= high <= MAX_QUBITS:
            raise ExperimentSpecError(
                f"qubit range must satisfy 2 <= low <= high <= {MAX_QUBITS}, got {spec.qubits}"
            )
        if spec.objective_mode not in OBJECTIVE_MODES:
            raise ExperimentSpecError(
                f"objective_mode must be one of {OBJECTIVE_MODES}, got {spec.objective_mode!r}"
            )
        if spec.base_shots < 1 or spec.budget_multiplier < 1 or spec.workers < 1:
            raise ExperimentSpecError(
                "base_shots, budget_multiplier and workers must all be >= 1"
            )
        if not 0 < spec.success_threshold <= 1:
            raise ExperimentSpecError(
                f"success_threshold must lie in (0, 1], got {spec.success_threshold}"
            )
        if not 0 < spec.rho_end < spec.rho_begin:
            raise ExperimentSpecError(
                f"need 0 < rho_end < rho_begin, got {spec.rho_end} and {spec.rho_begin}"
            )

    def load(self) -> ExperimentSpec:
        document = self.fetch_document()

        unknown = set(document) - KNOWN_KEYS
        if unknown:
            raise ExperimentSpecError(f"unknown spec keys {sorted(unknown)}")
        for key in ("family", "methods"):
            if key not in document:
                raise ExperimentSpecError(f"spec lacks required key {key!r}")

        family = document["family"]
        optimizer = document.get("optimizer", {})
        generation = {**DEFAULT_GENERATION.get(family, {}), **document.get("generation", {})}

        full_scale = bool(document.get("full_scale", False))
        if full_scale and family in FULL_SCALE_QUBITS:
            qubits = FULL_SCALE_QUBITS[family]
            instance_count = FULL_SCALE_INSTANCE_COUNT
        else:
            qubits = tuple(document.get("qubits", (10, 12)))
            instance_count = int(document.get("instance_count", 20))

        if len(qubits) != 2:
            raise ExperimentSpecError(f"qubits must be [low, high], got {list(qubits)}")

        try:
            spec = ExperimentSpec(
                name=document.get("name", family),
                family=family,
                methods=self.parse_methods(document["methods"]),
                generation=generation,
                instance_count=instance_count,
                qubits=(int(qubits[0]), int(qubits[1])),
                ansatz=self.parse_ansatz(document.get("ansatz", {})),
                base_shots=int(document.get("base_shots", 1000)),
                objective_mode=document.get("objective_mode", "sampled"),
                budget_multiplier=int(document.get("budget_multiplier", 66)),
                success_threshold=float(document.get("success_threshold", 0.10)),
                stop_at_threshold=bool(document.get("stop_at_threshold", False)),
                master_seed=int(document.get("master_seed", 0)),
                output_dir=document.get("output_dir", "results"),
                workers=int(document.get("workers", 1)),
                rho_begin=float(optimizer.get("rho_begin", 0.5)),
                rho_end=float(optimizer.get("rho_end", 1e-4)),
                warm_rho_begin=optimizer.get("warm_rho_begin"),
                instances_dir=document.get("instances_dir"),
                full_scale=full_scale,
            )
        except (TypeError, ValueError) as e:
            if isinstance(e, ExperimentSpecError):
                raise
            raise ExperimentSpecError(f"malformed spec {self.spec_path}: {e}")

        self.validate(spec)

        self.logger.info(
            f"Loaded experiment {spec.name}: {spec.family}, {spec.instance_count} instances, "
            f"{len(spec.methods)} methods, qubits {spec.qubits}"
        )
        return spec
