from dataclasses import dataclass, field

from objective.cvar import DEFAULT_BASE_SHOTS, SAMPLED
from schedule.ascending import AscendingSchedule

FAMILIES = ("maxcut", "numpart", "portfolio")

DEFAULT_BUDGET_MULTIPLIER = 66
DEFAULT_INSTANCE_COUNT = 20
DEFAULT_QUBITS = (10, 12)

FULL_SCALE_INSTANCE_COUNT = 100
FULL_SCALE_QUBITS = {
    "maxcut": (15, 19),
    "numpart": (17, 20),
    "portfolio": (16, 20),
}

DEFAULT_GENERATION = {
    "maxcut": {"graph_family": "random-nonregular", "parameter": 0.5},
    "numpart": {"bound": 500},
    "portfolio": {"q": 0.5},
}


class ExperimentSpecError(ValueError):
    pass


@dataclass(frozen=True)
class AnsatzSpec:
    kind: str = "hea"
    layers: int = 1


@dataclass(frozen=True)
class MethodSpec:
    label: str
    schedule: AscendingSchedule


def default_roster() -> list[MethodSpec]:
    schedules = [
        AscendingSchedule(kind="linear", ascending_factor=0.035),
        AscendingSchedule(kind="sigmoid", ascending_factor=0.35),
        AscendingSchedule.constant(0.1),
        AscendingSchedule.constant(0.2),
        AscendingSchedule.constant(0.5),
        AscendingSchedule.constant(1.0),
    ]
    return [MethodSpec(label=s.label, schedule=s) for s in schedules]


def schedule_comparison_roster(ascending_factor: float = 0.035) -> list[MethodSpec]:
    """Linear against sigmoid, exponential and logarithmic curves sharing alpha0 = 0.01"""

    schedules = [
        AscendingSchedule(kind="linear", ascending_factor=ascending_factor),
        AscendingSchedule(kind="sigmoid", ascending_factor=0.35),
        AscendingSchedule(kind="exponential", ascending_factor=ascending_factor),
        AscendingSchedule(kind="logarithmic", ascending_factor=ascending_factor),
    ]
    return [MethodSpec(label=s.label, schedule=s) for s in schedules]


ROSTERS = {
    "default": default_roster,
    "schedule-comparison": schedule_comparison_roster,
}


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    family: str
    methods: tuple[MethodSpec, ...]
    generation: dict = field(default_factory=dict)
    instance_count: int = DEFAULT_INSTANCE_COUNT
    qubits: tuple[int, int] = DEFAULT_QUBITS
    ansatz: AnsatzSpec = AnsatzSpec()
    base_shots: int = DEFAULT_BASE_SHOTS
    objective_mode: str = SAMPLED
    budget_multiplier: int = DEFAULT_BUDGET_MULTIPLIER
    success_threshold: float = 0.10
    stop_at_threshold: bool = False
    master_seed: int = 0
    output_dir: str = "results"
    workers: int = 1
    rho_begin: float = 0.5
    rho_end: float = 1e-4
    warm_rho_begin: float | None = None
    instances_dir: str | None = None
    full_scale: bool = False

    def qubit_sizes(self) -> list[int]:
        """Instance i gets qubits[0] + i mod (range width)"""

        low, high = self.qubits
        width = high - low + 1
        return [low + i % width for i in range(self.instance_count)]
