import math
from dataclasses import dataclass

import numpy as np

CONSTANT = "constant"
LINEAR = "linear"
SIGMOID = "sigmoid"
EXPONENTIAL = "exponential"
LOGARITHMIC = "logarithmic"
SCHEDULE_KINDS = (CONSTANT, LINEAR, SIGMOID, EXPONENTIAL, LOGARITHMIC)

DEFAULT_ALPHA0 = 0.01
SIGMOID_OFFSET = 5.0
SIGMOID_STOP = 0.999

# alpha0 + t * lambda landing a rounding error below the cap is the cap
CAP_SLACK = 1e-12


def sigmoid_alpha(t: float, ascending_factor: float) -> float:
    """1 / (1 + e^(5 - lambda t)); 0.5 at lambda t = 5"""

    return 1.0 / (1.0 + math.exp(SIGMOID_OFFSET - ascending_factor * t))


@dataclass(frozen=True)
class AscendingSchedule:
    kind: str
    ascending_factor: float = 0.0
    alpha0: float = DEFAULT_ALPHA0
    alpha_cap: float = 1.0

    def __post_init__(self):
        if self.kind not in SCHEDULE_KINDS:
            raise ValueError(
                f"unknown schedule kind {self.kind!r}, expected one of {SCHEDULE_KINDS}"
            )

        # a constant schedule never leaves alpha0
        if self.kind == CONSTANT:
            object.__setattr__(self, "alpha_cap", self.alpha0)

        if not 0 < self.alpha0 <= self.alpha_cap <= 1:
            raise ValueError(
                f"need 0 < alpha0 <= alpha_cap <= 1, got alpha0={self.alpha0}, "
                f"alpha_cap={self.alpha_cap}"
            )
        if self.kind != CONSTANT and self.ascending_factor <= 0:
            raise ValueError(
                f"{self.kind} schedule needs a positive ascending factor, "
                f"got {self.ascending_factor}"
            )

    @classmethod
    def constant(cls, alpha: float) -> "AscendingSchedule":
        return cls(kind=CONSTANT, alpha0=alpha, alpha_cap=alpha)

    @property
    def label(self) -> str:
        if self.kind == CONSTANT:
            return f"alpha={self.alpha0:g}"
        return f"ascending-{self.kind}(lambda={self.ascending_factor:g})"


def _linear(schedule: AscendingSchedule) -> list[float]:
    alphas = []
    t = 0
    alpha = schedule.alpha0
    while alpha < schedule.alpha_cap - CAP_SLACK:
        alphas.append(alpha)
        t += 1
        alpha = schedule.alpha0 + t * schedule.ascending_factor

    alphas.append(schedule.alpha_cap)
    return alphas


def _sigmoid(schedule: AscendingSchedule) -> list[float]:
    first = max(schedule.alpha0, sigmoid_alpha(0, schedule.ascending_factor))
    if first >= schedule.alpha_cap - CAP_SLACK:
        return [schedule.alpha_cap]

    alphas = [first]
    t = 1
    while True:
        alpha = sigmoid_alpha(t, schedule.ascending_factor)
        if alpha >= SIGMOID_STOP or alpha >= schedule.alpha_cap - CAP_SLACK:
            break
        if alpha > alphas[-1]:
            alphas.append(alpha)
        t += 1

    alphas.append(schedule.alpha_cap)
    return alphas


def _exponential(schedule: AscendingSchedule) -> list[float]:
    stages = len(_linear(schedule))
    if stages == 1:
        return [schedule.alpha_cap]

    ratio = (schedule.alpha_cap / schedule.alpha0) ** (1.0 / (stages - 1))
    alphas = [schedule.alpha0 * ratio**t for t in range(stages - 1)]
    alphas.append(schedule.alpha_cap)
    return alphas


def _logarithmic(schedule: AscendingSchedule) -> list[float]:
    stages = len(_linear(schedule))
    if stages == 1:
        return [schedule.alpha_cap]

    last = stages - 1
    span = schedule.alpha_cap - schedule.alpha0
    alphas = [
        schedule.alpha0 + span * math.log1p(t) / math.log1p(last) for t in range(last)
    ]
    alphas.append(schedule.alpha_cap)
    return alphas


def alpha_sequence(schedule: AscendingSchedule) -> list[float]:
    """
    Strictly increasing alpha values, one per stage, ending exactly at alpha_cap.

    The exponential and logarithmic curves use as many stages as the linear
    schedule with the same factor, so all three reach the cap together.
    """
    if schedule.kind == CONSTANT:
        return [schedule.alpha0]
    if schedule.kind == LINEAR:
        return _linear(schedule)
    if schedule.kind == SIGMOID:
        return _sigmoid(schedule)
    if schedule.kind == EXPONENTIAL:
        return _exponential(schedule)
    return _logarithmic(schedule)


def stage_budgets(total: int, stages: int, dimension: int) -> list[int]:
    """
    Split ``total`` evaluations evenly, remainder to the last stage.

    Every stage gets at least dimension + 2 evaluations (the smallest budget
    COBYLA accepts). When the total cannot fund all ``stages`` at that floor,
    the list holds one budget per stage it can fund; ``thin_alphas`` picks
    which alphas those stages run.
    """
    if stages < 1:
        raise ValueError(f"need at least one stage, got {stages}")

    floor = dimension + 2
    if total < floor:
        raise ValueError(
            f"budget {total} cannot cover a single stage of {floor} evaluations"
        )

    funded = min(stages, total // floor)
    budgets = np.full(funded, total // funded, dtype=np.int64)
    budgets[-1] += total % funded
    return [int(budget) for budget in budgets]


def thin_alphas(alphas: list[float], count: int) -> list[float]:
    """
    ``count`` evenly spaced entries of ``alphas``, always ending at its last
    entry (the cap); a single stage runs at the cap alone.
    """
    if not 1 <= count <= len(alphas):
        raise ValueError(f"cannot keep {count} of {len(alphas)} stages")
    if count == len(alphas):
        return list(alphas)
    if count == 1:
        return [alphas[-1]]

    positions = np.rint(np.linspace(0, len(alphas) - 1, count)).astype(np.int64)
    return [alphas[position] for position in positions]
