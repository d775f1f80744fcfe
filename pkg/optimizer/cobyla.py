import hashlib
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import minimize as scipy_minimize

from quantum_sim.random_source import RandomSource
from utils.vqa_logging import simulation_logger

DEFAULT_RHO_BEGIN = 0.5
DEFAULT_RHO_END = 1e-4

Objective = Callable[[NDArray[np.float64]], float]


class NonFiniteObjectiveError(ValueError):
    def __init__(self, params: NDArray[np.float64], value: float):
        self.params = params
        self.value = value
        super().__init__(
            f"objective returned {value} at parameters {np.array2string(params, precision=6)}"
        )


class _BudgetExhausted(Exception):
    pass


@dataclass(frozen=True, eq=False)
class OptimizerConfig:
    """
    COBYLA settings. ``bounds`` is an optional (dim, 2) box; candidates are
    clipped into it before every evaluation. ``warm_rho_begin`` replaces
    ``rho_begin`` for warm-started stages when set.
    """

    max_evaluations: int
    rho_begin: float = DEFAULT_RHO_BEGIN
    rho_end: float = DEFAULT_RHO_END
    bounds: NDArray[np.float64] | None = None
    warm_rho_begin: float | None = None

    def __post_init__(self):
        if not 0 < self.rho_end < self.rho_begin:
            raise ValueError(
                f"need 0 < rho_end < rho_begin, got {self.rho_end} and {self.rho_begin}"
            )
        if self.bounds is not None:
            bounds = np.asarray(self.bounds, dtype=np.float64)
            if bounds.ndim != 2 or bounds.shape[1] != 2:
                raise ValueError(f"bounds must have shape (dim, 2), got {bounds.shape}")
            if np.any(bounds[:, 0] > bounds[:, 1]):
                raise ValueError("every lower bound must be <= its upper bound")
            object.__setattr__(self, "bounds", bounds)

    def check_dimension(self, dimension: int):
        if self.max_evaluations < dimension + 2:
            raise ValueError(
                f"max_evaluations must be >= dimension + 2 = {dimension + 2}, "
                f"got {self.max_evaluations}"
            )
        if self.bounds is not None and self.bounds.shape[0] != dimension:
            raise ValueError(
                f"bounds cover {self.bounds.shape[0]} parameters, expected {dimension}"
            )

    def with_budget(self, max_evaluations: int, rho_begin: float | None = None):
        return OptimizerConfig(
            max_evaluations=max_evaluations,
            rho_begin=rho_begin or self.rho_begin,
            rho_end=self.rho_end,
            bounds=self.bounds,
            warm_rho_begin=self.warm_rho_begin,
        )

    @classmethod
    def for_parameters(cls, dimension: int, multiplier: int = 66, **kwargs):
        return cls(max_evaluations=multiplier * dimension, **kwargs)


@dataclass
class OptimizationResult:
    best_params: NDArray[np.float64]
    best_value: float
    evaluations: int
    trace: list[tuple[str, float]] = field(default_factory=list)
    converged: bool = False


def params_hash(params: NDArray[np.float64]) -> str:
    return hashlib.sha1(np.ascontiguousarray(params).tobytes()).hexdigest()[:16]


class _RecordingObjective:
    """Counts, clips, records and budget-guards every call made by scipy"""

    def __init__(self, objective: Objective, config: OptimizerConfig):
        self.objective = objective
        self.config = config
        self.trace: list[tuple[str, float]] = []
        self.best_params: NDArray[np.float64] | None = None
        self.best_value = math.inf

    def clip(self, x: NDArray[np.float64]) -> NDArray[np.float64]:
        if self.config.bounds is None:
            return np.array(x, dtype=np.float64)
        return np.clip(x, self.config.bounds[:, 0], self.config.bounds[:, 1])

    def __call__(self, x: NDArray[np.float64]) -> float:
        if len(self.trace) >= self.config.max_evaluations:
            raise _BudgetExhausted

        params = self.clip(x)
        value = float(self.objective(params))
        if not math.isfinite(value):
            raise NonFiniteObjectiveError(params, value)

        self.trace.append((params_hash(params), value))

        if value < self.best_value:
            self.best_value = value
            self.best_params = params.copy()

        return value


def minimize(objective: Objective, x0, config: OptimizerConfig) -> OptimizationResult:
    """
    COBYLA (linear models on a simplex inside a shrinking trust region) via scipy.

    Stops when the trust radius falls below ``rho_end`` or after
    ``max_evaluations`` calls; every call is in ``trace``.
    """
    x0 = np.asarray(x0, dtype=np.float64)
    config.check_dimension(x0.shape[0])

    recorder = _RecordingObjective(objective, config)
    x0 = recorder.clip(x0)

    exhausted = False
    converged = False
    try:
        result = scipy_minimize(
            recorder,
            x0,
            method="COBYLA",
            options={
                "rhobeg": config.rho_begin,
                "tol": config.rho_end,
                "maxiter": config.max_evaluations,
            },
        )
        converged = bool(result.success)
    except _BudgetExhausted:
        exhausted = True

    evaluations = len(recorder.trace)
    if exhausted or evaluations >= config.max_evaluations:
        converged = False

    if recorder.best_params is None:
        # scipy returned without calling us, which only happens on a zero budget
        raise RuntimeError("optimizer finished without evaluating the objective")

    simulation_logger.debug(
        f"cobyla finished after {evaluations} evaluations, best {recorder.best_value:.6g}, "
        f"converged={converged}"
    )

    return OptimizationResult(
        best_params=recorder.best_params,
        best_value=recorder.best_value,
        evaluations=evaluations,
        trace=recorder.trace,
        converged=converged,
    )


def random_initial_params(count: int, rng: RandomSource) -> NDArray[np.float64]:
    """Uniform on [0, 2 pi)"""

    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    return rng.generator.uniform(0.0, 2 * np.pi, size=count)
