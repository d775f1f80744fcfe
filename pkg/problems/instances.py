from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

PSD_TOLERANCE = 1e-9
SYMMETRY_TOLERANCE = 1e-12


class InfeasibleInstanceError(ValueError):
    pass


@dataclass(frozen=True)
class MaxCutInstance:
    """Non-directed graph; edges are stored as (i, j, w) with i < j"""

    n_vertices: int
    edges: tuple[tuple[int, int, float], ...]
    seed: int | None = None
    family: str = "custom"

    def __post_init__(self):
        canonical = []
        for i, j, w in self.edges:
            i, j, w = int(i), int(j), float(w)
            if i == j:
                raise ValueError(f"self-loop on vertex {i}")
            if not (0 <= i < self.n_vertices and 0 <= j < self.n_vertices):
                raise ValueError(
                    f"edge ({i}, {j}) outside a {self.n_vertices}-vertex graph"
                )
            if not np.isfinite(w):
                raise ValueError(f"edge ({i}, {j}) has non-finite weight {w}")
            canonical.append((min(i, j), max(i, j), w))

        object.__setattr__(self, "edges", tuple(sorted(canonical)))

    @property
    def n(self) -> int:
        return self.n_vertices


@dataclass(frozen=True)
class NumberPartitionInstance:
    numbers: tuple[int, ...]
    seed: int | None = None
    bound: int | None = None

    def __post_init__(self):
        numbers = tuple(int(v) for v in self.numbers)
        if not numbers:
            raise ValueError("a partition instance needs at least one number")
        if min(numbers) < 1:
            raise ValueError(f"numbers must be positive integers, got {numbers}")
        object.__setattr__(self, "numbers", numbers)

    @property
    def n(self) -> int:
        return len(self.numbers)


def default_penalty_weight(
    returns: NDArray[np.float64], covariance: NDArray[np.float64], risk: float
) -> float:
    """10 x an upper bound on |C(x)| over all portfolios"""

    return float(10.0 * (np.sum(np.abs(returns)) + risk * np.sum(np.abs(covariance))))


@dataclass(frozen=True, eq=False)
class PortfolioInstance:
    """
    Pick exactly ``budget`` assets maximising  mu.x - q x.Sigma.x.
    ``penalty_weight`` defaults to ``default_penalty_weight``.
    """

    returns: NDArray[np.float64]
    covariance: NDArray[np.float64]
    risk: float
    budget: int
    penalty_weight: float = field(default=0.0)
    seed: int | None = None

    def __post_init__(self):
        returns = np.asarray(self.returns, dtype=np.float64)
        covariance = np.asarray(self.covariance, dtype=np.float64)
        n = returns.shape[0]

        if covariance.shape != (n, n):
            raise ValueError(f"covariance must be {n}x{n}, got {covariance.shape}")
        if not np.allclose(covariance, covariance.T, atol=SYMMETRY_TOLERANCE, rtol=0):
            raise ValueError("covariance matrix is not symmetric")
        smallest = float(np.linalg.eigvalsh(covariance)[0])
        if smallest < -PSD_TOLERANCE:
            raise ValueError(
                f"covariance matrix is not positive semidefinite (eigenvalue {smallest:.3e})"
            )
        if self.risk <= 0:
            raise ValueError(f"risk factor must be positive, got {self.risk}")
        if not 0 <= self.budget <= n:
            raise ValueError(f"budget must lie in [0, {n}], got {self.budget}")

        penalty = self.penalty_weight or default_penalty_weight(
            returns, covariance, self.risk
        )
        if penalty <= 0:
            raise ValueError(f"penalty weight must be positive, got {penalty}")

        object.__setattr__(self, "returns", returns)
        object.__setattr__(self, "covariance", covariance)
        object.__setattr__(self, "risk", float(self.risk))
        object.__setattr__(self, "budget", int(self.budget))
        object.__setattr__(self, "penalty_weight", float(penalty))

    @property
    def n(self) -> int:
        return self.returns.shape[0]


Instance = MaxCutInstance | NumberPartitionInstance | PortfolioInstance


def max_cut_value(instance: MaxCutInstance, bits: NDArray) -> float:
    """Total weight of edges whose endpoints carry different bits"""

    return float(sum(w for i, j, w in instance.edges if bits[i] != bits[j]))


def portfolio_value(instance: PortfolioInstance, bits: NDArray) -> float:
    """q-weighted mean-variance C(x) of a selection (no penalty)"""

    x = np.asarray(bits, dtype=np.float64)
    return float(instance.returns @ x - instance.risk * x @ instance.covariance @ x)


def partition_difference(instance: NumberPartitionInstance, bits: NDArray) -> int:
    """|sum(S) - sum(A \\ S)| with S the numbers whose bit is 0"""

    signs = 1 - 2 * np.asarray(bits, dtype=np.int64)
    return abs(int(signs @ np.asarray(instance.numbers, dtype=np.int64)))


def problem_value(instance: Instance, bits: NDArray) -> float:
    """C(x) of the original problem: cut weight, partition difference or portfolio value"""

    if isinstance(instance, MaxCutInstance):
        return max_cut_value(instance, bits)
    if isinstance(instance, NumberPartitionInstance):
        return float(partition_difference(instance, bits))
    return portfolio_value(instance, bits)
