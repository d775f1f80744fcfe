import networkx as nx
import numpy as np

from quantum_sim.random_source import RandomSource
from utils.vqa_logging import experiment_logger

from .instances import (
    InfeasibleInstanceError,
    MaxCutInstance,
    NumberPartitionInstance,
    PortfolioInstance,
)

MAX_GRAPH_ATTEMPTS = 1000

FACTOR_RANK = 3
COVARIANCE_JITTER = 0.01

RANDOM_NONREGULAR = "random-nonregular"
K_REGULAR = "k-regular"
GRAPH_FAMILIES = (RANDOM_NONREGULAR, K_REGULAR)


def _is_regular(graph: nx.Graph) -> bool:
    return len({degree for _, degree in graph.degree()}) == 1


def _sample_graph(n: int, family: str, parameter: float, rng: RandomSource) -> nx.Graph:
    if family == RANDOM_NONREGULAR:
        return nx.erdos_renyi_graph(n, parameter, seed=rng.draw_seed())
    return nx.random_regular_graph(int(parameter), n, seed=rng.draw_seed())


def _check_graph_parameters(n: int, family: str, parameter: float):
    if n < 2:
        raise InfeasibleInstanceError(f"a graph needs at least 2 vertices, got {n}")

    if family == RANDOM_NONREGULAR:
        if not 0 < parameter <= 1:
            raise InfeasibleInstanceError(
                f"edge probability must lie in (0, 1], got {parameter}"
            )
    elif family == K_REGULAR:
        degree = int(parameter)
        if degree != parameter or not 1 <= degree < n or (n * degree) % 2:
            raise InfeasibleInstanceError(
                f"no {parameter}-regular graph on {n} vertices"
            )
    else:
        raise InfeasibleInstanceError(
            f"unknown graph family {family!r}, expected one of {GRAPH_FAMILIES}"
        )


def generate_maxcut_instance(
    n: int, family: str, parameter: float, rng: RandomSource
) -> MaxCutInstance:
    """
    Connected unweighted graph.

    random-nonregular: Erdos-Renyi G(n, p) resampled until it is connected and
    not regular. k-regular: uniform random d-regular graph, resampled until connected.
    """
    _check_graph_parameters(n, family, parameter)

    for attempt in range(MAX_GRAPH_ATTEMPTS):
        graph = _sample_graph(n, family, parameter, rng)

        if not nx.is_connected(graph):
            continue
        if family == RANDOM_NONREGULAR and _is_regular(graph):
            continue

        if attempt:
            experiment_logger.info(
                f"{family} graph on {n} vertices accepted after {attempt + 1} samples"
            )

        edges = tuple((int(i), int(j), 1.0) for i, j in graph.edges())
        return MaxCutInstance(
            n_vertices=n, edges=edges, seed=rng.seed, family=family
        )

    raise InfeasibleInstanceError(
        f"no acceptable {family} graph on {n} vertices with parameter {parameter} "
        f"after {MAX_GRAPH_ATTEMPTS} samples"
    )


def generate_numpart_instance(
    count: int, bound: int, rng: RandomSource
) -> NumberPartitionInstance:
    """``count`` integers uniform on {1, ..., bound}; zero is never drawn"""

    if count < 2:
        raise ValueError(f"need at least 2 numbers, got {count}")
    if bound < 1:
        raise ValueError(f"bound must be >= 1, got {bound}")

    numbers = rng.generator.integers(1, bound + 1, size=count)
    return NumberPartitionInstance(
        numbers=tuple(int(v) for v in numbers), seed=rng.seed, bound=bound
    )


def generate_portfolio_instance(
    n: int,
    q: float,
    rng: RandomSource,
    penalty_weight: float | None = None,
) -> PortfolioInstance:
    """
    mu_i ~ U[0, 1]; Sigma = F F^T / f + d I from a rank-3 factor model (PSD by
    construction); budget ~ U{0, ..., n}.
    """
    if n < 2:
        raise ValueError(f"need at least 2 assets, got {n}")
    if q <= 0:
        raise ValueError(f"risk factor must be positive, got {q}")

    returns = rng.generator.uniform(0.0, 1.0, size=n)
    factors = rng.generator.standard_normal((n, FACTOR_RANK))
    covariance = factors @ factors.T / FACTOR_RANK + COVARIANCE_JITTER * np.eye(n)
    covariance = (covariance + covariance.T) / 2
    budget = int(rng.generator.integers(0, n + 1))

    return PortfolioInstance(
        returns=returns,
        covariance=covariance,
        risk=q,
        budget=budget,
        penalty_weight=penalty_weight or 0.0,
        seed=rng.seed,
    )
