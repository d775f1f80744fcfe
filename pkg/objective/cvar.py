import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from problems.hamiltonians import DiagonalHamiltonian
from quantum_sim.random_source import RandomSource
from quantum_sim.statevector import (
    DimensionMismatchError,
    StateVector,
    probabilities,
    sample_counts,
)

SAMPLED = "sampled"
EXACT = "exact"
OBJECTIVE_MODES = (SAMPLED, EXACT)

DEFAULT_BASE_SHOTS = 1000

# alpha * K is a product of floats; 0.3 * 10 must count as 3, not 4
CEIL_SLACK = 1e-9


class AlphaRangeError(ValueError):
    pass


def _check_alpha(alpha: float):
    if not 0 < alpha <= 1:
        raise AlphaRangeError(f"alpha must lie in (0, 1], got {alpha}")


def _ceil(value: float) -> int:
    return math.ceil(value - CEIL_SLACK)


@dataclass(frozen=True, eq=False)
class EnergySamples:
    """K measured energies, sorted ascending"""

    energies: NDArray[np.float64]

    def __post_init__(self):
        energies = np.asarray(self.energies, dtype=np.float64)
        if energies.ndim != 1 or energies.shape[0] < 1:
            raise ValueError("energy samples need at least one value")
        if np.any(np.diff(energies) < 0):
            raise ValueError("energy samples must be sorted ascending")
        object.__setattr__(self, "energies", energies)

    @classmethod
    def from_unsorted(cls, energies) -> "EnergySamples":
        return cls(np.sort(np.asarray(energies, dtype=np.float64), kind="stable"))

    @property
    def K(self) -> int:
        return self.energies.shape[0]


@dataclass(frozen=True)
class ObjectiveSpec:
    alpha: float
    base_shots: int = DEFAULT_BASE_SHOTS
    mode: str = SAMPLED

    def __post_init__(self):
        _check_alpha(self.alpha)
        if self.base_shots < 1:
            raise ValueError(f"base_shots must be >= 1, got {self.base_shots}")
        if self.mode not in OBJECTIVE_MODES:
            raise ValueError(f"mode must be one of {OBJECTIVE_MODES}, got {self.mode!r}")

    def with_alpha(self, alpha: float) -> "ObjectiveSpec":
        return ObjectiveSpec(alpha=alpha, base_shots=self.base_shots, mode=self.mode)


def cvar_from_samples(samples: EnergySamples, alpha: float) -> float:
    """Mean of the ceil(alpha K) smallest samples"""

    _check_alpha(alpha)

    tail = max(1, _ceil(alpha * samples.K))
    return float(np.mean(samples.energies[:tail]))


def _check_dimensions(state: StateVector, hamiltonian: DiagonalHamiltonian):
    if state.n_qubits != hamiltonian.n_qubits:
        raise DimensionMismatchError(
            f"state has {state.n_qubits} qubits, hamiltonian {hamiltonian.n_qubits}"
        )


def exact_cvar(state: StateVector, hamiltonian: DiagonalHamiltonian, alpha: float) -> float:
    """
    Infinite-shot CVaR: walk basis states by energy (ties by index), take
    probability mass until alpha is filled, the boundary state fractionally.
    """
    _check_alpha(alpha)
    _check_dimensions(state, hamiltonian)

    order = hamiltonian.energy_order
    energies = hamiltonian.energies[order]
    probs = probabilities(state)[order]

    mass_before = np.cumsum(probs) - probs
    taken = np.clip(alpha - mass_before, 0.0, probs)

    return float(taken @ energies / alpha)


def expectation(state: StateVector, hamiltonian: DiagonalHamiltonian) -> float:
    _check_dimensions(state, hamiltonian)
    return float(probabilities(state) @ hamiltonian.energies)


def sample_energies(
    state: StateVector,
    hamiltonian: DiagonalHamiltonian,
    shots: int,
    rng: RandomSource,
) -> EnergySamples:
    _check_dimensions(state, hamiltonian)

    counts = sample_counts(state, shots, rng)
    order = hamiltonian.energy_order
    return EnergySamples(np.repeat(hamiltonian.energies[order], counts[order]))


def shots_for_alpha(base_K: int, alpha: float) -> int:
    """ceil(K / alpha): keeps alpha K samples in the tail"""

    _check_alpha(alpha)
    return _ceil(base_K / alpha)


def evaluate(
    spec: ObjectiveSpec,
    state: StateVector,
    hamiltonian: DiagonalHamiltonian,
    rng: RandomSource,
) -> tuple[float, int]:
    """(objective value, shots spent); exact mode spends none"""

    if spec.mode == EXACT:
        return exact_cvar(state, hamiltonian, spec.alpha), 0

    shots = shots_for_alpha(spec.base_shots, spec.alpha)
    samples = sample_energies(state, hamiltonian, shots, rng)
    return cvar_from_samples(samples, spec.alpha), shots
