from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from problems.hamiltonians import DiagonalHamiltonian
from quantum_sim.statevector import DimensionMismatchError, StateVector, probabilities


@dataclass(frozen=True, eq=False)
class GroundTruth:
    """Lowest energy and every basis index attaining it (within the tie tolerance)"""

    ground_energy: float
    optimal_indices: NDArray[np.int64]
    n_qubits: int

    def __post_init__(self):
        indices = np.asarray(self.optimal_indices, dtype=np.int64)
        if indices.ndim != 1 or indices.shape[0] < 1:
            raise ValueError("a ground truth needs at least one optimal index")
        object.__setattr__(self, "optimal_indices", indices)

    @property
    def degeneracy(self) -> int:
        return int(self.optimal_indices.shape[0])

    def to_dict(self) -> dict:
        return {
            "ground_energy": float(self.ground_energy),
            "optimal_indices": [int(i) for i in self.optimal_indices],
            "degeneracy": self.degeneracy,
        }


def brute_force_ground(
    hamiltonian: DiagonalHamiltonian, tie_tolerance: float | None = None
) -> GroundTruth:
    if tie_tolerance is None:
        tie_tolerance = hamiltonian.default_tie_tolerance()
    if tie_tolerance < 0:
        raise ValueError(f"tie tolerance must be >= 0, got {tie_tolerance}")

    energies = hamiltonian.energies
    ground = float(np.min(energies))
    optimal = np.flatnonzero(energies <= ground + tie_tolerance)

    return GroundTruth(
        ground_energy=ground, optimal_indices=optimal, n_qubits=hamiltonian.n_qubits
    )


def overlap(state: StateVector, truth: GroundTruth) -> float:
    """Probability of measuring one of the optimal basis states"""

    if state.n_qubits != truth.n_qubits:
        raise DimensionMismatchError(
            f"state has {state.n_qubits} qubits, ground truth {truth.n_qubits}"
        )

    mass = float(np.sum(probabilities(state)[truth.optimal_indices]))
    return min(max(mass, 0.0), 1.0)
