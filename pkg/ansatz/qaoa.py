import numpy as np

from problems.hamiltonians import DiagonalHamiltonian
from problems.instances import NumberPartitionInstance
from quantum_sim.statevector import (
    StateVector,
    apply_diagonal_phase,
    apply_mixer,
    uniform_state,
)

from .ansatz_base import AnsatzMixin


class QaoaAnsatz(AnsatzMixin):
    """
    exp(-i b_p H_B) exp(-i g_p H_C) ... exp(-i b_1 H_B) exp(-i g_1 H_C) |+>

    Parameters interleave per layer: (g_1, b_1, ..., g_p, b_p).
    """

    kind = "qaoa"

    def __init__(self, layers: int, hamiltonian: DiagonalHamiltonian):
        if layers < 1:
            raise ValueError(f"layers must be >= 1, got {layers}")

        self.layers = layers
        self.hamiltonian = hamiltonian
        self.n_qubits = hamiltonian.n_qubits

    @property
    def param_count(self) -> int:
        return 2 * self.layers

    def prepare(self, params) -> StateVector:
        params = self.checked_params(params)

        state = uniform_state(self.n_qubits)
        for gamma, beta in params.reshape(self.layers, 2):
            apply_diagonal_phase(state, gamma, self.hamiltonian)
            apply_mixer(state, beta)

        return state


def qaoa_prepare(ansatz: QaoaAnsatz, params) -> StateVector:
    return ansatz.prepare(params)


def qaoa_gamma_bound(instance: NumberPartitionInstance) -> float:
    """2 pi / (n_j n_m) for the two smallest numbers of the set"""

    if len(instance.numbers) < 2:
        raise ValueError(
            f"the gamma bound needs at least two numbers, got {instance.numbers}"
        )

    smallest, second = sorted(instance.numbers)[:2]
    return 2 * np.pi / (smallest * second)
