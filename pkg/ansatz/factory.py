import numpy as np

from problems.hamiltonians import DiagonalHamiltonian
from problems.instances import Instance, NumberPartitionInstance

from .ansatz_base import AnsatzMixin
from .hardware_efficient import HardwareEfficientAnsatz
from .qaoa import QaoaAnsatz, qaoa_gamma_bound

ANSATZ_KINDS = ("hea", "qaoa")


def param_count(ansatz: AnsatzMixin) -> int:
    return ansatz.param_count


def build_ansatz(kind: str, layers: int, hamiltonian: DiagonalHamiltonian) -> AnsatzMixin:
    if kind == "hea":
        return HardwareEfficientAnsatz(hamiltonian.n_qubits, layers)
    if kind == "qaoa":
        return QaoaAnsatz(layers, hamiltonian)
    raise ValueError(f"unknown ansatz {kind!r}, expected one of {ANSATZ_KINDS}")


def parameter_bounds(ansatz: AnsatzMixin, instance: Instance) -> np.ndarray | None:
    """
    Box for the optimiser, shape (param_count, 2). Only QAOA on number
    partitioning is boxed: gamma in [0, 2 pi / (n_j n_m)], beta in [0, pi].
    """
    if not isinstance(ansatz, QaoaAnsatz) or not isinstance(
        instance, NumberPartitionInstance
    ):
        return None

    gamma_high = qaoa_gamma_bound(instance)
    per_layer = [[0.0, gamma_high], [0.0, np.pi]]
    return np.array(per_layer * ansatz.layers, dtype=np.float64)
