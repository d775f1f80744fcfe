from functools import cached_property

import numpy as np
from numpy.typing import NDArray

from quantum_sim.statevector import MAX_QUBITS, CapacityError

from .instances import (
    Instance,
    MaxCutInstance,
    NumberPartitionInstance,
    PortfolioInstance,
)
from .qubo import IsingModel, QuboProblem, binary_to_spin

EAGER_QUBITS = 20


class DiagonalHamiltonian:
    """
    Energy E_b of every computational basis state b, built from an Ising model.

    Energies are materialised at construction for n <= 20; above that the
    array is built on first access and ``energy_of`` evaluates single indices
    straight from the Ising coefficients.
    """

    def __init__(self, ising: IsingModel, problem: str = "ising", integer_valued=False):
        n = ising.n_spins
        if not 1 <= n <= MAX_QUBITS:
            raise CapacityError(f"qubit count must be in [1, {MAX_QUBITS}], got {n}")

        self.ising = ising
        self.n_qubits = n
        self.problem = problem
        self.integer_valued = integer_valued

        if n <= EAGER_QUBITS:
            _ = self.energies

    @cached_property
    def energies(self) -> NDArray[np.float64]:
        energies = self.ising.energies()
        energies.flags.writeable = False
        return energies

    @cached_property
    def energy_order(self) -> NDArray[np.int64]:
        """Basis indices by ascending energy, ties by ascending index"""
        return np.argsort(self.energies, kind="stable")

    @property
    def dimension(self) -> int:
        return 2**self.n_qubits

    @property
    def materialised(self) -> bool:
        return "energies" in self.__dict__

    def default_tie_tolerance(self) -> float:
        """0 for integer spectra, 1e-9 * max|E| otherwise"""

        if self.integer_valued:
            return 0.0
        return 1e-9 * float(np.max(np.abs(self.energies)))

    def __repr__(self):
        return f"DiagonalHamiltonian(problem={self.problem!r}, n_qubits={self.n_qubits})"


def energy_of(hamiltonian: DiagonalHamiltonian, basis_index: int) -> float:
    if not 0 <= basis_index < hamiltonian.dimension:
        raise IndexError(
            f"basis index {basis_index} out of range for {hamiltonian.n_qubits} qubits"
        )
    if hamiltonian.materialised:
        return float(hamiltonian.energies[basis_index])
    return hamiltonian.ising.energy_at(basis_index)


def maxcut_qubo(instance: MaxCutInstance) -> QuboProblem:
    """-C(x) with C(x) = sum_{(i,j)} w_ij (x_i + x_j - 2 x_i x_j)"""

    n = instance.n_vertices
    linear = np.zeros(n)
    quadratic = np.zeros((n, n))

    for i, j, w in instance.edges:
        linear[i] -= w
        linear[j] -= w
        quadratic[i, j] += w
        quadratic[j, i] += w

    return QuboProblem(linear=linear, quadratic=quadratic)


def numpart_qubo(instance: NumberPartitionInstance) -> QuboProblem:
    """(sum_i n_i (1 - 2 x_i))^2 = S^2 - 4 S n.x + 4 x.(n n^T).x"""

    numbers = np.asarray(instance.numbers, dtype=np.float64)
    total = numbers.sum()

    return QuboProblem(
        linear=-4.0 * total * numbers,
        quadratic=4.0 * np.outer(numbers, numbers),
        constant=total**2,
    )


def portfolio_qubo(instance: PortfolioInstance) -> QuboProblem:
    """-(mu.x - q x.Sigma.x) + P (sum x - B)^2"""

    n = instance.n
    penalty, budget = instance.penalty_weight, instance.budget

    linear = -instance.returns - 2.0 * penalty * budget * np.ones(n)
    quadratic = instance.risk * instance.covariance + penalty * np.ones((n, n))

    return QuboProblem(linear=linear, quadratic=quadratic, constant=penalty * budget**2)


def maxcut_hamiltonian(instance: MaxCutInstance) -> DiagonalHamiltonian:
    integer_valued = all(float(w).is_integer() for _, _, w in instance.edges)
    return DiagonalHamiltonian(
        binary_to_spin(maxcut_qubo(instance)),
        problem="maxcut",
        integer_valued=integer_valued,
    )


def numpart_hamiltonian(instance: NumberPartitionInstance) -> DiagonalHamiltonian:
    return DiagonalHamiltonian(
        binary_to_spin(numpart_qubo(instance)),
        problem="numpart",
        integer_valued=True,
    )


def portfolio_hamiltonian(instance: PortfolioInstance) -> DiagonalHamiltonian:
    return DiagonalHamiltonian(
        binary_to_spin(portfolio_qubo(instance)),
        problem="portfolio",
        integer_valued=False,
    )


def build_hamiltonian(instance: Instance) -> DiagonalHamiltonian:
    if isinstance(instance, MaxCutInstance):
        return maxcut_hamiltonian(instance)
    if isinstance(instance, NumberPartitionInstance):
        return numpart_hamiltonian(instance)
    if isinstance(instance, PortfolioInstance):
        return portfolio_hamiltonian(instance)
    raise TypeError(f"no hamiltonian encoding for {type(instance).__name__}")


def zero_hamiltonian(n: int) -> DiagonalHamiltonian:
    return DiagonalHamiltonian(
        IsingModel(linear=np.zeros(n), quadratic=np.zeros((n, n))),
        problem="zero",
        integer_valued=True,
    )
