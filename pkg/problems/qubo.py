from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray


@dataclass(frozen=True, eq=False)
class QuboProblem:
    """
    min_x  b.x + x.A.x + constant  over x in {0, 1}^n

    ``quadratic`` is canonicalised to (A + A^T) / 2 on construction.
    """

    linear: NDArray[np.float64]
    quadratic: NDArray[np.float64]
    constant: float = 0.0

    def __post_init__(self):
        linear = np.asarray(self.linear, dtype=np.float64)
        quadratic = np.asarray(self.quadratic, dtype=np.float64)

        n = linear.shape[0]
        if quadratic.shape != (n, n):
            raise ValueError(
                f"quadratic term must be {n}x{n}, got shape {quadratic.shape}"
            )

        object.__setattr__(self, "linear", linear)
        object.__setattr__(self, "quadratic", (quadratic + quadratic.T) / 2)
        object.__setattr__(self, "constant", float(self.constant))

    @property
    def n_variables(self) -> int:
        return self.linear.shape[0]

    def cost(self, x: NDArray) -> float:
        x = np.asarray(x, dtype=np.float64)
        return float(self.linear @ x + x @ self.quadratic @ x + self.constant)


@dataclass(frozen=True, eq=False)
class IsingModel:
    """
    c.z + z.Q.z + constant  over z in {-1, +1}^n, with Q symmetric and zero on the diagonal

    A diagonal passed in is folded into the constant, since z_i^2 = 1.
    """

    linear: NDArray[np.float64]
    quadratic: NDArray[np.float64]
    constant: float = 0.0

    def __post_init__(self):
        linear = np.asarray(self.linear, dtype=np.float64)
        quadratic = np.asarray(self.quadratic, dtype=np.float64)

        n = linear.shape[0]
        if quadratic.shape != (n, n):
            raise ValueError(
                f"quadratic term must be {n}x{n}, got shape {quadratic.shape}"
            )

        constant = float(self.constant) + float(np.trace(quadratic))
        quadratic = (quadratic + quadratic.T) / 2
        np.fill_diagonal(quadratic, 0.0)

        object.__setattr__(self, "linear", linear)
        object.__setattr__(self, "quadratic", quadratic)
        object.__setattr__(self, "constant", constant)

    @property
    def n_spins(self) -> int:
        return self.linear.shape[0]

    def cost(self, z: NDArray) -> float:
        z = np.asarray(z, dtype=np.float64)
        return float(self.linear @ z + z @ self.quadratic @ z + self.constant)

    def spin_columns(self) -> NDArray[np.int8]:
        """Row i holds z_i = 1 - 2 * bit_i for every basis index (qubit 0 = LSB)"""

        indices = np.arange(2**self.n_spins, dtype=np.int64)
        rows = [
            (1 - 2 * ((indices >> i) & 1)).astype(np.int8)
            for i in range(self.n_spins)
        ]
        return np.stack(rows)

    def energies(self) -> NDArray[np.float64]:
        """Energy of every basis state, accumulated term by term to keep memory at O(n 2^n) bytes"""

        spins = self.spin_columns()
        energies = np.full(2**self.n_spins, self.constant, dtype=np.float64)

        for i in range(self.n_spins):
            if self.linear[i] != 0:
                energies += self.linear[i] * spins[i]

        for i in range(self.n_spins):
            for j in range(i + 1, self.n_spins):
                coupling = self.quadratic[i, j] + self.quadratic[j, i]
                if coupling != 0:
                    energies += coupling * (spins[i] * spins[j])

        return energies

    def energy_at(self, basis_index: int) -> float:
        bits = np.array([(basis_index >> i) & 1 for i in range(self.n_spins)])
        return self.cost(1 - 2 * bits)


def bits_of(basis_index: int, n: int) -> NDArray[np.int64]:
    return np.array([(basis_index >> i) & 1 for i in range(n)], dtype=np.int64)


def binary_to_spin(qubo: QuboProblem) -> IsingModel:
    """
    Substitute x_i = (1 - z_i) / 2.

    With A symmetric:
        c_i      = -b_i / 2 - sum_j A_ij / 2
        Q_ij     = A_ij / 4            (i != j)
        constant = sum b / 2 + sum A / 4 + trace A / 4 + qubo constant
    the diagonal A_ii z_i^2 = A_ii folds into the constant.
    """
    b, a = qubo.linear, qubo.quadratic

    linear = -b / 2 - a.sum(axis=1) / 2

    quadratic = a / 4
    np.fill_diagonal(quadratic, 0.0)

    constant = b.sum() / 2 + a.sum() / 4 + np.trace(a) / 4 + qubo.constant

    return IsingModel(linear=linear, quadratic=quadratic, constant=float(constant))
