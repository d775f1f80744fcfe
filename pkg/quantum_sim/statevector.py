from typing import Protocol

import numpy as np
from numpy.typing import NDArray

from .random_source import RandomSource

MAX_QUBITS = 24

AMPLITUDE_DTYPE = np.complex128


class CapacityError(ValueError):
    pass


class QubitIndexError(ValueError):
    pass


class DimensionMismatchError(ValueError):
    pass


class DiagonalEnergies(Protocol):
    n_qubits: int

    @property
    def energies(self) -> NDArray[np.float64]: ...


class StateVector:
    """
    2^n complex amplitudes of an n-qubit register.

    Qubit 0 is the least-significant bit of the basis-state index.
    Gates mutate ``amplitudes`` in place and return the same object,
    so calls can be chained or used as plain statements.
    """

    def __init__(self, n_qubits: int, amplitudes: NDArray[np.complex128]):
        _check_capacity(n_qubits)

        amplitudes = np.ascontiguousarray(amplitudes, dtype=AMPLITUDE_DTYPE)
        if amplitudes.shape != (2**n_qubits,):
            raise DimensionMismatchError(
                f"expected {2**n_qubits} amplitudes for {n_qubits} qubits, got shape {amplitudes.shape}"
            )

        self.n_qubits = n_qubits
        self.amplitudes = amplitudes

    @property
    def dimension(self) -> int:
        return self.amplitudes.shape[0]

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def __repr__(self):
        return f"StateVector(n_qubits={self.n_qubits})"


def _check_capacity(n: int):
    if not 1 <= n <= MAX_QUBITS:
        raise CapacityError(f"qubit count must be in [1, {MAX_QUBITS}], got {n}")


def _check_qubit(state: StateVector, qubit: int):
    if not 0 <= qubit < state.n_qubits:
        raise QubitIndexError(
            f"qubit {qubit} out of range for a {state.n_qubits}-qubit register"
        )


def _qubit_view(state: StateVector, qubit: int) -> NDArray[np.complex128]:
    """
    View with axis 1 selecting the value of ``qubit``:
    index = high * 2^(q+1) + bit * 2^q + low
    """
    return state.amplitudes.reshape(-1, 2, 2**qubit)


def new_zero_state(n: int) -> StateVector:
    _check_capacity(n)

    amplitudes = np.zeros(2**n, dtype=AMPLITUDE_DTYPE)
    amplitudes[0] = 1.0
    return StateVector(n, amplitudes)


def uniform_state(n: int) -> StateVector:
    """|+>^n, the ground state of the transverse-field mixer"""

    _check_capacity(n)

    amplitudes = np.full(2**n, 1.0 / np.sqrt(2**n), dtype=AMPLITUDE_DTYPE)
    return StateVector(n, amplitudes)


def apply_ry(state: StateVector, qubit: int, theta: float) -> StateVector:
    _check_qubit(state, qubit)

    c, s = np.cos(theta / 2), np.sin(theta / 2)
    view = _qubit_view(state, qubit)

    a0 = view[:, 0, :].copy()
    a1 = view[:, 1, :]
    view[:, 0, :] = c * a0 - s * a1
    view[:, 1, :] = s * a0 + c * a1
    return state


def apply_h(state: StateVector, qubit: int) -> StateVector:
    _check_qubit(state, qubit)

    r = 1.0 / np.sqrt(2.0)
    view = _qubit_view(state, qubit)

    a0 = view[:, 0, :].copy()
    a1 = view[:, 1, :]
    view[:, 0, :] = r * (a0 + a1)
    view[:, 1, :] = r * (a0 - a1)
    return state


def apply_cz(state: StateVector, q1: int, q2: int) -> StateVector:
    _check_qubit(state, q1)
    _check_qubit(state, q2)
    if q1 == q2:
        raise QubitIndexError(f"CZ needs two distinct qubits, got {q1} twice")

    indices = np.arange(state.dimension)
    both_set = ((indices >> q1) & 1) & ((indices >> q2) & 1)
    state.amplitudes[both_set.astype(bool)] *= -1
    return state


def all_pairs_cz_signs(n: int) -> NDArray[np.float64]:
    """
    Diagonal of prod_{i<j} CZ_ij: a basis state of Hamming weight w
    collects C(w, 2) sign flips.
    """
    _check_capacity(n)

    indices = np.arange(2**n, dtype=np.uint32)
    weights = np.bitwise_count(indices).astype(np.int64)
    pairs = weights * (weights - 1) // 2
    return np.where(pairs % 2 == 0, 1.0, -1.0)


def apply_cz_all_pairs(
    state: StateVector, signs: NDArray[np.float64] | None = None
) -> StateVector:
    """Every CZ_ij with i < j in one pass; pass precomputed ``signs`` in hot loops"""

    if signs is None:
        signs = all_pairs_cz_signs(state.n_qubits)
    state.amplitudes *= signs
    return state


def apply_mixer(state: StateVector, beta: float) -> StateVector:
    """exp(-i beta X) on every qubit, i.e. an x-rotation by 2*beta per wire"""

    c, s = np.cos(beta), np.sin(beta)

    for qubit in range(state.n_qubits):
        view = _qubit_view(state, qubit)
        a0 = view[:, 0, :].copy()
        a1 = view[:, 1, :].copy()
        view[:, 0, :] = c * a0 - 1j * s * a1
        view[:, 1, :] = c * a1 - 1j * s * a0

    return state


def apply_diagonal_phase(
    state: StateVector, gamma: float, hamiltonian: DiagonalEnergies
) -> StateVector:
    if hamiltonian.n_qubits != state.n_qubits:
        raise DimensionMismatchError(
            f"hamiltonian acts on {hamiltonian.n_qubits} qubits, state has {state.n_qubits}"
        )

    state.amplitudes *= np.exp(-1j * gamma * hamiltonian.energies)
    return state


def probabilities(state: StateVector) -> NDArray[np.float64]:
    return np.abs(state.amplitudes) ** 2


def sample_counts(
    state: StateVector, shots: int, rng: RandomSource
) -> NDArray[np.int64]:
    """
    Measure ``shots`` times in the computational basis.

    The multiset of outcomes is returned as a count per basis index
    (length 2^n, summing to ``shots``).
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")

    probs = probabilities(state)
    probs = probs / probs.sum()
    return rng.generator.multinomial(shots, probs)
