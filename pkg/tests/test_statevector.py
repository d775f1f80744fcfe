import numpy as np
import pytest
from scipy.stats import chisquare

from problems.hamiltonians import maxcut_hamiltonian
from problems.instances import MaxCutInstance
from quantum_sim.random_source import RandomSource
from quantum_sim.statevector import (
    MAX_QUBITS,
    CapacityError,
    DimensionMismatchError,
    QubitIndexError,
    StateVector,
    all_pairs_cz_signs,
    apply_cz,
    apply_cz_all_pairs,
    apply_diagonal_phase,
    apply_h,
    apply_mixer,
    apply_ry,
    new_zero_state,
    probabilities,
    sample_counts,
    uniform_state,
)

X = np.array([[0, 1], [1, 0]], dtype=complex)
I2 = np.eye(2, dtype=complex)

RING = MaxCutInstance(n_vertices=5, edges=tuple((i, (i + 1) % 5, 1.0) for i in range(5)))
RING4 = MaxCutInstance(n_vertices=4, edges=((0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)))


def random_state(n: int, seed: int) -> StateVector:
    rng = np.random.default_rng(seed)
    raw = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return StateVector(n, raw / np.linalg.norm(raw))


def dense_single(gate: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """Kronecker product ordered qubit n-1 (x) ... (x) qubit 0"""

    matrix = np.array([[1]], dtype=complex)
    for q in reversed(range(n)):
        matrix = np.kron(matrix, gate if q == qubit else I2)
    return matrix


def ry_matrix(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


class TestConstruction:
    def test_zero_state(self):
        state = new_zero_state(3)
        expected = np.zeros(8)
        expected[0] = 1
        np.testing.assert_allclose(state.amplitudes, expected)

    def test_uniform_state(self):
        state = uniform_state(4)
        np.testing.assert_allclose(probabilities(state), np.full(16, 1 / 16))

    @pytest.mark.parametrize("n", [0, MAX_QUBITS + 1])
    def test_capacity(self, n):
        with pytest.raises(CapacityError):
            new_zero_state(n)

    def test_amplitude_shape_checked(self):
        with pytest.raises(DimensionMismatchError):
            StateVector(2, np.zeros(3))

    def test_copy_is_independent(self):
        state = new_zero_state(2)
        clone = state.copy()
        apply_h(clone, 0)
        assert state.amplitudes[0] == 1


class TestGates:
    def test_ry_pi_on_second_qubit(self):
        # qubit 1 is the second-least-significant bit: |00> -> index 2
        state = apply_ry(new_zero_state(2), 1, np.pi)
        np.testing.assert_allclose(np.abs(state.amplitudes), [0, 0, 1, 0], atol=1e-12)

    def test_h_creates_superposition(self):
        state = apply_h(new_zero_state(1), 0)
        s = 1 / np.sqrt(2)
        np.testing.assert_allclose(state.amplitudes, [s, s])

    @pytest.mark.parametrize("qubit", [0, 1, 2])
    def test_ry_matches_dense_matrix(self, qubit):
        state = random_state(3, seed=qubit)
        expected = dense_single(ry_matrix(0.73), qubit, 3) @ state.amplitudes
        apply_ry(state, qubit, 0.73)
        np.testing.assert_allclose(state.amplitudes, expected, atol=1e-12)

    def test_cz_flips_only_both_set(self):
        state = apply_cz(uniform_state(2), 0, 1)
        np.testing.assert_allclose(state.amplitudes * 2, [1, 1, 1, -1])

    def test_cz_rejects_equal_qubits(self):
        with pytest.raises(QubitIndexError):
            apply_cz(new_zero_state(2), 1, 1)

    def test_qubit_out_of_range(self):
        with pytest.raises(QubitIndexError):
            apply_ry(new_zero_state(2), 2, 0.1)

    def test_all_pairs_matches_sequential_cz(self):
        state = random_state(4, seed=11)
        sequential = state.copy()
        for i in range(4):
            for j in range(i + 1, 4):
                apply_cz(sequential, i, j)

        apply_cz_all_pairs(state)
        np.testing.assert_allclose(state.amplitudes, sequential.amplitudes)

    def test_all_pairs_signs_by_weight(self):
        # weight 0, 1 -> +1; weight 2 -> -1 (one pair); weight 3 -> -1 (three pairs)
        signs = all_pairs_cz_signs(3)
        np.testing.assert_array_equal(signs, [1, 1, 1, -1, 1, -1, -1, -1])

    def test_mixer_matches_dense_product(self):
        beta = 0.41
        rx = np.cos(beta) * I2 - 1j * np.sin(beta) * X
        dense = np.array([[1]], dtype=complex)
        for _ in range(3):
            dense = np.kron(dense, rx)

        state = random_state(3, seed=5)
        expected = dense @ state.amplitudes
        apply_mixer(state, beta)
        np.testing.assert_allclose(state.amplitudes, expected, atol=1e-12)

    def test_diagonal_phase_keeps_probabilities(self):
        class Energies:
            n_qubits = 2
            energies = np.array([0.0, 1.0, 2.0, 3.0])

        state = random_state(2, seed=2)
        before = probabilities(state)
        apply_diagonal_phase(state, 1.3, Energies())
        np.testing.assert_allclose(probabilities(state), before, atol=1e-14)

    def test_diagonal_phase_dimension_mismatch(self):
        class Energies:
            n_qubits = 3
            energies = np.zeros(8)

        with pytest.raises(DimensionMismatchError):
            apply_diagonal_phase(new_zero_state(2), 0.5, Energies())

    def test_norm_drift_over_many_gates(self):
        hamiltonian = maxcut_hamiltonian(RING)
        state = new_zero_state(5)
        rng = np.random.default_rng(3)
        for _ in range(250):
            q1, q2 = (int(q) for q in rng.choice(5, size=2, replace=False))
            apply_ry(state, q1, rng.uniform(0, 2 * np.pi))
            apply_h(state, q2)
            apply_cz(state, q1, q2)
            apply_diagonal_phase(state, rng.uniform(0, np.pi), hamiltonian)
            apply_mixer(state, rng.uniform(0, np.pi))
            apply_cz_all_pairs(state)
        assert abs(state.norm() - 1.0) < 1e-9


class TestInversePairs:
    def setup_method(self):
        self.state = random_state(4, seed=21)
        self.original = self.state.amplitudes.copy()

    def assert_restored(self):
        np.testing.assert_allclose(self.state.amplitudes, self.original, atol=1e-10)

    @pytest.mark.parametrize("qubit", range(4))
    @pytest.mark.parametrize("theta", [0.3, 2.1, -4.7])
    def test_ry_then_minus_theta(self, qubit, theta):
        apply_ry(self.state, qubit, theta)
        apply_ry(self.state, qubit, -theta)
        self.assert_restored()

    @pytest.mark.parametrize("q1, q2", [(0, 1), (3, 0), (1, 2)])
    def test_cz_twice(self, q1, q2):
        apply_cz(apply_cz(self.state, q1, q2), q1, q2)
        self.assert_restored()

    @pytest.mark.parametrize("qubit", range(4))
    def test_h_twice(self, qubit):
        apply_h(apply_h(self.state, qubit), qubit)
        self.assert_restored()

    def test_all_pairs_cz_twice(self):
        apply_cz_all_pairs(apply_cz_all_pairs(self.state))
        self.assert_restored()

    @pytest.mark.parametrize("gamma", [0.2, 1.9])
    def test_phase_then_minus_gamma(self, gamma):
        hamiltonian = maxcut_hamiltonian(RING4)
        apply_diagonal_phase(self.state, gamma, hamiltonian)
        apply_diagonal_phase(self.state, -gamma, hamiltonian)
        self.assert_restored()

    def test_mixer_then_minus_beta(self):
        apply_mixer(apply_mixer(self.state, 0.77), -0.77)
        self.assert_restored()


class TestSampling:
    def test_counts_sum_to_shots(self):
        counts = sample_counts(uniform_state(3), 1000, RandomSource(1))
        assert counts.shape == (8,)
        assert counts.sum() == 1000

    def test_point_mass(self):
        state = apply_ry(new_zero_state(2), 0, np.pi)
        counts = sample_counts(state, 200, RandomSource(4))
        assert counts[1] == 200

    def test_uniform_counts_within_five_sigma(self):
        shots = 100_000
        counts = sample_counts(uniform_state(3), shots, RandomSource(9))
        sigma = np.sqrt(shots * (1 / 8) * (7 / 8))
        assert np.all(np.abs(counts - shots / 8) < 5 * sigma)

    def test_skewed_counts_pass_chi_square(self):
        state = apply_ry(new_zero_state(2), 0, 2 * np.pi / 3)
        expected = probabilities(state) * 20_000
        counts = sample_counts(state, 20_000, RandomSource(17))
        assert counts[2] == counts[3] == 0
        assert chisquare(counts[:2], expected[:2]).pvalue > 1e-4

    def test_rejects_zero_shots(self):
        with pytest.raises(ValueError):
            sample_counts(uniform_state(1), 0, RandomSource(0))

    def test_same_seed_same_counts(self):
        state = random_state(4, seed=7)
        first = sample_counts(state, 500, RandomSource(42))
        second = sample_counts(state, 500, RandomSource(42))
        np.testing.assert_array_equal(first, second)


class TestRandomSource:
    def test_derive_ignores_consumption(self):
        source = RandomSource(123)
        before = source.derive("maxcut/0/alpha=1").seed
        source.generator.uniform(size=100)
        assert source.derive("maxcut/0/alpha=1").seed == before

    def test_derive_separates_labels(self):
        source = RandomSource(123)
        assert source.derive("a").seed != source.derive("b").seed

    def test_draw_seed_in_range(self):
        seed = RandomSource(5).draw_seed()
        assert 0 <= seed < 2**31 - 1
