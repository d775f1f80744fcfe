import math

import numpy as np
import pytest

from objective.cvar import (
    EXACT,
    SAMPLED,
    AlphaRangeError,
    EnergySamples,
    ObjectiveSpec,
    cvar_from_samples,
    evaluate,
    exact_cvar,
    expectation,
    sample_energies,
    shots_for_alpha,
)
from problems.hamiltonians import DiagonalHamiltonian
from problems.qubo import IsingModel
from quantum_sim.random_source import RandomSource
from quantum_sim.statevector import StateVector, probabilities, uniform_state


def ladder(n: int) -> DiagonalHamiltonian:
    """E(b) = b for every basis index b"""

    linear = np.array([-(2.0**i) / 2 for i in range(n)])
    ising = IsingModel(
        linear=linear, quadratic=np.zeros((n, n)), constant=(2.0**n - 1) / 2
    )
    return DiagonalHamiltonian(ising, integer_valued=True)


def state_from_probabilities(probs) -> StateVector:
    probs = np.asarray(probs, dtype=np.float64)
    n = int(np.log2(probs.shape[0]))
    return StateVector(n, np.sqrt(probs).astype(complex))


def random_hamiltonian(n: int, rng: np.random.Generator) -> DiagonalHamiltonian:
    ising = IsingModel(
        linear=rng.normal(size=n),
        quadratic=np.triu(rng.normal(size=(n, n)), k=1),
        constant=float(rng.normal()),
    )
    return DiagonalHamiltonian(ising)


def tail_means(levels: np.ndarray, counts: np.ndarray, alpha: float) -> np.ndarray:
    """Lowest-ceil(alpha K) mean for each row of level counts"""

    shots = int(counts[0].sum())
    tail = math.ceil(alpha * shots - 1e-9)
    before = np.cumsum(counts, axis=1) - counts
    taken = np.clip(tail - before, 0, counts)
    return taken @ levels / tail


def random_state(n: int, rng: np.random.Generator) -> StateVector:
    raw = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return StateVector(n, raw / np.linalg.norm(raw))


class TestCvarFromSamples:
    def test_alpha_one_is_mean(self):
        assert cvar_from_samples(EnergySamples(np.array([1.0, 2, 3, 4])), 1.0) == 2.5

    def test_half_tail(self):
        assert cvar_from_samples(EnergySamples(np.array([1.0, 2, 3, 4])), 0.5) == 1.5

    def test_tiny_alpha_takes_one_sample(self):
        assert cvar_from_samples(EnergySamples(np.array([5.0, 5, 5])), 0.01) == 5

    def test_float_product_is_not_over_ceiled(self):
        # 0.3 * 10 is 3.0000000000000004 in floating point
        samples = EnergySamples(np.arange(10, dtype=float))
        assert cvar_from_samples(samples, 0.3) == pytest.approx(1.0)

    @pytest.mark.parametrize("alpha", [0.0, -0.1, 1.5])
    def test_alpha_range(self, alpha):
        with pytest.raises(AlphaRangeError):
            cvar_from_samples(EnergySamples(np.array([1.0])), alpha)

    def test_samples_must_be_sorted(self):
        with pytest.raises(ValueError):
            EnergySamples(np.array([2.0, 1.0]))

    def test_monotone_and_bounded(self):
        rng = np.random.default_rng(0)
        for _ in range(1000):
            samples = EnergySamples.from_unsorted(rng.normal(size=rng.integers(1, 40)))
            a1, a2 = np.sort(rng.uniform(0.001, 1.0, size=2))
            low, high = cvar_from_samples(samples, a1), cvar_from_samples(samples, a2)
            assert low <= high + 1e-12
            assert samples.energies.min() - 1e-12 <= low
            assert high <= samples.energies.mean() + 1e-12


class TestExactCvar:
    def test_quarter_of_uniform(self):
        assert exact_cvar(uniform_state(2), ladder(2), 0.25) == pytest.approx(0.0, abs=1e-15)

    def test_fractional_boundary(self):
        assert exact_cvar(uniform_state(2), ladder(2), 0.375) == pytest.approx(1 / 3)

    def test_alpha_one_is_expectation(self):
        rng = np.random.default_rng(1)
        h = ladder(4)
        for _ in range(1000):
            state = random_state(4, rng)
            expected = float(probabilities(state) @ h.energies)
            assert exact_cvar(state, h, 1.0) == pytest.approx(expected, abs=1e-10)
            assert expectation(state, h) == pytest.approx(expected, abs=1e-10)

    def test_monotone_and_bounded(self):
        rng = np.random.default_rng(2)
        h = ladder(3)
        for _ in range(1000):
            state = random_state(3, rng)
            a1, a2 = np.sort(rng.uniform(0.001, 1.0, size=2))
            low, high = exact_cvar(state, h, a1), exact_cvar(state, h, a2)
            assert low <= high + 1e-10
            assert h.energies.min() - 1e-10 <= low
            assert high <= expectation(state, h) + 1e-10

    def test_ground_mass_pins_small_alphas(self):
        # 0.3 of the mass on the unique ground state |111>, the rest spread evenly
        ising = IsingModel(linear=np.array([1.0, 2.0, 4.0]), quadratic=np.zeros((3, 3)))
        h = DiagonalHamiltonian(ising)
        probs = np.full(8, 0.1)
        probs[7] = 0.3
        state = state_from_probabilities(probs)

        assert h.energies[7] == -7
        for alpha in (0.05, 0.1, 0.2, 0.3):
            assert exact_cvar(state, h, alpha) == pytest.approx(-7.0, abs=1e-12)
        assert exact_cvar(state, h, 0.5) > -7.0 + 1e-6

    def test_small_alpha_minimiser_need_not_minimise_larger_alpha(self):
        h = ladder(2)
        split = state_from_probabilities([0.5, 0, 0, 0.5])
        ground = state_from_probabilities([1, 0, 0, 0])

        # both minimise CVaR_0.5 ...
        assert exact_cvar(split, h, 0.5) == pytest.approx(0.0, abs=1e-15)
        assert exact_cvar(ground, h, 0.5) == pytest.approx(0.0, abs=1e-15)
        # ... but only one minimises CVaR_0.9
        assert exact_cvar(split, h, 0.9) > exact_cvar(ground, h, 0.9) + 1.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            exact_cvar(uniform_state(3), ladder(2), 0.5)


class TestSampling:
    def test_point_mass(self):
        h = ladder(2)
        state = state_from_probabilities([0, 0, 1, 0])
        samples = sample_energies(state, h, 50, RandomSource(0))
        np.testing.assert_array_equal(samples.energies, np.full(50, 2.0))

    def test_sorted_and_deterministic(self):
        h = ladder(3)
        first = sample_energies(uniform_state(3), h, 300, RandomSource(8))
        second = sample_energies(uniform_state(3), h, 300, RandomSource(8))
        assert first.K == 300
        assert np.all(np.diff(first.energies) >= 0)
        np.testing.assert_array_equal(first.energies, second.energies)

    def test_sample_mean_near_expectation(self):
        h = ladder(3)
        shots = 100_000
        samples = sample_energies(uniform_state(3), h, shots, RandomSource(13))
        variance = np.mean(h.energies**2) - np.mean(h.energies) ** 2
        assert abs(samples.energies.mean() - 3.5) < 4 * np.sqrt(variance / shots)


class TestShots:
    @pytest.mark.parametrize(
        "alpha, shots", [(0.1, 10_000), (1.0, 1000), (0.03, 33_334), (0.5, 2000)]
    )
    def test_scaling(self, alpha, shots):
        assert shots_for_alpha(1000, alpha) == shots


class TestEvaluate:
    def test_exact_mode(self):
        value, shots = evaluate(
            ObjectiveSpec(alpha=1.0, mode=EXACT), uniform_state(2), ladder(2), RandomSource(0)
        )
        assert value == pytest.approx(1.5)
        assert shots == 0

    def test_sampled_point_mass(self):
        state = state_from_probabilities([1, 0, 0, 0])
        value, shots = evaluate(
            ObjectiveSpec(alpha=0.2, base_shots=1000, mode=SAMPLED),
            state,
            ladder(2),
            RandomSource(0),
        )
        assert value == 0
        assert shots == 5000

    def test_sampled_agrees_with_exact(self):
        rng = np.random.default_rng(21)
        shots = 100_000
        outside = 0
        for case in range(1000):
            n = int(rng.integers(1, 5))
            h = random_hamiltonian(n, rng)
            state = random_state(n, rng)
            alpha = float(rng.uniform(0.01, 1.0))

            samples = sample_energies(state, h, shots, RandomSource(case))
            estimate = cvar_from_samples(samples, alpha)

            levels, counts = np.unique(samples.energies, return_counts=True)
            replicates = rng.multinomial(shots, counts / shots, size=200)
            standard_error = float(np.std(tail_means(levels, replicates, alpha)))

            if abs(estimate - exact_cvar(state, h, alpha)) > 3 * standard_error + 1e-9:
                outside += 1

        # about 0.3% of cases land outside three standard errors
        assert outside <= 10

    def test_spec_validation(self):
        with pytest.raises(AlphaRangeError):
            ObjectiveSpec(alpha=0.0)
        with pytest.raises(ValueError):
            ObjectiveSpec(alpha=0.5, mode="analytic")
        with pytest.raises(ValueError):
            ObjectiveSpec(alpha=0.5, base_shots=0)
