import itertools
import math

import numpy as np
import pytest

from photonbench.counting import pair_distribution
from photonbench.detectors import CLICK, SnspdModel
from photonbench.errors import (
    DimensionError,
    ImpossibleOutcomeError,
    NonUnitaryError,
    TruncationError,
    UnphysicalParameterError,
)
from photonbench.fock import (
    DensityOperator,
    DetectionPattern,
    FockState,
    ModeTransform,
    apply_loss,
    apply_transform,
    condition_on,
    coupler,
    evolution_matrix,
    fock_basis,
    fock_space,
    pair_state,
    partial_trace,
    pattern_probability,
    permanent,
    sample_detections,
    symmetric_power,
    tensor_product,
    transition_amplitude,
)


def random_unitary(modes, rng):
    z = rng.normal(size=(modes, modes)) + 1j * rng.normal(size=(modes, modes))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def brute_force_permanent(matrix):
    n = matrix.shape[0]
    return sum(
        np.prod([matrix[i, sigma[i]] for i in range(n)]) for sigma in itertools.permutations(range(n))
    )


@pytest.fixture
def hom_state():
    return apply_transform(FockState.from_occupation((1, 1)), coupler(0.5))


@pytest.mark.unit
class TestFockBasis(object):
    def test_order_and_size(self):
        assert fock_basis(2, 2) == [(2, 0), (1, 1), (0, 2)]
        assert len(fock_basis(4, 3)) == math.comb(6, 3)

    def test_space_holds_every_sector(self):
        space = fock_space(2, 2)

        assert space[0] == (0, 0)
        assert len(space) == 1 + 2 + 3

    def test_pattern_rejects_negative_counts(self):
        with pytest.raises(UnphysicalParameterError):
            DetectionPattern((1, -1))

    def test_pattern_modes(self):
        pattern = DetectionPattern((1, None, CLICK))

        assert pattern.monitored == [0, 2]
        assert pattern.remaining == [1]


@pytest.mark.unit
class TestPermanent(object):
    def test_all_ones(self):
        for n in range(1, 7):
            assert abs(permanent(np.ones((n, n))) - math.factorial(n)) < 1e-9

    def test_identity(self):
        assert abs(permanent(np.eye(8)) - 1.0) < 1e-12

    def test_matches_brute_force(self):
        rng = np.random.default_rng(11)
        for n in (2, 3, 4, 5):
            matrix = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            assert abs(permanent(matrix) - brute_force_permanent(matrix)) < 1e-9

    def test_non_square(self):
        with pytest.raises(DimensionError):
            permanent(np.ones((2, 3)))

    def test_too_many_photons(self):
        with pytest.raises(TruncationError):
            permanent(np.ones((13, 13)))


@pytest.mark.unit
class TestEvolution(object):
    def test_hom_cancellation(self, hom_state):
        assert abs(hom_state.amplitude((1, 1))) ** 2 < 1e-12
        assert abs(abs(hom_state.amplitude((2, 0))) ** 2 - 0.5) < 1e-12
        assert abs(abs(hom_state.amplitude((0, 2))) ** 2 - 0.5) < 1e-12

    def test_output_probabilities_sum_to_one(self):
        rng = np.random.default_rng(3)
        u = random_unitary(3, rng)
        source = (1, 1, 1)

        total = sum(abs(transition_amplitude(u, source, target)) ** 2 for target in fock_basis(3, 3))

        assert abs(total - 1.0) < 1e-10

    def test_oracle_equivalence(self):
        rng = np.random.default_rng(2024)
        for modes in range(1, 5):
            for photons in range(1, 4):
                for _ in range(25):
                    u = random_unitary(modes, rng)
                    assert np.allclose(evolution_matrix(u, photons), symmetric_power(u, photons), atol=1e-9)

    def test_sector_is_unitary(self):
        u = ModeTransform(random_unitary(4, np.random.default_rng(5)))
        sector = u.sector(3)

        assert np.allclose(sector.conj().T.dot(sector), np.eye(sector.shape[0]), atol=1e-10)

    def test_two_balanced_couplers_swap(self):
        swap = coupler(0.5).then(coupler(0.5))
        state = apply_transform(FockState.from_occupation((1, 0)), swap)

        assert abs(abs(state.amplitude((0, 1))) - 1.0) < 1e-12

    def test_embed(self):
        transform = coupler(0.5).embed([1, 2], 3)
        state = apply_transform(FockState.from_occupation((1, 1, 1)), transform)

        assert abs(state.amplitude((1, 1, 1))) ** 2 < 1e-12
        assert abs(abs(state.amplitude((1, 2, 0))) ** 2 - 0.5) < 1e-12

    def test_lossless_flag_checked(self):
        with pytest.raises(NonUnitaryError):
            ModeTransform(0.5 * np.eye(2))

    def test_amplifying_transform_rejected(self):
        with pytest.raises(NonUnitaryError):
            ModeTransform(2.0 * np.eye(2), lossless=False)

    def test_lossy_transform_needs_apply_loss(self):
        with pytest.raises(NonUnitaryError):
            apply_transform(FockState.from_occupation((1, 0)), ModeTransform(0.5 * np.eye(2), lossless=False))

    def test_mode_mismatch(self):
        with pytest.raises(DimensionError):
            apply_transform(FockState.from_occupation((1, 0, 0)), coupler(0.5))

    def test_density_evolution_matches_state(self, hom_state):
        rho = DensityOperator.from_state(FockState.from_occupation((1, 1))).evolve(coupler(0.5))

        for vector, p in hom_state.probabilities().items():
            assert abs(rho.probabilities()[vector] - p) < 1e-12


@pytest.mark.unit
class TestStates(object):
    def test_json_round_trip(self, hom_state):
        restored = FockState.from_json(hom_state.to_json())

        assert restored.basis == hom_state.basis
        assert np.allclose(restored.amplitudes, hom_state.amplitudes)

    def test_normalization(self):
        state = FockState([(1, 0), (0, 1)], [1.0, 1.0])

        assert not state.is_normalized()
        assert state.normalized().is_normalized()

    def test_duplicate_basis(self):
        with pytest.raises(DimensionError):
            FockState([(1, 0), (1, 0)], [1.0, 0.0])

    def test_density_trace_checked(self):
        with pytest.raises(TruncationError):
            DensityOperator([(0,), (1,)], [[0.5, 0.0], [0.0, 0.4]])

    def test_density_must_be_positive(self):
        with pytest.raises(DimensionError):
            DensityOperator([(0,), (1,)], [[1.5, 0.0], [0.0, -0.5]])

    def test_tensor_product(self):
        joint = tensor_product(FockState.from_occupation((1,)), FockState.from_occupation((0, 2)))

        assert joint.basis == [(1, 0, 2)]
        assert abs(joint.amplitude((1, 0, 2)) - 1.0) < 1e-12

    def test_pair_state_marginal_is_thermal(self):
        mu = 0.01
        reduced = partial_trace(pair_state(mu), [0])
        expected = pair_distribution(mu)

        for n, p in reduced.photon_number_distribution(0).items():
            assert abs(p - expected[n]) < 1e-12

    def test_pair_state_purity_of_marginal(self):
        mu = 0.05
        reduced = partial_trace(pair_state(mu), [1])
        expected = np.sum(pair_distribution(mu) ** 2)

        assert abs(reduced.purity() - expected) < 1e-10


@pytest.mark.unit
class TestLoss(object):
    def test_single_photon(self):
        rho = apply_loss(FockState.from_occupation((1,)), 0.3)
        probabilities = rho.probabilities()

        assert abs(probabilities[(1,)] - 0.3) < 1e-12
        assert abs(probabilities[(0,)] - 0.7) < 1e-12

    def test_binomial_thinning(self):
        probabilities = apply_loss(FockState.from_occupation((2,)), 0.5).probabilities()

        assert abs(probabilities[(2,)] - 0.25) < 1e-12
        assert abs(probabilities[(1,)] - 0.5) < 1e-12
        assert abs(probabilities[(0,)] - 0.25) < 1e-12

    def test_per_mode_efficiencies(self):
        rho = apply_loss(FockState.from_occupation((1, 1)), [1.0, 0.0])

        assert abs(rho.probabilities()[(1, 0)] - 1.0) < 1e-12

    def test_loss_keeps_trace(self, hom_state):
        rho = apply_loss(hom_state, 0.8)

        assert abs(np.trace(rho.matrix) - 1.0) < 1e-12

    def test_loss_out_of_range(self):
        with pytest.raises(UnphysicalParameterError):
            apply_loss(FockState.from_occupation((1,)), 1.2)


@pytest.mark.unit
class TestDetection(object):
    def test_ideal_number_resolving(self, hom_state):
        assert pattern_probability(hom_state, (1, 1)) < 1e-12
        assert abs(pattern_probability(hom_state, (2, 0)) - 0.5) < 1e-12

    def test_threshold_clicks(self, hom_state):
        assert pattern_probability(hom_state, (CLICK, CLICK)) < 1e-12
        assert abs(pattern_probability(hom_state, (CLICK, 0)) - 0.5) < 1e-12

    def test_lossy_threshold_detector(self):
        detector = SnspdModel.from_click_probability(0.5)
        probability = pattern_probability(FockState.from_occupation((1,)), (CLICK,), detector)

        assert abs(probability - 0.5) < 1e-12

    def test_herald_pair_state(self):
        mu = 0.01
        heralded, probability = condition_on(pair_state(mu), (1, None))

        assert abs(probability - pair_distribution(mu)[1]) < 1e-12
        assert abs(heralded.probabilities()[(1,)] - 1.0) < 1e-12

    def test_threshold_herald_mixes_photon_numbers(self):
        mu = 0.1
        heralded, probability = condition_on(pair_state(mu), (CLICK, None))
        distribution = pair_distribution(mu)

        assert abs(probability - (1.0 - distribution[0])) < 1e-12
        assert heralded.probabilities()[(2,)] > 0.0
        assert heralded.purity() < 1.0

    def test_impossible_pattern(self):
        with pytest.raises(ImpossibleOutcomeError):
            condition_on(FockState.from_occupation((1, 0)), (3, None))

    def test_pattern_must_monitor_a_mode(self, hom_state):
        with pytest.raises(DimensionError):
            pattern_probability(hom_state, (None, None))

    def test_sampling_is_reproducible(self, hom_state):
        first = sample_detections(hom_state, None, 9, 200)
        second = sample_detections(hom_state, None, 9, 200)

        assert first == second

    def test_sampled_frequencies(self, hom_state):
        patterns = sample_detections(hom_state, None, 1, 4000)
        bunched = sum(1 for pattern in patterns if pattern == (2, 0))

        assert all(pattern in ((2, 0), (0, 2)) for pattern in patterns)
        assert abs(bunched / 4000.0 - 0.5) < 0.05
