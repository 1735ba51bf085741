import numpy as np
import pytest

from photonbench.errors import DimensionError, GridError, UnphysicalParameterError
from photonbench.spectral import (
    FrequencyGrid,
    JointSpectralAmplitude,
    PumpSpectrum,
    ResonatorParams,
    build_cascaded_jsa,
    build_single_ring_jsa,
    design_mzi_coupled,
    detuning_sweep,
    export_jsa_csv,
    heralded_state,
    import_jsa_csv,
    indistinguishability,
    optimize_cascade,
    optimize_pump_bandwidth,
    schmidt,
    spectral_overlap,
)


@pytest.fixture
def ring():
    return ResonatorParams(linewidth_ghz=1.0)


@pytest.fixture
def grid():
    return FrequencyGrid.for_linewidth(1.0, points=128)


@pytest.mark.unit
class TestGrid(object):
    def test_offsets_are_centered(self, grid):
        offsets = grid.offsets_ghz

        assert offsets.size == 128
        assert abs(offsets[0] + offsets[-1]) < 1e-12
        assert abs(offsets[1] - offsets[0] - grid.spacing_ghz) < 1e-12

    def test_too_few_points(self):
        with pytest.raises(GridError):
            FrequencyGrid(points=32)

    def test_span_must_hold_the_resonance(self, ring):
        narrow = FrequencyGrid(span_ghz=4.0, points=64)

        with pytest.raises(GridError):
            build_single_ring_jsa(ring, PumpSpectrum(1.0), narrow)

    def test_equality(self):
        assert FrequencyGrid(span_ghz=40.0) == FrequencyGrid(span_ghz=40.0)
        assert FrequencyGrid(span_ghz=40.0) != FrequencyGrid(span_ghz=80.0)


@pytest.mark.unit
class TestJointSpectralAmplitude(object):
    def test_normalized(self, ring, grid):
        jsa = build_single_ring_jsa(ring, PumpSpectrum(1.0), grid)

        assert abs(jsa.norm - 1.0) < 1e-12

    def test_exchange_symmetry(self, ring, grid):
        jsa = build_single_ring_jsa(ring, PumpSpectrum(1.5), grid)

        assert np.allclose(jsa.matrix, jsa.exchanged().matrix, atol=1e-14)

    def test_shape_mismatch(self, grid):
        with pytest.raises(DimensionError):
            JointSpectralAmplitude(grid, np.ones((4, 4)))

    def test_vanishing(self, grid):
        with pytest.raises(GridError):
            JointSpectralAmplitude(grid, np.zeros((128, 128)))

    def test_schmidt_requires_normalized_amplitude(self, grid):
        jsa = JointSpectralAmplitude(grid, 2.0 * np.eye(128) / np.sqrt(128), normalize=False)

        with pytest.raises(UnphysicalParameterError):
            schmidt(jsa)

    def test_schmidt_coefficients(self, ring, grid):
        decomposition = schmidt(build_single_ring_jsa(ring, PumpSpectrum(1.0), grid))

        assert abs(np.sum(decomposition.coefficients ** 2) - 1.0) < 1e-10
        assert abs(decomposition.purity - np.sum(decomposition.coefficients ** 4)) < 1e-12

    def test_separable_amplitude_is_pure(self, grid):
        profile = np.exp(-grid.offsets_ghz ** 2)
        jsa = JointSpectralAmplitude(grid, np.outer(profile, profile))

        assert abs(jsa.purity() - 1.0) < 1e-10

    def test_csv_round_trip(self, ring, tmpdir):
        small = FrequencyGrid.for_linewidth(1.0, points=64)
        jsa = build_single_ring_jsa(ring, PumpSpectrum(1.0), small)
        path = str(tmpdir.join("jsa.csv"))

        export_jsa_csv(jsa, path)
        loaded = import_jsa_csv(path)

        assert loaded.grid == small
        assert np.allclose(loaded.matrix, jsa.matrix, atol=1e-15)


@pytest.mark.unit
class TestPurity(object):
    def test_single_ring_optimum(self, ring, grid):
        pump, purity = optimize_pump_bandwidth(
            lambda p: build_single_ring_jsa(ring, p, grid), ring.linewidth_ghz
        )

        assert 0.85 <= purity <= 0.97
        assert pump.bandwidth_ghz > 0.0

    def test_continuous_wave_pump_is_anti_correlated(self, ring):
        # a pump far narrower than the grid spacing leaves only x + y = 0,
        # weighted by L(x) L(-x) = h^2 / (h^2 + x^2)
        purities = []
        for points in (128, 256):
            fine = FrequencyGrid.for_linewidth(1.0, points=points)
            half = ring.linewidth_ghz / 2.0
            weights = half ** 2 / (half ** 2 + fine.offsets_ghz ** 2)
            expected = np.sum(weights ** 4) / np.sum(weights ** 2) ** 2

            purity = build_single_ring_jsa(ring, PumpSpectrum(0.01), fine).purity()
            assert abs(purity - expected) < 1e-9
            purities.append(purity)

        assert purities[1] < purities[0] < 0.5

    @pytest.mark.parametrize("bandwidth", [1.0, 3.0, 20.0])
    def test_broad_pump_purity_floor(self, ring, grid, bandwidth):
        purity = build_single_ring_jsa(ring, PumpSpectrum(bandwidth), grid).purity()

        assert 0.45 <= purity <= 1.0

    def test_mzi_coupling_beats_single_ring(self, ring, grid):
        _, single = optimize_pump_bandwidth(
            lambda p: build_single_ring_jsa(ring, p, grid), ring.linewidth_ghz
        )
        design = design_mzi_coupled(ring, grid)

        assert design.purity > single
        assert design.params.pump_linewidth > ring.linewidth_ghz

    def test_cascade_needs_resonators(self, grid):
        with pytest.raises(UnphysicalParameterError):
            build_cascaded_jsa([], None, PumpSpectrum(1.0), grid)

    def test_cascade_weight_count(self, ring, grid):
        with pytest.raises(DimensionError):
            build_cascaded_jsa([ring, ring.shifted(0.5)], [1.0], PumpSpectrum(1.0), grid)

    def test_single_resonator_cascade_is_a_ring(self, ring, grid):
        pump = PumpSpectrum(1.2)
        cascade = build_cascaded_jsa([ring], None, pump, grid)

        assert np.allclose(cascade.matrix, build_single_ring_jsa(ring, pump, grid).matrix)

    @pytest.mark.slow
    def test_cascade_optimizer_is_reproducible(self, ring):
        small = FrequencyGrid.for_linewidth(1.0, points=64)

        first = optimize_cascade(ring, small, count=4, restarts=1, seed=3, rounds=2)
        second = optimize_cascade(ring, small, count=4, restarts=1, seed=3, rounds=2)

        assert len(first.resonators) == 4
        assert 0.0 < first.purity <= 1.0
        assert first.purity == second.purity

    @pytest.mark.slow
    def test_cascade_never_trails_the_coupled_ring(self, ring):
        small = FrequencyGrid.for_linewidth(1.0, points=64)

        design = optimize_cascade(ring, small, count=3, restarts=1, rounds=1)

        assert design.purity >= design_mzi_coupled(ring, small).purity - 1e-12

    @pytest.mark.slow
    def test_twenty_four_resonator_cascade_purity(self, ring):
        wide = FrequencyGrid.for_linewidth(1.0, points=192)

        design = optimize_cascade(ring, wide, restarts=2, rounds=6)
        rebuilt = build_cascaded_jsa(design.resonators, design.weights, design.pump, wide)

        assert len(design.resonators) == 24
        assert design.purity >= 0.99
        assert abs(rebuilt.purity() - design.purity) < 1e-9


@pytest.mark.unit
class TestHeraldedStates(object):
    def test_trace_and_purity(self, ring, grid):
        jsa = build_single_ring_jsa(ring, PumpSpectrum(1.0), grid)
        state = heralded_state(jsa)

        assert abs(state.trace - 1.0) < 1e-10
        assert abs(state.purity - jsa.purity()) < 1e-10

    def test_self_overlap_is_purity(self, ring, grid):
        state = heralded_state(build_single_ring_jsa(ring, PumpSpectrum(1.0), grid))

        assert abs(indistinguishability(state, state) - state.purity) < 1e-10

    def test_delay_reduces_overlap(self, ring, grid):
        state = heralded_state(build_single_ring_jsa(ring, PumpSpectrum(1.0), grid))

        assert spectral_overlap(state, state, delay_ps=500.0) < spectral_overlap(state, state)

    def test_different_grids(self, ring, grid):
        other = FrequencyGrid.for_linewidth(1.0, points=64)
        first = heralded_state(build_single_ring_jsa(ring, PumpSpectrum(1.0), grid))
        second = heralded_state(build_single_ring_jsa(ring, PumpSpectrum(1.0), other))

        with pytest.raises(GridError):
            indistinguishability(first, second)

    def test_unknown_arm(self, ring, grid):
        with pytest.raises(UnphysicalParameterError):
            heralded_state(build_single_ring_jsa(ring, PumpSpectrum(1.0), grid), "pump")


@pytest.mark.unit
class TestDetuning(object):
    def build(self, ring, grid):
        pump = PumpSpectrum(1.0)
        return lambda delta: build_single_ring_jsa(ring.shifted(delta), pump, grid)

    def test_unshifted_copy_is_identical(self, ring, grid):
        curve = detuning_sweep(self.build(ring, grid), [0.0, 0.5, 1.0])

        assert abs(curve.normalized[0] - 1.0) < 1e-9
        assert curve.normalized[2] < curve.normalized[1] < curve.normalized[0] + 1e-12

    def test_half_width_within_sweep(self, ring, grid):
        curve = detuning_sweep(self.build(ring, grid), np.linspace(-1.0, 1.0, 21))

        assert 0.0 <= curve.half_width <= 1.0
        assert all(curve.normalized[np.abs(curve.deltas) <= curve.half_width] >= 0.99)

    def test_beyond_grid(self, ring, grid):
        with pytest.raises(GridError):
            detuning_sweep(self.build(ring, grid), [grid.span_ghz])
