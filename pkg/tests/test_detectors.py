import itertools

import numpy as np
import pytest

from photonbench.detectors import (
    CLICK,
    PnrdModel,
    SnspdModel,
    export_histogram_csv,
    pnrd_efficiency,
    pnrd_level_distribution,
    pnrd_povm,
    snspd_efficiency,
    threshold_povm,
    voltage_trace_levels,
)
from photonbench.errors import TruncationError, UnphysicalParameterError


def enumerate_levels(absorption, photons):
    """Independent oracle: sum over every photon-to-cell assignment."""

    cells = len(absorption)
    outcome = list(absorption) + [1.0 - sum(absorption)]
    levels = np.zeros(cells + 1)
    for assignment in itertools.product(range(cells + 1), repeat=photons):
        probability = np.prod([outcome[i] for i in assignment])
        levels[len(set(i for i in assignment if i < cells))] += probability
    return levels


@pytest.mark.unit
class TestSnspd(object):
    def test_plateau(self):
        model = SnspdModel()

        assert abs(snspd_efficiency(model, 1.0) - model.eta_max) < 1e-3
        assert snspd_efficiency(model, 0.5) < 1e-3

    def test_midpoint_is_half_maximum(self):
        model = SnspdModel(eta_max=0.9)

        assert abs(snspd_efficiency(model, model.midpoint) - 0.45) < 1e-12

    def test_efficiency_rises_with_bias(self):
        model = SnspdModel()
        values = [snspd_efficiency(model, bias) for bias in np.linspace(0.0, 1.0, 21)]

        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_bias_out_of_range(self):
        with pytest.raises(UnphysicalParameterError):
            snspd_efficiency(SnspdModel(), 1.5)

    def test_click_probability(self):
        model = SnspdModel.from_click_probability(0.8, 0.01)

        assert abs(model.click_probability(0) - 0.01) < 1e-12
        assert abs(model.click_probability(1) - (1.0 - 0.2 * 0.99)) < 1e-12
        assert abs(model.click_probability(2) - (1.0 - 0.04 * 0.99)) < 1e-12

    def test_outcomes_sum_to_one(self):
        probabilities = SnspdModel(dark_rate=1e6).outcome_probabilities(3)

        assert set(probabilities) == {0, CLICK}
        assert abs(sum(probabilities.values()) - 1.0) < 1e-12

    def test_povm_completeness(self):
        povm = threshold_povm(SnspdModel(dark_rate=100.0), n_max=6)

        assert np.allclose(povm.no_click + povm.click, 1.0, atol=1e-12)

    def test_window_widens_dark_counts(self):
        model = SnspdModel(dark_rate=1e3)
        narrow = threshold_povm(model, window=1e-9)
        wide = threshold_povm(model, window=1e-6)

        assert wide.click[0] > narrow.click[0]


@pytest.mark.unit
class TestPnrd(object):
    def test_two_photons_on_four_equal_cells(self):
        model = PnrdModel.equal_cells(4)
        levels = pnrd_level_distribution(model, 2)

        assert abs(levels[2] - 0.75) < 1e-15
        assert abs(levels[1] - 0.25) < 1e-15
        assert abs(levels[0]) < 1e-15

    def test_matches_enumeration_oracle(self):
        model = PnrdModel.with_exponential_profile(5, total_efficiency=0.95, decay=0.3)
        for photons in range(5):
            assert np.allclose(
                pnrd_level_distribution(model, photons), enumerate_levels(model.absorption, photons), atol=1e-12
            )

    def test_povm_completeness(self):
        model = PnrdModel.with_exponential_profile(4, dark_rate=1e5)
        povm = pnrd_povm(model)

        assert np.abs(povm.sum(axis=0) - 1.0).max() < 1e-12

    def test_exponential_profile_total(self):
        model = PnrdModel.with_exponential_profile(4, total_efficiency=0.989)

        assert abs(pnrd_efficiency(model) - 0.989) < 1e-12
        assert all(a > b for a, b in zip(model.absorption, model.absorption[1:]))

    def test_level_saturates_at_cell_count(self):
        model = PnrdModel.equal_cells(2)
        levels = pnrd_level_distribution(model, 4)

        assert levels.size == 3
        assert abs(levels.sum() - 1.0) < 1e-12

    def test_dark_counts_raise_levels(self):
        quiet = PnrdModel.equal_cells(4)
        noisy = PnrdModel.equal_cells(4, dark_rate=1e7)

        assert noisy.level_distribution(0)[1] > 0.0
        assert quiet.level_distribution(0)[0] == 1.0

    def test_truncation(self):
        with pytest.raises(TruncationError):
            pnrd_level_distribution(PnrdModel.equal_cells(4), 5)

    def test_absorption_above_one(self):
        with pytest.raises(UnphysicalParameterError):
            PnrdModel([0.6, 0.6])

    def test_outcomes(self):
        model = PnrdModel.equal_cells(4)

        assert model.outcomes == (0, 1, 2, 3, 4)
        assert abs(model.outcome_probabilities(1)[1] - 1.0) < 1e-12


@pytest.mark.unit
class TestVoltageHistogram(object):
    def test_histogram(self):
        model = PnrdModel.equal_cells(4, v_unit=0.25)
        histogram = voltage_trace_levels(model, [0, 1, 1, 2, 4])

        assert list(histogram.counts) == [1, 2, 1, 0, 1]
        assert list(histogram.voltages) == [0.0, 0.25, 0.5, 0.75, 1.0]

    def test_level_out_of_range(self):
        with pytest.raises(UnphysicalParameterError):
            voltage_trace_levels(PnrdModel.equal_cells(4), [5])

    def test_csv_export(self, tmpdir):
        histogram = voltage_trace_levels(PnrdModel.equal_cells(2), [0, 1, 2, 2])
        path = str(tmpdir.join("histogram.csv"))

        export_histogram_csv(histogram, path)

        with open(path) as handle:
            lines = handle.read().splitlines()
        assert lines[0] == "level,voltage,count"
        assert len(lines) == 4
