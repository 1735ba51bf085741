# Copyright 2024 The photonbench authors
#
# Licensed under the Apache License, Version 2.0 (the 'License');
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an 'AS IS' BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Behavioral models of waveguide SNSPDs and multiplexed photon-number-resolving detectors."""

import collections
import csv
import itertools
import math

import numpy as np
from scipy import special, stats

from photonbench.errors import TruncationError, UnphysicalParameterError

__all__ = [
    "CLICK",
    "PnrdModel",
    "SnspdModel",
    "ThresholdPovm",
    "VoltageHistogram",
    "export_histogram_csv",
    "pnrd_efficiency",
    "pnrd_level_distribution",
    "pnrd_povm",
    "snspd_efficiency",
    "threshold_povm",
    "voltage_trace_levels",
]

# Outcome label of a threshold detector that fired.
CLICK = "click"

DEFAULT_GATE_WINDOW = 1e-9

ThresholdPovm = collections.namedtuple("ThresholdPovm", ["no_click", "click"])
VoltageHistogram = collections.namedtuple("VoltageHistogram", ["levels", "voltages", "counts"])


def _check_probability(name, value):
    if not 0.0 <= value <= 1.0:
        raise UnphysicalParameterError(name, value, "[0, 1]")
    return float(value)


def _dark_probability(dark_rate, window):
    if window <= 0:
        raise UnphysicalParameterError("gate_window", window, "(0, inf)")
    return -math.expm1(-dark_rate * window)


class SnspdModel(object):
    """
    Threshold detector with a sigmoid efficiency plateau in normalized bias.

    ``bias=None`` operates the detector on its plateau, i.e. at ``eta_max``.
    """

    resolves_number = False

    def __init__(
        self,
        eta_max=0.934,
        midpoint=0.75,
        steepness=0.025,
        dark_rate=0.0,
        gate_window=DEFAULT_GATE_WINDOW,
        bias=None,
    ):
        self.eta_max = _check_probability("eta_max", eta_max)

        if steepness <= 0:
            raise UnphysicalParameterError("steepness", steepness, "(0, inf)")
        if dark_rate < 0:
            raise UnphysicalParameterError("dark_rate", dark_rate, "[0, inf)")
        if bias is not None:
            _check_probability("bias", bias)

        self.midpoint = float(midpoint)
        self.steepness = float(steepness)
        self.dark_rate = float(dark_rate)
        self.gate_window = float(gate_window)
        self.bias = bias
        self.dark_probability = _dark_probability(self.dark_rate, self.gate_window)

    @classmethod
    def from_click_probability(cls, efficiency, dark_probability=0.0):
        _check_probability("dark_probability", dark_probability)
        if dark_probability >= 1.0:
            raise UnphysicalParameterError("dark_probability", dark_probability, "[0, 1)")

        return cls(
            eta_max=efficiency,
            dark_rate=-math.log1p(-dark_probability) / DEFAULT_GATE_WINDOW,
            gate_window=DEFAULT_GATE_WINDOW,
        )

    @property
    def efficiency(self):
        if self.bias is None:
            return self.eta_max
        return snspd_efficiency(self, self.bias)

    def click_probability(self, photons):
        return 1.0 - (1.0 - self.efficiency) ** photons * (1.0 - self.dark_probability)

    @property
    def outcomes(self):
        return (0, CLICK)

    def outcome_probabilities(self, photons):
        click = self.click_probability(photons)
        return {0: 1.0 - click, CLICK: click}

    def __repr__(self):
        return "SnspdModel(eta=%.4f, dark_probability=%.3g)" % (
            self.efficiency,
            self.dark_probability,
        )


def snspd_efficiency(model, normalized_bias):
    if not 0.0 <= normalized_bias <= 1.0:
        raise UnphysicalParameterError("normalized_bias", normalized_bias, "[0, 1]")

    return model.eta_max * special.expit(
        (normalized_bias - model.midpoint) / model.steepness
    )


def threshold_povm(model, window=None, n_max=4):
    """
    Return the {no-click, click} POVM diagonal over photon numbers 0..n_max.
    """

    if window is None:
        p_dark = model.dark_probability
    else:
        p_dark = _dark_probability(model.dark_rate, window)

    photons = np.arange(n_max + 1)
    no_click = (1.0 - model.efficiency) ** photons * (1.0 - p_dark)

    return ThresholdPovm(no_click=no_click, click=1.0 - no_click)


class PnrdModel(object):
    """
    Series of SNSPD unit cells along one waveguide.

    A photon is absorbed by cell i with probability ``absorption[i]`` and then
    fires it with probability ``cell_efficiency``. The output level counts the
    fired cells and saturates at ``cell_count``.
    """

    resolves_number = True

    def __init__(
        self,
        absorption,
        cell_efficiency=1.0,
        dark_rate=0.0,
        gate_window=DEFAULT_GATE_WINDOW,
        v_unit=1.0,
        n_max=4,
    ):
        absorption = np.asarray(absorption, dtype=float)

        if absorption.ndim != 1 or absorption.size < 1:
            raise UnphysicalParameterError("absorption", absorption.tolist(), "a non-empty list")
        if np.any(absorption < 0) or absorption.sum() > 1.0 + 1e-12:
            raise UnphysicalParameterError(
                "absorption", absorption.tolist(), "non-negative fractions with sum <= 1"
            )
        if dark_rate < 0:
            raise UnphysicalParameterError("dark_rate", dark_rate, "[0, inf)")

        self.absorption = absorption
        self.cell_efficiency = _check_probability("cell_efficiency", cell_efficiency)
        self.dark_rate = float(dark_rate)
        self.gate_window = float(gate_window)
        self.dark_probability = _dark_probability(self.dark_rate, self.gate_window)
        self.v_unit = float(v_unit)
        self.n_max = int(n_max)
        self._levels = {}

    @classmethod
    def equal_cells(cls, cells, total_absorption=1.0, **kwargs):
        return cls(np.full(cells, total_absorption / cells), **kwargs)

    @classmethod
    def with_exponential_profile(cls, cells, total_efficiency=0.989, decay=0.15, **kwargs):
        """
        Cells absorb evanescently in series, so each one sees what the previous
        ones left; the profile is rescaled to ``total_efficiency``.
        """

        profile = np.exp(-decay * np.arange(cells))
        cell_efficiency = kwargs.get("cell_efficiency", 1.0)
        absorption = profile / profile.sum() * total_efficiency / cell_efficiency

        return cls(absorption, **kwargs)

    @property
    def cell_count(self):
        return self.absorption.size

    @property
    def outcomes(self):
        return tuple(range(self.cell_count + 1))

    def level_distribution(self, photons):
        if photons not in self._levels:
            self._levels[photons] = pnrd_level_distribution(self, photons)
        return self._levels[photons]

    def outcome_probabilities(self, photons):
        return dict(enumerate(self.level_distribution(photons)))

    def __repr__(self):
        return "PnrdModel(cells=%d, efficiency=%.4f)" % (self.cell_count, pnrd_efficiency(self))


def pnrd_efficiency(model):
    return float(np.sum(model.absorption) * model.cell_efficiency)


def pnrd_level_distribution(model, n_photons):
    """
    Exact distribution of the number of fired cells for ``n_photons`` incident photons.

    Photon-to-cell assignments are enumerated; dark counts then fire each idle
    cell independently.
    """

    if n_photons < 0 or n_photons > model.n_max:
        raise TruncationError(
            "PNRD level distribution supports 0..%d photons, got %d" % (model.n_max, n_photons)
        )

    cells = model.cell_count
    fire = model.absorption * model.cell_efficiency
    # the extra index stands for a photon that fired nothing
    outcome = np.append(fire, 1.0 - fire.sum())

    fired = np.zeros(cells + 1)
    for assignment in itertools.product(range(cells + 1), repeat=n_photons):
        probability = np.prod(outcome[list(assignment)])
        fired[len(set(i for i in assignment if i < cells))] += probability

    if model.dark_probability == 0.0:
        return fired

    levels = np.zeros(cells + 1)
    for count, probability in enumerate(fired):
        if probability == 0.0:
            continue
        idle = cells - count
        extra = stats.binom.pmf(np.arange(idle + 1), idle, model.dark_probability)
        levels[count:] += probability * extra

    return levels


def pnrd_povm(model, n_max=None):
    """Matrix of P(level | n): rows are levels, columns photon numbers."""

    n_max = model.n_max if n_max is None else n_max
    return np.column_stack([pnrd_level_distribution(model, n) for n in range(n_max + 1)])


def voltage_trace_levels(model, level_sequence):
    levels = np.asarray(level_sequence, dtype=int)

    if levels.size and (levels.min() < 0 or levels.max() > model.cell_count):
        raise UnphysicalParameterError(
            "level_sequence", [int(levels.min()), int(levels.max())], "0..%d" % model.cell_count
        )

    support = np.arange(model.cell_count + 1)
    counts = np.bincount(levels, minlength=support.size)

    return VoltageHistogram(levels=support, voltages=support * model.v_unit, counts=counts)


def export_histogram_csv(histogram, path):
    with open(path, "w") as out:
        writer = csv.writer(out)
        writer.writerow(["level", "voltage", "count"])
        for level, voltage, count in zip(*histogram):
            writer.writerow([int(level), repr(float(voltage)), int(count)])
