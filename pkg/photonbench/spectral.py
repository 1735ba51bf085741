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

"""
Joint spectral amplitudes of resonator photon-pair sources.

Frequencies on a grid are offsets in GHz from the resonance each photon is
emitted into: signal offsets index rows, idler offsets index columns. The pump
is described by its offset from the pump resonance. Field responses are
Lorentzian, L(x) = (k/2) / (k/2 - i x) for a linewidth k, and the pump field
inside the ring is the pulse envelope filtered by the pump resonance. The
two-photon pump function is the self-convolution of that field, so the pair
amplitude is Phi(x + y) * L(x) * L(y).
"""

import collections
import csv
import math

import numpy as np
from scipy import optimize, signal

from photonbench.errors import DimensionError, GridError, UnphysicalParameterError
from photonbench.helpers import make_rng
from photonbench.logger import default_logger

__all__ = [
    "CascadeDesign",
    "DetuningCurve",
    "FrequencyGrid",
    "JointSpectralAmplitude",
    "MziDesign",
    "PumpSpectrum",
    "ResonatorParams",
    "SchmidtDecomposition",
    "SpectralState",
    "build_cascaded_jsa",
    "build_mzi_coupled_jsa",
    "build_single_ring_jsa",
    "cascade_offsets",
    "design_mzi_coupled",
    "detuning_sweep",
    "export_jsa_csv",
    "heralded_state",
    "import_jsa_csv",
    "indistinguishability",
    "optimize_cascade",
    "optimize_pump_bandwidth",
    "schmidt",
    "spectral_overlap",
]

MIN_POINTS = 64
MIN_SPAN_LINEWIDTHS = 6.0
# pump field samples extend this many grid spans on each side
PUMP_EXTENSION = 4
NORM_TOLERANCE = 1e-10
DEFAULT_CASCADE_SIZE = 24
DEFAULT_RESTARTS = 16
MAX_COUPLING_RATIO = 20.0
INDISTINGUISHABILITY_THRESHOLD = 0.99


class FrequencyGrid(object):
    """
    Uniform offset grid. Offsets sit at (i - (points - 1) / 2) * spacing, so
    the sum of a signal and an idler offset is always a whole number of
    spacings.
    """

    def __init__(self, center_thz=193.4, span_ghz=40.0, points=256):
        if points < MIN_POINTS:
            raise GridError("Grid needs at least %d points, got %d" % (MIN_POINTS, points))
        if span_ghz <= 0:
            raise GridError("Grid span must be positive, got %r" % span_ghz)

        self.center_thz = float(center_thz)
        self.span_ghz = float(span_ghz)
        self.points = int(points)

    @classmethod
    def for_linewidth(cls, linewidth_ghz, linewidths=40.0, points=256, center_thz=193.4):
        return cls(center_thz, linewidths * linewidth_ghz, points)

    @property
    def spacing_ghz(self):
        return self.span_ghz / self.points

    @property
    def offsets_ghz(self):
        return (np.arange(self.points) - (self.points - 1) / 2.0) * self.spacing_ghz

    @property
    def frequencies_thz(self):
        return self.center_thz + self.offsets_ghz * 1e-3

    def _key(self):
        return (self.center_thz, self.span_ghz, self.points)

    def __eq__(self, other):
        return isinstance(other, FrequencyGrid) and self._key() == other._key()

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return "FrequencyGrid(center_thz=%g, span_ghz=%g, points=%d)" % self._key()


class PumpSpectrum(object):
    """Gaussian pump pulse; ``bandwidth_ghz`` is the intensity FWHM."""

    def __init__(self, bandwidth_ghz, offset_ghz=0.0):
        if bandwidth_ghz <= 0:
            raise UnphysicalParameterError("bandwidth_ghz", bandwidth_ghz, "(0, inf)")

        self.bandwidth_ghz = float(bandwidth_ghz)
        self.offset_ghz = float(offset_ghz)

    def amplitude(self, offsets_ghz):
        x = np.asarray(offsets_ghz) - self.offset_ghz
        return np.exp(-2.0 * math.log(2.0) * x ** 2 / self.bandwidth_ghz ** 2)

    def amplitude_on(self, grid):
        values = self.amplitude(grid.offsets_ghz).astype(complex)
        return values / np.linalg.norm(values)

    def __repr__(self):
        return "PumpSpectrum(bandwidth_ghz=%g, offset_ghz=%g)" % (self.bandwidth_ghz, self.offset_ghz)


class ResonatorParams(object):
    """
    One resonator. ``linewidth_ghz`` is the loaded signal/idler linewidth,
    ``pump_linewidth_ghz`` the pump-band linewidth (defaults to the same) and
    ``detuning_ghz`` a shift of every resonance of the device.
    """

    def __init__(
        self,
        frequency_thz=193.4,
        linewidth_ghz=1.0,
        fsr_ghz=400.0,
        pump_linewidth_ghz=None,
        intrinsic_loss_ghz=0.0,
        detuning_ghz=0.0,
    ):
        if linewidth_ghz <= 0:
            raise UnphysicalParameterError("linewidth_ghz", linewidth_ghz, "(0, inf)")
        if fsr_ghz <= linewidth_ghz:
            raise UnphysicalParameterError("fsr_ghz", fsr_ghz, "> linewidth_ghz")
        if pump_linewidth_ghz is not None and pump_linewidth_ghz <= 0:
            raise UnphysicalParameterError("pump_linewidth_ghz", pump_linewidth_ghz, "(0, inf)")
        if intrinsic_loss_ghz < 0 or intrinsic_loss_ghz >= linewidth_ghz:
            raise UnphysicalParameterError("intrinsic_loss_ghz", intrinsic_loss_ghz, "[0, linewidth)")

        self.frequency_thz = float(frequency_thz)
        self.linewidth_ghz = float(linewidth_ghz)
        self.fsr_ghz = float(fsr_ghz)
        self.pump_linewidth_ghz = None if pump_linewidth_ghz is None else float(pump_linewidth_ghz)
        self.intrinsic_loss_ghz = float(intrinsic_loss_ghz)
        self.detuning_ghz = float(detuning_ghz)

    @property
    def pump_linewidth(self):
        if self.pump_linewidth_ghz is None:
            return self.linewidth_ghz
        return self.pump_linewidth_ghz

    @property
    def escape_efficiency(self):
        """Fraction of generated pairs leaving through the bus rather than being lost."""
        return 1.0 - self.intrinsic_loss_ghz / self.linewidth_ghz

    def shifted(self, delta_ghz):
        return ResonatorParams(
            self.frequency_thz,
            self.linewidth_ghz,
            self.fsr_ghz,
            self.pump_linewidth_ghz,
            self.intrinsic_loss_ghz,
            self.detuning_ghz + delta_ghz,
        )

    def with_pump_linewidth(self, pump_linewidth_ghz):
        return ResonatorParams(
            self.frequency_thz,
            self.linewidth_ghz,
            self.fsr_ghz,
            pump_linewidth_ghz,
            self.intrinsic_loss_ghz,
            self.detuning_ghz,
        )

    def __repr__(self):
        return "ResonatorParams(linewidth_ghz=%g, pump_linewidth_ghz=%g, detuning_ghz=%g)" % (
            self.linewidth_ghz,
            self.pump_linewidth,
            self.detuning_ghz,
        )


SchmidtDecomposition = collections.namedtuple(
    "SchmidtDecomposition", ["coefficients", "signal_modes", "idler_modes", "purity"]
)
DetuningCurve = collections.namedtuple(
    "DetuningCurve", ["deltas", "raw", "normalized", "half_width"]
)
MziDesign = collections.namedtuple("MziDesign", ["params", "pump", "purity", "target_met"])
CascadeDesign = collections.namedtuple(
    "CascadeDesign", ["resonators", "weights", "pump", "purity", "restart"]
)


class JointSpectralAmplitude(object):
    def __init__(self, grid, matrix, normalize=True):
        matrix = np.asarray(matrix, dtype=complex)

        if matrix.shape != (grid.points, grid.points):
            raise DimensionError(
                "JSA shape %s does not match a %d-point grid" % (matrix.shape, grid.points)
            )

        if normalize:
            norm = np.linalg.norm(matrix)
            if norm == 0.0 or not np.isfinite(norm):
                raise GridError("JSA vanishes on %r" % grid)
            matrix = matrix / norm

        self.grid = grid
        self.matrix = matrix

    @property
    def norm(self):
        return float(np.linalg.norm(self.matrix))

    def intensity(self):
        return np.abs(self.matrix) ** 2

    def exchanged(self):
        return JointSpectralAmplitude(self.grid, self.matrix.T, normalize=False)

    def purity(self):
        return schmidt(self).purity

    def __repr__(self):
        return "JointSpectralAmplitude(%r)" % self.grid


def _field_response(offsets, linewidth, center):
    half = linewidth / 2.0
    return half / (half - 1j * (offsets - center))


def _check_span(grid, linewidth):
    if grid.span_ghz < MIN_SPAN_LINEWIDTHS * linewidth:
        raise GridError(
            "Grid span %g GHz holds fewer than %g linewidths of %g GHz"
            % (grid.span_ghz, MIN_SPAN_LINEWIDTHS, linewidth)
        )


def _two_photon_pump(grid, pump, pump_linewidth, center):
    """Phi at every whole-spacing pump-pair offset; index 0 is -2 * extent."""

    extent = PUMP_EXTENSION * (grid.points - 1)
    offsets = np.arange(-extent, extent + 1) * grid.spacing_ghz
    field = pump.amplitude(offsets) * _field_response(offsets, pump_linewidth, center)
    return signal.fftconvolve(field, field) * grid.spacing_ghz, 2 * extent


def _ring_term(ring, pump, grid, center=None):
    center = ring.detuning_ghz if center is None else center
    phi, origin = _two_photon_pump(grid, pump, ring.pump_linewidth, center)

    n = grid.points
    sums = np.add.outer(np.arange(n), np.arange(n)) - (n - 1)
    response = _field_response(grid.offsets_ghz, ring.linewidth_ghz, center)

    return phi[sums + origin] * np.outer(response, response) * ring.escape_efficiency


def build_single_ring_jsa(ring, pump, grid):
    _check_span(grid, ring.linewidth_ghz)
    return JointSpectralAmplitude(grid, _ring_term(ring, pump, grid))


def build_mzi_coupled_jsa(params, pump, grid):
    """
    Ring whose coupling is broadened in the pump band only; ``params`` carries the
    pump-band linewidth.
    """

    if (params.pump_linewidth + params.linewidth_ghz) / 2.0 >= params.fsr_ghz:
        raise UnphysicalParameterError(
            "pump_linewidth_ghz",
            params.pump_linewidth,
            "bands separated by the FSR of %g GHz" % params.fsr_ghz,
        )

    return build_single_ring_jsa(params, pump, grid)


def build_cascaded_jsa(resonators, weights, pump, grid):
    resonators = list(resonators)

    if not resonators:
        raise UnphysicalParameterError("resonators", [], "at least one resonator")

    if weights is None:
        weights = np.ones(len(resonators))
    weights = np.asarray(weights, dtype=complex)
    if weights.shape != (len(resonators),):
        raise DimensionError(
            "%d weights for %d resonators" % (weights.size, len(resonators))
        )

    _check_span(grid, max(ring.linewidth_ghz for ring in resonators))

    matrix = np.zeros((grid.points, grid.points), dtype=complex)
    for weight, ring in zip(weights, resonators):
        if weight != 0:
            matrix += weight * _ring_term(ring, pump, grid)

    return JointSpectralAmplitude(grid, matrix)


def cascade_offsets(count=DEFAULT_CASCADE_SIZE, spacing_ghz=0.5):
    return (np.arange(count) - (count - 1) / 2.0) * spacing_ghz


def schmidt(jsa):
    norm = np.linalg.norm(jsa.matrix)
    if abs(norm - 1.0) > NORM_TOLERANCE:
        raise UnphysicalParameterError("jsa norm", norm, "1 +/- %g" % NORM_TOLERANCE)

    left, values, right = np.linalg.svd(jsa.matrix)
    return SchmidtDecomposition(
        coefficients=values,
        signal_modes=left,
        idler_modes=right.conj().T,
        purity=float(np.sum(values ** 4)),
    )


class SpectralState(object):
    """Mixed single-photon spectral state, kept as weights over orthonormal modes."""

    def __init__(self, grid, weights, modes):
        self.grid = grid
        self.weights = np.asarray(weights, dtype=float)
        self.modes = np.asarray(modes, dtype=complex)

    @property
    def matrix(self):
        return (self.modes * self.weights).dot(self.modes.conj().T)

    @property
    def trace(self):
        return float(np.sum(self.weights))

    @property
    def purity(self):
        return float(np.sum(self.weights ** 2))

    @property
    def rank(self):
        return self.weights.size

    def delayed(self, delay_ps):
        phase = np.exp(2j * np.pi * self.grid.offsets_ghz * delay_ps * 1e-3)
        return SpectralState(self.grid, self.weights, self.modes * phase[:, None])


def heralded_state(jsa, heralded_arm="signal", cutoff=1e-14):
    """State of the photon in ``heralded_arm`` when its partner is detected."""

    decomposition = schmidt(jsa)
    if heralded_arm == "signal":
        modes = decomposition.signal_modes
    elif heralded_arm == "idler":
        modes = decomposition.idler_modes
    else:
        raise UnphysicalParameterError("heralded_arm", heralded_arm, "'signal' or 'idler'")

    weights = decomposition.coefficients ** 2
    keep = weights > cutoff
    return SpectralState(jsa.grid, weights[keep], modes[:, keep])


def indistinguishability(first, second):
    """Tr(rho1 rho2) of two heralded photons on a common grid."""

    if first.grid != second.grid:
        raise GridError("States live on different grids: %r and %r" % (first.grid, second.grid))

    overlaps = np.abs(first.modes.conj().T.dot(second.modes)) ** 2
    value = float(first.weights.dot(overlaps).dot(second.weights))
    return min(max(value, 0.0), 1.0)


def spectral_overlap(first, second, delay_ps=0.0):
    """Overlap with the second photon delayed by ``delay_ps``."""
    return indistinguishability(first, second.delayed(delay_ps))


def detuning_sweep(source_builder, deltas, heralded_arm="signal"):
    """
    Overlap between photons of a fixed source and of a copy with every resonance
    shifted by delta.

    ``source_builder(delta)`` returns the JSA of the shifted copy. The 0.99
    window is measured on the curve normalized to delta = 0 and grows outwards
    from the smallest |delta| until the first point below threshold.
    """

    deltas = np.asarray(deltas, dtype=float)
    reference = heralded_state(source_builder(0.0), heralded_arm)
    grid = reference.grid

    if deltas.size and np.abs(deltas).max() > grid.span_ghz / 2.0:
        raise GridError(
            "Detuning up to %g GHz exceeds the grid half-span of %g GHz"
            % (np.abs(deltas).max(), grid.span_ghz / 2.0)
        )

    raw = np.array(
        [indistinguishability(reference, heralded_state(source_builder(d), heralded_arm)) for d in deltas]
    )
    normalized = raw / reference.purity

    half_width = 0.0
    for i in np.argsort(np.abs(deltas), kind="stable"):
        if normalized[i] < INDISTINGUISHABILITY_THRESHOLD:
            break
        half_width = abs(deltas[i])

    return DetuningCurve(deltas=deltas, raw=raw, normalized=normalized, half_width=half_width)


def optimize_pump_bandwidth(builder, linewidth_ghz, offset_ghz=0.0, bounds=(0.1, 30.0)):
    """
    Pump bandwidth maximizing the purity of ``builder(pump)``; ``bounds`` are in
    units of the signal linewidth.
    """

    def negative_purity(log_bandwidth):
        pump = PumpSpectrum(math.exp(log_bandwidth), offset_ghz)
        return -builder(pump).purity()

    low, high = (math.log(b * linewidth_ghz) for b in bounds)
    best = optimize.minimize_scalar(
        negative_purity, bounds=(low, high), method="bounded", options={"xatol": 1e-3}
    )
    return PumpSpectrum(math.exp(best.x), offset_ghz), -best.fun


def design_mzi_coupled(ring, grid, target=0.99, ratios=(1.0, 2.0, 3.0, 5.0, 7.5, 10.0, 15.0, 20.0)):
    """
    Widen the pump-band linewidth step by step, tuning the pump bandwidth at each
    step, until the heralded purity reaches ``target``.
    """

    best = None
    for ratio in ratios:
        params = ring.with_pump_linewidth(ratio * ring.linewidth_ghz)
        if (params.pump_linewidth + params.linewidth_ghz) / 2.0 >= params.fsr_ghz:
            break

        pump, purity = optimize_pump_bandwidth(
            lambda p, params=params: build_mzi_coupled_jsa(params, p, grid), ring.linewidth_ghz
        )
        default_logger.debug("MZI-coupled ratio %g: purity %.5f" % (ratio, purity))

        if best is None or purity > best.purity:
            best = MziDesign(params, pump, purity, purity >= target)
        if purity >= target:
            return best

    default_logger.warning(
        "MZI-coupled design reached purity %.4f, below target %.4f" % (best.purity, target)
    )
    return best


def _cascade(base, parameters, count):
    log_bandwidth, spacing, envelope, coupling = parameters
    offsets = cascade_offsets(count, spacing * base.linewidth_ghz)
    weights = np.exp(-(offsets / (envelope * base.linewidth_ghz)) ** 2)
    coupled = base.with_pump_linewidth(coupling * base.linewidth_ghz)
    resonators = [coupled.shifted(offset) for offset in offsets]
    pump = PumpSpectrum(math.exp(log_bandwidth) * base.linewidth_ghz, 0.0)
    return resonators, weights, pump


def optimize_cascade(
    base,
    grid,
    count=DEFAULT_CASCADE_SIZE,
    restarts=DEFAULT_RESTARTS,
    seed=0,
    rounds=20,
):
    """
    Jointly tune the resonance comb, the resonator weights, the resonator-bus
    coupling and the pump bandwidth of a cascaded source for purity.

    The comb is uniform with a free spacing, the weights follow a Gaussian
    envelope of free width and every resonator shares a pump-band coupling
    ratio, so coordinate ascent runs over four coordinates (log pump bandwidth,
    spacing and envelope width in linewidths, pump-band linewidth ratio).
    Restart 0 starts from a zero-spacing comb at the best MZI-coupled ring;
    the others start from a point drawn from ``(seed, restart)``.
    """

    ratio_limit = min(MAX_COUPLING_RATIO, 2.0 * base.fsr_ghz / base.linewidth_ghz - 1.0)
    lower = np.array([math.log(0.1), 0.0, 0.5, 1.0])
    upper = np.array([math.log(30.0), 1.0, 20.0, max(ratio_limit, 1.0)])

    def purity_of(parameters):
        resonators, weights, pump = _cascade(base, parameters, count)
        return build_cascaded_jsa(resonators, weights, pump, grid).purity()

    best = None
    for restart in range(restarts):
        if restart == 0:
            coupled = design_mzi_coupled(base, grid)
            point = np.array([
                math.log(coupled.pump.bandwidth_ghz / base.linewidth_ghz),
                0.0,
                upper[2],
                coupled.params.pump_linewidth / base.linewidth_ghz,
            ])
            point = np.clip(point, lower, upper)
        else:
            point = make_rng(seed, "cascade", restart).uniform(lower, upper)
        value = purity_of(point)
        steps = (upper - lower) / 8.0

        for _ in range(rounds):
            improved = False
            for axis in range(point.size):
                for direction in (1.0, -1.0):
                    trial = point.copy()
                    trial[axis] = np.clip(trial[axis] + direction * steps[axis], lower[axis], upper[axis])
                    trial_value = purity_of(trial)
                    if trial_value > value:
                        point, value, improved = trial, trial_value, True
                        break
            if not improved:
                steps /= 2.0

        default_logger.debug("Cascade restart %d: purity %.5f" % (restart, value))

        if best is None or value > best.purity:
            resonators, weights, pump = _cascade(base, point, count)
            best = CascadeDesign(resonators, weights, pump, value, restart)

    return best


def export_jsa_csv(jsa, path):
    offsets = jsa.grid.offsets_ghz
    with open(path, "w") as out:
        writer = csv.writer(out)
        writer.writerow(["center_thz", "span_ghz", "signal_offset_ghz", "idler_offset_ghz", "real", "imag"])
        for i, x in enumerate(offsets):
            for j, y in enumerate(offsets):
                value = jsa.matrix[i, j]
                writer.writerow(
                    [
                        repr(jsa.grid.center_thz),
                        repr(jsa.grid.span_ghz),
                        repr(float(x)),
                        repr(float(y)),
                        repr(float(value.real)),
                        repr(float(value.imag)),
                    ]
                )


def import_jsa_csv(path):
    with open(path) as source:
        rows = list(csv.DictReader(source))

    if not rows:
        raise GridError("No JSA samples in %s" % path)

    points = int(round(math.sqrt(len(rows))))
    if points * points != len(rows):
        raise GridError("%d samples in %s do not form a square grid" % (len(rows), path))

    grid = FrequencyGrid(float(rows[0]["center_thz"]), float(rows[0]["span_ghz"]), points)
    values = np.array([complex(float(row["real"]), float(row["imag"])) for row in rows])
    return JointSpectralAmplitude(grid, values.reshape(points, points), normalize=False)
