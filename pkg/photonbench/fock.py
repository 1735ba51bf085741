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
Exact few-photon linear optics in the Fock basis.

Occupation vectors are tuples of photon counts per mode. A mode transform U
maps creation operators as a_j^dagger -> sum_i U[i, j] a_i^dagger, so the
amplitude <out|U|in> is a permanent of U with rows repeated by the output
occupation and columns by the input occupation.
"""

import collections
import itertools
import math

import numpy as np

from photonbench.counting import pair_distribution
from photonbench.detectors import CLICK
from photonbench.errors import (
    DimensionError,
    ImpossibleOutcomeError,
    NonUnitaryError,
    TruncationError,
    UnphysicalParameterError,
)
from photonbench.helpers import make_rng
from photonbench.logger import default_logger

__all__ = [
    "DEFAULT_N_MAX",
    "DensityOperator",
    "DetectionPattern",
    "FockState",
    "ModeTransform",
    "OccupationVector",
    "apply_loss",
    "apply_transform",
    "condition_on",
    "coupler",
    "evolution_matrix",
    "fock_basis",
    "fock_space",
    "pair_state",
    "partial_trace",
    "pattern_probability",
    "permanent",
    "phase_shift",
    "sample_detection",
    "sample_detections",
    "symmetric_power",
    "tensor_product",
    "transition_amplitude",
]

DEFAULT_N_MAX = 4
MAX_PERMANENT_SIZE = 12
LEAK_TOLERANCE = 1e-6
NORM_TOLERANCE = 1e-10
HERMITIAN_TOLERANCE = 1e-12
PSD_FLOOR = -1e-9
IMPOSSIBLE_PROBABILITY = 1e-15


class OccupationVector(tuple):
    """Photon counts per mode."""

    def __new__(cls, counts):
        counts = tuple(int(count) for count in counts)
        if any(count < 0 for count in counts):
            raise UnphysicalParameterError("occupation", list(counts), "non-negative counts")
        return super(OccupationVector, cls).__new__(cls, counts)

    @property
    def mode_count(self):
        return len(self)

    @property
    def total(self):
        return sum(self)


def fock_basis(modes, photons):
    """All occupation vectors of ``modes`` modes holding exactly ``photons`` photons."""

    basis = set()
    for placement in itertools.combinations_with_replacement(range(modes), photons):
        counts = [0] * modes
        for mode in placement:
            counts[mode] += 1
        basis.add(tuple(counts))
    return sorted(basis, reverse=True)


def fock_space(modes, n_max):
    """Truncated Fock space: every sector from vacuum up to ``n_max`` photons."""

    return [vector for photons in range(n_max + 1) for vector in fock_basis(modes, photons)]


def _index(basis):
    return dict((vector, i) for i, vector in enumerate(basis))


def _sector_basis(basis, modes):
    totals = sorted(set(sum(vector) for vector in basis))
    return [vector for photons in totals for vector in fock_basis(modes, photons)]


def permanent(matrix):
    """
    Exact permanent by Ryser's inclusion-exclusion formula with Gray-code
    column updates.
    """

    a = np.asarray(matrix, dtype=complex)

    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError("Permanent requires a square matrix, got shape %s" % (a.shape,))

    n = a.shape[0]
    if n > MAX_PERMANENT_SIZE:
        raise TruncationError(
            "Permanent of a %dx%d matrix exceeds the %d photon limit" % (n, n, MAX_PERMANENT_SIZE)
        )

    if n == 0:
        return 1.0 + 0j
    if n == 1:
        return a[0, 0]
    if n == 2:
        return a[0, 0] * a[1, 1] + a[0, 1] * a[1, 0]
    if n == 3:
        return (
            a[0, 0] * (a[1, 1] * a[2, 2] + a[1, 2] * a[2, 1])
            + a[0, 1] * (a[1, 0] * a[2, 2] + a[1, 2] * a[2, 0])
            + a[0, 2] * (a[1, 0] * a[2, 1] + a[1, 1] * a[2, 0])
        )

    row_sums = np.zeros(n, dtype=complex)
    total = 0j
    gray = 0
    for k in range(1, 1 << n):
        column = (k & -k).bit_length() - 1
        gray ^= 1 << column
        if gray & (1 << column):
            row_sums += a[:, column]
        else:
            row_sums -= a[:, column]

        term = np.prod(row_sums)
        if bin(gray).count("1") % 2:
            total -= term
        else:
            total += term

    return (-1) ** n * total


def _factorial_product(vector):
    return float(np.prod([math.factorial(count) for count in vector]))


def _matrix_of(transform):
    if isinstance(transform, ModeTransform):
        return transform.matrix
    return np.asarray(transform, dtype=complex)


def transition_amplitude(transform, input_vector, output_vector):
    u = _matrix_of(transform)
    modes = u.shape[0]

    if len(input_vector) != modes or len(output_vector) != modes:
        raise DimensionError(
            "Occupation vectors of length %d and %d do not match a %d-mode transform"
            % (len(input_vector), len(output_vector), modes)
        )

    if sum(input_vector) != sum(output_vector):
        return 0j
    if sum(input_vector) == 0:
        return 1.0 + 0j

    rows = [mode for mode, count in enumerate(output_vector) for _ in range(count)]
    columns = [mode for mode, count in enumerate(input_vector) for _ in range(count)]

    return permanent(u[np.ix_(rows, columns)]) / math.sqrt(
        _factorial_product(input_vector) * _factorial_product(output_vector)
    )


def evolution_matrix(transform, photons):
    """Matrix of U on the ``photons``-photon sector, in ``fock_basis`` order."""

    u = _matrix_of(transform)
    basis = fock_basis(u.shape[0], photons)
    result = np.empty((len(basis), len(basis)), dtype=complex)

    for j, source in enumerate(basis):
        for i, target in enumerate(basis):
            result[i, j] = transition_amplitude(u, source, target)

    return result


def symmetric_power(transform, photons):
    """
    Sector matrix built directly from the single-photon matrix by summing over
    every ordered photon-to-mode assignment. Slow; used to check
    ``evolution_matrix``.
    """

    u = _matrix_of(transform)
    modes = u.shape[0]
    basis = fock_basis(modes, photons)
    index = _index(basis)
    result = np.zeros((len(basis), len(basis)), dtype=complex)

    for j, source in enumerate(basis):
        sequence = [mode for mode, count in enumerate(source) for _ in range(count)]
        for targets in itertools.product(range(modes), repeat=photons):
            counts = [0] * modes
            for mode in targets:
                counts[mode] += 1
            term = 1.0 + 0j
            for target, origin in zip(targets, sequence):
                term *= u[target, origin]
            result[index[tuple(counts)], j] += term

        for i, target in enumerate(basis):
            result[i, j] *= math.sqrt(_factorial_product(target) / _factorial_product(source))

    return result


class ModeTransform(object):
    """
    Linear m-mode transform. Lossless transforms are unitary to 1e-10; lossy
    ones are contractions, with singular values at most 1.
    """

    def __init__(self, matrix, lossless=True):
        matrix = np.asarray(matrix, dtype=complex)

        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionError("Mode transform must be square, got shape %s" % (matrix.shape,))

        if lossless:
            deviation = np.abs(matrix.conj().T.dot(matrix) - np.eye(matrix.shape[0])).max()
            if deviation > NORM_TOLERANCE:
                raise NonUnitaryError(
                    "Transform flagged lossless deviates from unitarity by %.3g" % deviation
                )
        elif np.linalg.svd(matrix, compute_uv=False).max() > 1.0 + NORM_TOLERANCE:
            raise NonUnitaryError("Transform amplifies: singular value above 1")

        self.matrix = matrix
        self.lossless = lossless
        self._sectors = {}

    @classmethod
    def identity(cls, modes):
        return cls(np.eye(modes))

    @property
    def mode_count(self):
        return self.matrix.shape[0]

    def sector(self, photons):
        if photons not in self._sectors:
            self._sectors[photons] = evolution_matrix(self.matrix, photons)
        return self._sectors[photons]

    def then(self, other):
        """Apply ``self`` first, then ``other``."""
        return ModeTransform(
            _matrix_of(other).dot(self.matrix),
            lossless=self.lossless and getattr(other, "lossless", True),
        )

    def embed(self, modes, total):
        """Place this transform on ``modes`` of a ``total``-mode system."""

        if len(modes) != self.mode_count:
            raise DimensionError("Need %d target modes, got %d" % (self.mode_count, len(modes)))

        matrix = np.eye(total, dtype=complex)
        matrix[np.ix_(modes, modes)] = self.matrix
        return ModeTransform(matrix, lossless=self.lossless)

    def __repr__(self):
        return "ModeTransform(modes=%d, lossless=%s)" % (self.mode_count, self.lossless)


def coupler(reflectivity=0.5):
    if not 0.0 <= reflectivity <= 1.0:
        raise UnphysicalParameterError("reflectivity", reflectivity, "[0, 1]")

    t = math.sqrt(1.0 - reflectivity)
    r = 1j * math.sqrt(reflectivity)
    return ModeTransform([[t, r], [r, t]])


def phase_shift(phi):
    return ModeTransform([[np.exp(1j * phi)]])


def _check_basis(basis):
    basis = [tuple(int(count) for count in vector) for vector in basis]

    if not basis:
        raise DimensionError("Basis is empty")
    if len(set(len(vector) for vector in basis)) != 1:
        raise DimensionError("Basis mixes occupation vectors of different lengths")
    if len(set(basis)) != len(basis):
        raise DimensionError("Basis elements are not unique")

    return basis


class FockState(object):
    def __init__(self, basis, amplitudes):
        self.basis = _check_basis(basis)
        self.amplitudes = np.asarray(amplitudes, dtype=complex)

        if self.amplitudes.shape != (len(self.basis),):
            raise DimensionError(
                "%d amplitudes for a basis of %d elements" % (self.amplitudes.size, len(self.basis))
            )

    @classmethod
    def from_occupation(cls, vector):
        return cls([OccupationVector(vector)], [1.0])

    @classmethod
    def from_dict(cls, amplitudes):
        basis = sorted(amplitudes, key=lambda vector: (sum(vector), tuple(-c for c in vector)))
        return cls(basis, [amplitudes[vector] for vector in basis])

    @property
    def mode_count(self):
        return len(self.basis[0])

    @property
    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self):
        return abs(self.norm ** 2 - 1.0) <= NORM_TOLERANCE

    def normalized(self):
        return FockState(self.basis, self.amplitudes / self.norm)

    def amplitude(self, vector):
        return dict(zip(self.basis, self.amplitudes)).get(tuple(vector), 0j)

    def probabilities(self):
        return collections.OrderedDict(
            (vector, float(abs(amplitude) ** 2)) for vector, amplitude in zip(self.basis, self.amplitudes)
        )

    def to_json(self):
        return {
            "basis": [list(vector) for vector in self.basis],
            "amplitudes": [[float(a.real), float(a.imag)] for a in self.amplitudes],
        }

    @classmethod
    def from_json(cls, data):
        return cls(data["basis"], [complex(re, im) for re, im in data["amplitudes"]])

    def __repr__(self):
        return "FockState(modes=%d, dim=%d)" % (self.mode_count, len(self.basis))


class DensityOperator(object):
    def __init__(self, basis, matrix, validate=True):
        self.basis = _check_basis(basis)
        self.matrix = np.asarray(matrix, dtype=complex)

        if self.matrix.shape != (len(self.basis), len(self.basis)):
            raise DimensionError(
                "Matrix shape %s does not match a basis of %d" % (self.matrix.shape, len(self.basis))
            )

        if validate:
            self.validate()

    def validate(self):
        trace = np.trace(self.matrix)
        if abs(trace - 1.0) > NORM_TOLERANCE:
            raise TruncationError("Density operator trace %.12g differs from 1" % trace.real)

        if np.abs(self.matrix - self.matrix.conj().T).max() > HERMITIAN_TOLERANCE:
            raise DimensionError("Density operator is not Hermitian")

        smallest = np.linalg.eigvalsh(self.matrix).min()
        if smallest < PSD_FLOOR:
            raise DimensionError("Density operator has eigenvalue %.3g" % smallest)

    @classmethod
    def from_state(cls, state, n_max=None):
        if n_max is None:
            return cls(state.basis, np.outer(state.amplitudes, state.amplitudes.conj()))

        basis = fock_space(state.mode_count, n_max)
        index = _index(basis)
        vector = np.zeros(len(basis), dtype=complex)
        for occupation, amplitude in zip(state.basis, state.amplitudes):
            if sum(occupation) > n_max:
                if abs(amplitude) ** 2 > LEAK_TOLERANCE:
                    raise TruncationError("State has weight above n_max = %d" % n_max)
                continue
            vector[index[occupation]] = amplitude
        vector /= np.linalg.norm(vector)
        return cls(basis, np.outer(vector, vector.conj()))

    @property
    def mode_count(self):
        return len(self.basis[0])

    def probabilities(self):
        return collections.OrderedDict(
            (vector, float(p)) for vector, p in zip(self.basis, np.real(np.diag(self.matrix)))
        )

    def photon_number_distribution(self, mode):
        counts = collections.defaultdict(float)
        for vector, p in self.probabilities().items():
            counts[vector[mode]] += p
        return dict(counts)

    def purity(self):
        return float(np.real(np.trace(self.matrix.dot(self.matrix))))

    def evolve(self, transform):
        """Conjugate by the Fock-space action of a lossless transform."""

        if not isinstance(transform, ModeTransform):
            transform = ModeTransform(transform)
        if not transform.lossless:
            raise NonUnitaryError("Sub-unitary transforms must be applied through apply_loss")

        basis, evolution = _evolution_on(transform, self.basis)
        matrix = evolution.dot(self.matrix).dot(evolution.conj().T)
        return DensityOperator(basis, (matrix + matrix.conj().T) / 2.0)

    def to_json(self):
        return {
            "basis": [list(vector) for vector in self.basis],
            "real": np.real(self.matrix).tolist(),
            "imag": np.imag(self.matrix).tolist(),
        }

    @classmethod
    def from_json(cls, data):
        return cls(data["basis"], np.array(data["real"]) + 1j * np.array(data["imag"]))

    def __repr__(self):
        return "DensityOperator(modes=%d, dim=%d)" % (self.mode_count, len(self.basis))


def _evolution_on(transform, basis):
    modes = transform.mode_count
    if len(basis[0]) != modes:
        raise DimensionError(
            "A %d-mode transform cannot act on %d-mode states" % (modes, len(basis[0]))
        )

    output = _sector_basis(basis, modes)
    output_index = _index(output)
    evolution = np.zeros((len(output), len(basis)), dtype=complex)

    for j, vector in enumerate(basis):
        photons = sum(vector)
        sector = fock_basis(modes, photons)
        column = transform.sector(photons)[:, sector.index(vector)]
        rows = [output_index[target] for target in sector]
        evolution[rows, j] = column

    return output, evolution


def apply_transform(state, transform):
    if not isinstance(transform, ModeTransform):
        transform = ModeTransform(transform)
    if not transform.lossless:
        raise NonUnitaryError("Sub-unitary transforms must be applied through apply_loss")

    basis, evolution = _evolution_on(transform, state.basis)
    return FockState(basis, evolution.dot(state.amplitudes))


def _as_density(state):
    if isinstance(state, DensityOperator):
        return state
    return DensityOperator.from_state(state)


def _loss_kraus(basis, index, mode, eta, lost):
    kraus = np.zeros((len(basis), len(basis)))
    for j, vector in enumerate(basis):
        n = vector[mode]
        if lost > n:
            continue
        target = list(vector)
        target[mode] = n - lost
        kraus[index[tuple(target)], j] = math.sqrt(
            math.comb(n, lost) * eta ** (n - lost) * (1.0 - eta) ** lost
        )
    return kraus


def apply_loss(state, eta):
    """
    Pass each mode through a beamsplitter of transmissivity ``eta[i]`` and trace
    out the reflected light. ``eta`` is a scalar or one value per mode.
    """

    rho = _as_density(state)
    modes = rho.mode_count
    etas = np.broadcast_to(np.asarray(eta, dtype=float), (modes,))

    for value in etas:
        if not 0.0 <= value <= 1.0:
            raise UnphysicalParameterError("eta", float(value), "[0, 1]")

    basis = fock_space(modes, max(sum(vector) for vector in rho.basis))
    index = _index(basis)
    embed = np.zeros((len(basis), len(rho.basis)))
    for j, vector in enumerate(rho.basis):
        embed[index[vector], j] = 1.0
    matrix = embed.dot(rho.matrix).dot(embed.T)

    for mode, value in enumerate(etas):
        if value == 1.0:
            continue
        n_max = max(vector[mode] for vector in basis)
        updated = np.zeros_like(matrix)
        for lost in range(n_max + 1):
            kraus = _loss_kraus(basis, index, mode, value, lost)
            updated += kraus.dot(matrix).dot(kraus.T)
        matrix = (updated + updated.conj().T) / 2.0

    return DensityOperator(basis, matrix)


def pair_state(mu, max_pairs=None):
    """Two-mode squeezed vacuum sum_n sqrt(P(n)) |n, n> with thermal P(n)."""

    distribution = pair_distribution(mu, max_pairs)
    n_max = distribution.size - 1
    leaked = (mu / (1.0 + mu)) ** (n_max + 1) if mu > 0 else 0.0

    if leaked > LEAK_TOLERANCE:
        raise TruncationError(
            "Pair state truncated at %d pairs leaks %.3g > %g" % (n_max, leaked, LEAK_TOLERANCE)
        )

    return FockState([(n, n) for n in range(n_max + 1)], np.sqrt(distribution))


def tensor_product(first, second):
    """Joint state on the modes of ``first`` followed by those of ``second``."""

    if isinstance(first, FockState) and isinstance(second, FockState):
        basis = [a + b for a in first.basis for b in second.basis]
        return FockState(basis, np.kron(first.amplitudes, second.amplitudes))

    first = _as_density(first)
    second = _as_density(second)
    basis = [a + b for a in first.basis for b in second.basis]
    return DensityOperator(basis, np.kron(first.matrix, second.matrix))


def partial_trace(state, keep):
    """Reduced density operator on the modes listed in ``keep``."""

    rho = _as_density(state)
    keep = list(keep)
    traced = [mode for mode in range(rho.mode_count) if mode not in keep]

    basis = sorted(
        set(tuple(vector[mode] for mode in keep) for vector in rho.basis),
        key=lambda vector: (sum(vector), tuple(-c for c in vector)),
    )
    index = _index(basis)
    matrix = np.zeros((len(basis), len(basis)), dtype=complex)

    groups = collections.defaultdict(list)
    for i, vector in enumerate(rho.basis):
        groups[tuple(vector[mode] for mode in traced)].append(i)

    for members in groups.values():
        rows = [index[tuple(rho.basis[i][mode] for mode in keep)] for i in members]
        matrix[np.ix_(rows, rows)] += rho.matrix[np.ix_(members, members)]

    return DensityOperator(basis, matrix)


class DetectionPattern(tuple):
    """
    Per-mode detection outcome: an exact photon count (or click level), CLICK
    for a threshold click, or None for an unmonitored mode.
    """

    def __new__(cls, outcomes):
        outcomes = tuple(outcomes)
        for outcome in outcomes:
            if outcome is None or outcome == CLICK:
                continue
            if not isinstance(outcome, (int, np.integer)) or outcome < 0:
                raise UnphysicalParameterError(
                    "outcome", outcome, "a non-negative count, CLICK or None"
                )
        return super(DetectionPattern, cls).__new__(cls, outcomes)

    @property
    def monitored(self):
        return [mode for mode, outcome in enumerate(self) if outcome is not None]

    @property
    def remaining(self):
        return [mode for mode, outcome in enumerate(self) if outcome is None]


def _detector_for(detectors, mode):
    if detectors is None:
        return None
    if isinstance(detectors, (list, tuple)):
        return detectors[mode]
    return detectors


def _outcome_probability(detector, outcome, photons):
    if detector is None:
        if outcome == CLICK:
            return 1.0 if photons > 0 else 0.0
        return 1.0 if outcome == photons else 0.0

    if outcome == CLICK:
        return 1.0 - detector.outcome_probabilities(photons)[0]

    if not detector.resolves_number and outcome != 0:
        raise UnphysicalParameterError("outcome", outcome, "0 or CLICK for a threshold detector")

    return detector.outcome_probabilities(photons).get(outcome, 0.0)


def _outcome_distribution(detector, photons):
    if detector is None:
        return {photons: 1.0}
    return detector.outcome_probabilities(photons)


def _pattern_weights(basis, pattern, detectors):
    if len(pattern) != len(basis[0]):
        raise DimensionError(
            "Pattern covers %d modes, state has %d" % (len(pattern), len(basis[0]))
        )

    monitored = pattern.monitored
    if not monitored:
        raise DimensionError("Detection pattern monitors no modes")

    cache = {}
    weights = np.ones(len(basis))
    for i, vector in enumerate(basis):
        for mode in monitored:
            key = (mode, vector[mode])
            if key not in cache:
                cache[key] = _outcome_probability(
                    _detector_for(detectors, mode), pattern[mode], vector[mode]
                )
            weights[i] *= cache[key]
    return weights


def pattern_probability(state, pattern, detectors=None):
    """
    Probability of ``pattern``. ``detectors`` is None (ideal number-resolving
    detectors), one detector model for every mode or a per-mode list.
    """

    rho = _as_density(state)
    pattern = DetectionPattern(pattern)
    weights = _pattern_weights(rho.basis, pattern, detectors)
    return float(np.dot(weights, np.real(np.diag(rho.matrix))))


def condition_on(state, pattern, detectors=None):
    """
    Apply the detection POVM of ``pattern`` and trace out the monitored modes.

    Returns the normalized state of the unmonitored modes and the pattern
    probability.
    """

    rho = _as_density(state)
    pattern = DetectionPattern(pattern)
    weights = _pattern_weights(rho.basis, pattern, detectors)
    probability = float(np.dot(weights, np.real(np.diag(rho.matrix))))

    if probability <= IMPOSSIBLE_PROBABILITY:
        raise ImpossibleOutcomeError(
            "Detection pattern %r never occurs" % (tuple(pattern),), probability
        )

    remaining = pattern.remaining
    monitored = pattern.monitored
    basis = fock_space(len(remaining), max(sum(v[m] for m in remaining) for v in rho.basis))
    index = _index(basis)
    matrix = np.zeros((len(basis), len(basis)), dtype=complex)

    groups = collections.defaultdict(list)
    for i, vector in enumerate(rho.basis):
        groups[tuple(vector[mode] for mode in monitored)].append(i)

    for members in groups.values():
        weight = weights[members[0]]
        if weight == 0.0:
            continue
        rows = [index[tuple(rho.basis[i][mode] for mode in remaining)] for i in members]
        matrix[np.ix_(rows, rows)] += weight * rho.matrix[np.ix_(members, members)]

    default_logger.debug("Pattern %r occurs with probability %.6g" % (tuple(pattern), probability))
    return DensityOperator(basis, matrix / probability), probability


def sample_detections(state, detectors, rng_seed, shots):
    """
    Draw ``shots`` detection patterns, every mode monitored. ``rng_seed`` is an
    integer seed or a ``numpy.random.Generator``.
    """

    rho = _as_density(state)
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else make_rng(rng_seed)

    diagonal = np.clip(np.real(np.diag(rho.matrix)), 0.0, None)
    draws = rng.choice(len(rho.basis), size=shots, p=diagonal / diagonal.sum())

    patterns = np.empty((shots, rho.mode_count), dtype=object)
    for element in np.unique(draws):
        where = np.flatnonzero(draws == element)
        vector = rho.basis[element]
        for mode, photons in enumerate(vector):
            distribution = _outcome_distribution(_detector_for(detectors, mode), photons)
            outcomes = list(distribution)
            probabilities = np.array([distribution[o] for o in outcomes], dtype=float)
            picks = rng.choice(len(outcomes), size=where.size, p=probabilities / probabilities.sum())
            for row, pick in zip(where, picks):
                patterns[row, mode] = outcomes[pick]

    return [DetectionPattern(_plain(outcome) for outcome in row) for row in patterns]


def _plain(outcome):
    if isinstance(outcome, (int, np.integer)):
        return int(outcome)
    return outcome


def sample_detection(state, detectors, rng_seed):
    return sample_detections(state, detectors, rng_seed, 1)[0]
