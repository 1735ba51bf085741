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
Dual-rail qubit benchmark experiments driven by the Fock engine.

A dual-rail qubit is one photon in a pair of modes: |0> puts it in the first
mode and |1> in the second. Preparation and measurement settings are two
phases (theta, phi) programming an MZI, which prepares
cos(theta / 2)|0> + exp(i phi) sin(theta / 2)|1> from |0>. Measurements run
the inverse MZI and report the outcome conditional on exactly one detector
clicking.
"""

import collections
import itertools
import math

import numpy as np
from scipy import linalg

from photonbench import tomography
from photonbench.counting import HspsChain, TmsvSource, heralded_photon_distribution
from photonbench.detectors import CLICK, SnspdModel
from photonbench.errors import ImpossibleOutcomeError, TruncationError, UnphysicalParameterError
from photonbench.fock import (
    DEFAULT_N_MAX,
    LEAK_TOLERANCE,
    DensityOperator,
    FockState,
    ModeTransform,
    apply_loss,
    apply_transform,
    fock_basis,
    fock_space,
    pattern_probability,
    transition_amplitude,
)
from photonbench.helpers import make_rng
from photonbench.logger import default_logger
from photonbench.spectral import spectral_overlap

__all__ = [
    "BELL_STATES",
    "ChannelNoise",
    "ChannelResult",
    "FusionResult",
    "HomResult",
    "MeasSpec",
    "MeasurementResult",
    "NoiseConfig",
    "PAULI_EIGENSTATES",
    "PrepSpec",
    "SpamResult",
    "chip_to_chip_experiment",
    "fusion_experiment",
    "hom_experiment",
    "measure_qubit",
    "prepare_qubit",
    "qubit_unitary",
    "spam_experiment",
]

PrepSpec = collections.namedtuple("PrepSpec", ["theta", "phi"])
MeasSpec = collections.namedtuple("MeasSpec", ["theta", "phi"])

PAULI_EIGENSTATES = collections.OrderedDict(
    [
        ("Z+", PrepSpec(0.0, 0.0)),
        ("Z-", PrepSpec(math.pi, 0.0)),
        ("X+", PrepSpec(math.pi / 2, 0.0)),
        ("X-", PrepSpec(math.pi / 2, math.pi)),
        ("Y+", PrepSpec(math.pi / 2, math.pi / 2)),
        ("Y-", PrepSpec(math.pi / 2, 3 * math.pi / 2)),
    ]
)

# the "+" outcome of each axis projects onto its +1 eigenstate
MEASUREMENT_SETTINGS = collections.OrderedDict(
    (axis, MeasSpec(*PAULI_EIGENSTATES[axis + "+"])) for axis in ("X", "Y", "Z")
)

BELL_STATES = collections.OrderedDict(
    [
        ("Phi+", np.array([1, 0, 0, 1]) / math.sqrt(2)),
        ("Phi-", np.array([1, 0, 0, -1]) / math.sqrt(2)),
        ("Psi+", np.array([0, 1, 1, 0]) / math.sqrt(2)),
        ("Psi-", np.array([0, 1, -1, 0]) / math.sqrt(2)),
    ]
)

_QUBIT_BASIS = [(1, 0), (0, 1)]
_PATTERNS = ((CLICK, 0), (0, CLICK), (0, 0), (CLICK, CLICK))

# source terms kept beyond max_photons when estimating the heralded tail
HERALD_TAIL_TERMS = 4

MeasurementResult = collections.namedtuple("MeasurementResult", ["p0", "p1", "p_none", "p_both"])


class NoiseConfig(
    collections.namedtuple(
        "NoiseConfig",
        [
            "phase_error_std",
            "transmission",
            "detector_efficiency",
            "noise_clicks",
            "mu",
            "herald_efficiency",
            "herald_noise",
            "draws",
            "max_photons",
        ],
    )
):
    """
    Imperfections shared by the qubit experiments.

    ``noise_clicks`` is the mean number of noise clicks per detector per pulse;
    ``mu = 0`` stands for an ideal single-photon source. ``draws`` phase-error
    realizations are averaged when ``phase_error_std`` is non-zero.
    """

    __slots__ = ()

    def __new__(
        cls,
        phase_error_std=0.0,
        transmission=1.0,
        detector_efficiency=1.0,
        noise_clicks=0.0,
        mu=0.0,
        herald_efficiency=1.0,
        herald_noise=0.0,
        draws=200,
        max_photons=DEFAULT_N_MAX,
    ):
        for name, value in (
            ("transmission", transmission),
            ("detector_efficiency", detector_efficiency),
            ("herald_efficiency", herald_efficiency),
        ):
            if not 0.0 <= value <= 1.0:
                raise UnphysicalParameterError(name, value, "[0, 1]")
        for name, value in (
            ("phase_error_std", phase_error_std),
            ("noise_clicks", noise_clicks),
            ("mu", mu),
            ("herald_noise", herald_noise),
        ):
            if value < 0:
                raise UnphysicalParameterError(name, value, "[0, inf)")
        if draws < 1:
            raise UnphysicalParameterError("draws", draws, "[1, inf)")

        return super(NoiseConfig, cls).__new__(
            cls,
            float(phase_error_std),
            float(transmission),
            float(detector_efficiency),
            float(noise_clicks),
            float(mu),
            float(herald_efficiency),
            float(herald_noise),
            int(draws),
            int(max_photons),
        )

    def detectors(self):
        if self.detector_efficiency == 1.0 and self.noise_clicks == 0.0:
            return None
        return SnspdModel.from_click_probability(
            self.detector_efficiency, -math.expm1(-self.noise_clicks)
        )

    def photon_distribution(self):
        """
        Heralded photon-number distribution, cut at the first photon number
        leaving less than ``LEAK_TOLERANCE`` behind.

        :raises TruncationError: the cut would need more than ``max_photons``
        """

        if self.mu == 0.0:
            return np.array([0.0, 1.0])

        chain = HspsChain(
            TmsvSource(self.mu, n_max=self.max_photons + HERALD_TAIL_TERMS),
            herald_efficiency=self.herald_efficiency,
            herald_noise=self.herald_noise,
        )
        distribution = heralded_photon_distribution(chain)
        tails = 1.0 - np.cumsum(distribution)
        for n in range(1, self.max_photons + 1):
            if tails[n] <= LEAK_TOLERANCE:
                default_logger.debug("Heralded photon distribution cut at %d photons" % n)
                kept = distribution[: n + 1]
                return kept / kept.sum()

        raise TruncationError(
            "Heralded photon distribution for mu=%g needs more than %d photons" % (self.mu, self.max_photons),
            leaked=float(tails[self.max_photons]),
        )

    def jitter(self, rng, setting):
        if self.phase_error_std == 0.0:
            return setting
        theta, phi = rng.normal(0.0, self.phase_error_std, 2)
        return type(setting)(setting.theta + theta, setting.phi + phi)


def qubit_unitary(theta, phi):
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    return np.array([[c, -np.exp(-1j * phi) * s], [np.exp(1j * phi) * s, c]])


def qubit_vector(theta, phi):
    return qubit_unitary(theta, phi)[:, 0]


def _source_density(distribution, modes=2, mode=0):
    n_max = distribution.size - 1
    basis = fock_space(modes, n_max)
    matrix = np.zeros((len(basis), len(basis)), dtype=complex)
    for n, p in enumerate(distribution):
        occupation = [0] * modes
        occupation[mode] = n
        i = basis.index(tuple(occupation))
        matrix[i, i] = p
    return DensityOperator(basis, matrix)


def prepare_qubit(setting, noise=None, rng=None):
    """
    Prepared dual-rail state: a FockState for a single photon or a
    DensityOperator for a heralded multi-photon source.
    """

    noise = noise or NoiseConfig()
    if rng is not None:
        setting = noise.jitter(rng, setting)

    transform = ModeTransform(qubit_unitary(setting.theta, setting.phi))
    distribution = noise.photon_distribution()
    if noise.mu == 0.0:
        return apply_transform(FockState.from_occupation((1, 0)), transform)

    return _source_density(distribution).evolve(transform)


def measure_qubit(state, setting, detectors=None, transmission=1.0):
    """Outcome probabilities; p0 and p1 are conditional on exactly one click."""

    rho = state if isinstance(state, DensityOperator) else DensityOperator.from_state(state)
    if transmission < 1.0:
        rho = apply_loss(rho, transmission)

    measured = rho.evolve(ModeTransform(qubit_unitary(setting.theta, setting.phi).conj().T))
    zero, one, none, both = [pattern_probability(measured, pattern, detectors) for pattern in _PATTERNS]

    detected = zero + one
    if detected <= 0.0:
        raise ImpossibleOutcomeError("No single-click outcome is possible", detected)

    return MeasurementResult(zero / detected, one / detected, none, both)


def _raw_outcomes(rho, setting, detectors, transmission):
    if transmission < 1.0:
        rho = apply_loss(rho, transmission)
    measured = rho.evolve(ModeTransform(qubit_unitary(setting.theta, setting.phi).conj().T))
    return np.array([pattern_probability(measured, pattern, detectors) for pattern in _PATTERNS])


def _density(state):
    if isinstance(state, DensityOperator):
        return state
    return DensityOperator.from_state(state)


def qubit_density(state):
    """2x2 qubit density matrix of the single-photon sector, renormalized."""

    rho = _density(state)
    index = [rho.basis.index(vector) for vector in _QUBIT_BASIS]
    block = rho.matrix[np.ix_(index, index)]
    return block / np.real(np.trace(block))


def _as_two_mode(qubit_rho):
    return DensityOperator(_QUBIT_BASIS, qubit_rho)


def _axis_counts(outcomes, mode, shots, rng):
    """Counts (plus, minus) from the four raw outcome probabilities."""

    if mode == "exact":
        return outcomes[0], outcomes[1]
    sample = rng.multinomial(shots, np.clip(outcomes, 0.0, None) / outcomes.sum())
    return sample[0], sample[1]


def _check_mode(mode):
    if mode not in ("exact", "sampled"):
        raise UnphysicalParameterError("mode", mode, "'exact' or 'sampled'")


def _resample(counts, rng):
    """Parametric bootstrap copy of a dict of count tables."""

    copy = {}
    for key, table in counts.items():
        table = np.asarray(table, dtype=float)
        total = int(round(table.sum()))
        copy[key] = rng.multinomial(total, table.ravel() / table.sum()).reshape(table.shape)
    return copy


SpamResult = collections.namedtuple(
    "SpamResult", ["fidelities", "average", "error", "counts"]
)


def _tomography_counts(prepare, noise, mode, shots, rng):
    """
    Counts per measurement axis, averaged (exact) or accumulated (sampled) over
    phase-error draws of preparation and measurement.
    """

    detectors = noise.detectors()
    draws = noise.draws if noise.phase_error_std else 1
    per_draw = max(1, shots // draws) if mode == "sampled" else 0

    counts = collections.OrderedDict((axis, np.zeros(2)) for axis in MEASUREMENT_SETTINGS)
    for _ in range(draws):
        rho = _density(prepare(rng))
        for axis, setting in MEASUREMENT_SETTINGS.items():
            outcomes = _raw_outcomes(rho, noise.jitter(rng, setting), detectors, noise.transmission)
            plus, minus = _axis_counts(outcomes, mode, per_draw, rng)
            counts[axis] += (plus, minus)

    return counts


def spam_experiment(noise=None, shots=100000, seed=0, mode="exact", resamples=20):
    """
    Prepare the six Pauli eigenstates, tomograph each and report the fidelity
    of every reconstruction with its target together with the average.
    """

    _check_mode(mode)
    noise = noise or NoiseConfig()
    fidelities = collections.OrderedDict()
    all_counts = collections.OrderedDict()

    for label, setting in PAULI_EIGENSTATES.items():
        rng = make_rng(seed, "spam", label)
        counts = _tomography_counts(lambda r, setting=setting: prepare_qubit(setting, noise, r), noise, mode, shots, rng)
        target = qubit_vector(*setting)
        fidelities[label] = tomography.state_fidelity(tomography.reconstruct_state(counts), target)
        all_counts[label] = counts

    average = float(np.mean(list(fidelities.values())))

    error = 0.0
    if mode == "sampled":
        rng = make_rng(seed, "spam", "bootstrap")
        averages = []
        for _ in range(resamples):
            values = [
                tomography.state_fidelity(
                    tomography.reconstruct_state(_resample(all_counts[label], rng)),
                    qubit_vector(*setting),
                )
                for label, setting in PAULI_EIGENSTATES.items()
            ]
            averages.append(np.mean(values))
        error = float(np.std(averages))

    default_logger.info("SPAM average fidelity %.6f" % average)
    return SpamResult(fidelities, average, error, all_counts)


ChannelNoise = collections.namedtuple("ChannelNoise", ["epsilon", "depolarization", "transmission"])
ChannelNoise.__new__.__defaults__ = (0.0, 0.0, 1.0)

ChannelResult = collections.namedtuple(
    "ChannelResult",
    [
        "ptm",
        "channel_ptm",
        "process_fidelity",
        "average_gate_fidelity",
        "choi_fidelity",
        "error",
    ],
)

# process tomography inputs: |0>, |1>, |+>, |+i>
CHANNEL_INPUTS = collections.OrderedDict(
    [
        ("0", PAULI_EIGENSTATES["Z+"]),
        ("1", PAULI_EIGENSTATES["Z-"]),
        ("+", PAULI_EIGENSTATES["X+"]),
        ("+i", PAULI_EIGENSTATES["Y+"]),
    ]
)


def channel_kraus(channel, seed):
    """
    Kraus set of a small unitary error of angle ``epsilon`` about a random axis
    drawn from ``seed``, followed by depolarization.
    """

    if not 0.0 <= channel.depolarization <= 1.0:
        raise UnphysicalParameterError("depolarization", channel.depolarization, "[0, 1]")
    if not 0.0 < channel.transmission <= 1.0:
        raise UnphysicalParameterError("transmission", channel.transmission, "(0, 1]")

    axis = make_rng(seed, "chip_to_chip", "axis").normal(size=3)
    axis /= np.linalg.norm(axis)
    generator = sum(n * tomography.PAULIS[label] for n, label in zip(axis, ("X", "Y", "Z")))
    rotation = linalg.expm(-0.5j * channel.epsilon * generator)

    return [k.dot(rotation) for k in tomography.depolarizing_kraus(channel.depolarization)]


def chip_to_chip_experiment(channel=None, noise=None, shots=100000, seed=0, mode="exact", resamples=20):
    """
    Process tomography of a chip-to-chip link. Loss is post-selected away, so
    only the unitary error and depolarization lower the fidelity to identity.
    """

    _check_mode(mode)
    channel = channel or ChannelNoise()
    noise = noise or NoiseConfig()
    kraus = channel_kraus(channel, seed)
    link = noise._replace(transmission=noise.transmission * channel.transmission)

    def transmit(setting, rng):
        rho = qubit_density(prepare_qubit(setting, noise, rng))
        return _as_two_mode(sum(k.dot(rho).dot(k.conj().T) for k in kraus))

    counts = collections.OrderedDict()
    for label, setting in CHANNEL_INPUTS.items():
        rng = make_rng(seed, "chip_to_chip", label)
        counts[label] = _tomography_counts(lambda r, setting=setting: transmit(setting, r), link, mode, shots, rng)

    def process_fidelity(tables):
        outputs = dict((label, tomography.reconstruct_state(table)) for label, table in tables.items())
        return tomography.ptm_from_states(outputs)

    ptm = process_fidelity(counts)
    fidelity = tomography.ptm_fidelity(ptm, np.eye(4))

    error = 0.0
    if mode == "sampled":
        rng = make_rng(seed, "chip_to_chip", "bootstrap")
        copies = [
            tomography.ptm_fidelity(
                process_fidelity(dict((label, _resample(table, rng)) for label, table in counts.items())),
                np.eye(4),
            )
            for _ in range(resamples)
        ]
        error = float(np.std(copies))

    default_logger.info("Chip-to-chip process fidelity %.6f" % fidelity)
    return ChannelResult(
        ptm=ptm,
        channel_ptm=tomography.pauli_transfer_matrix(kraus),
        process_fidelity=fidelity,
        average_gate_fidelity=tomography.average_gate_fidelity(fidelity),
        choi_fidelity=tomography.choi_fidelity(ptm, np.eye(2)),
        error=error,
    )


def _output_probabilities(matrix, occupation):
    """Output occupation -> probability for one Fock input."""

    result = []
    for vector in fock_basis(len(occupation), sum(occupation)):
        p = abs(transition_amplitude(matrix, occupation, vector)) ** 2
        if p > 1e-16:
            result.append((vector, p))
    return result


def _click(photons, efficiency, dark):
    return 1.0 - (1.0 - efficiency) ** photons * (1.0 - dark)


def _binomial(n, k, p):
    return math.comb(n, k) * p ** k * (1.0 - p) ** (n - k)


HomResult = collections.namedtuple(
    "HomResult",
    [
        "delays_ps",
        "indistinguishability",
        "coincidence",
        "baseline",
        "visibility",
        "best_visibility",
        "error",
    ],
)


def hom_experiment(
    source1=None,
    source2=None,
    indistinguishability=1.0,
    delays_ps=(0.0,),
    noise=None,
    shots=100000,
    seed=0,
    mode="exact",
):
    """
    Two heralded sources meet on a balanced coupler; coincidences between the
    two outputs are compared with a fully distinguishable baseline.

    Each spatial port carries a shared and a private internal mode. Photons of
    the first source sit in the shared mode; each photon of the second source
    is shared with probability equal to the spectral overlap Tr(rho1 rho2),
    evaluated at every delay when spectral states are given.
    """

    _check_mode(mode)
    noise = noise or NoiseConfig()
    delays = np.asarray(delays_ps, dtype=float)

    if source1 is not None and source2 is not None:
        overlaps = np.array([spectral_overlap(source1, source2, delay) for delay in delays])
    else:
        if not 0.0 <= indistinguishability <= 1.0:
            raise UnphysicalParameterError("indistinguishability", indistinguishability, "[0, 1]")
        overlaps = np.full(delays.size, float(indistinguishability))

    distribution = noise.photon_distribution()
    efficiency = noise.detector_efficiency * noise.transmission
    dark = -math.expm1(-noise.noise_clicks)

    # modes: A shared, B shared, A private, B private
    beamsplitter = np.zeros((4, 4), dtype=complex)
    split = qubit_unitary(math.pi / 2, math.pi / 2)
    beamsplitter[np.ix_([0, 1], [0, 1])] = split
    beamsplitter[np.ix_([2, 3], [2, 3])] = split

    cache = {}

    def coincidence_of(occupation):
        if occupation not in cache:
            total = 0.0
            for vector, p in _output_probabilities(beamsplitter, occupation):
                total += p * _click(vector[0] + vector[2], efficiency, dark) * _click(
                    vector[1] + vector[3], efficiency, dark
                )
            cache[occupation] = total
        return cache[occupation]

    def coincidence(overlap):
        total = 0.0
        for n1, p1 in enumerate(distribution):
            for n2, p2 in enumerate(distribution):
                if p1 * p2 == 0.0:
                    continue
                for k in range(n2 + 1):
                    weight = _binomial(n2, k, overlap)
                    if weight:
                        total += p1 * p2 * weight * coincidence_of((n1, k, 0, n2 - k))
        return total

    baseline = coincidence(0.0)
    if baseline <= 0.0:
        raise ImpossibleOutcomeError("Sources never give coincidences", baseline)
    rates = np.array([coincidence(overlap) for overlap in overlaps])

    if mode == "exact":
        visibility = 1.0 - rates / baseline
        error = 0.0
    else:
        rng = make_rng(seed, "hom")
        reference = rng.binomial(shots, baseline)
        observed = rng.binomial(shots, rates)
        visibility = 1.0 - observed / float(reference)
        best = int(np.argmin(observed))
        error = float(
            observed[best] / float(reference) * math.sqrt(1.0 / max(observed[best], 1) + 1.0 / reference)
        )

    best_visibility = float(visibility.max())
    default_logger.info("HOM visibility %.6f" % best_visibility)
    return HomResult(delays, overlaps, rates, baseline, visibility, best_visibility, error)


FusionResult = collections.namedtuple(
    "FusionResult",
    ["density", "fidelity", "bell_map", "target", "success_probability", "error", "counts"],
)

FUSION_PATTERN = "one click per pair"
FUSION_MODES = 8
_FUSION_INPUTS = (PAULI_EIGENSTATES["X+"], PAULI_EIGENSTATES["X-"])


def _fusion_mode(spatial, internal):
    return spatial + 4 * internal


def _pair_unitary(first, second):
    """Unitary acting on spatial pairs (0, 1) and (2, 3), identical for both internal modes."""

    matrix = np.zeros((FUSION_MODES, FUSION_MODES), dtype=complex)
    for internal in range(2):
        for pair, block in ((0, first), (2, second)):
            modes = [_fusion_mode(pair, internal), _fusion_mode(pair + 1, internal)]
            matrix[np.ix_(modes, modes)] = block
    return matrix


def _path_exchange():
    """Swap spatial modes 1 and 2, so each output pair holds one rail of each qubit."""

    order = [0, 2, 1, 3]
    matrix = np.zeros((FUSION_MODES, FUSION_MODES))
    for internal in range(2):
        for source, target in enumerate(order):
            matrix[_fusion_mode(target, internal), _fusion_mode(source, internal)] = 1.0
    return matrix


def _fusion_inputs(distribution, overlap):
    """Fock inputs with weights: qubit 1 photons in internal mode 0, qubit 2 shared with probability ``overlap``."""

    inputs = []
    for n1, p1 in enumerate(distribution):
        for n2, p2 in enumerate(distribution):
            for k in range(n2 + 1):
                weight = p1 * p2 * _binomial(n2, k, overlap)
                if weight <= 0.0:
                    continue
                occupation = [0] * FUSION_MODES
                occupation[_fusion_mode(0, 0)] = n1
                occupation[_fusion_mode(2, 0)] = k
                occupation[_fusion_mode(2, 1)] = n2 - k
                inputs.append((tuple(occupation), weight))
    return inputs


def _pair_outcomes(vector, efficiency, dark):
    """4x4 table of (none, plus, minus, both) outcomes of the two detector pairs."""

    clicks = [_click(vector[s] + vector[s + 4], efficiency, dark) for s in range(4)]
    tables = []
    for first, second in ((0, 1), (2, 3)):
        c0, c1 = clicks[first], clicks[second]
        tables.append(np.array([(1 - c0) * (1 - c1), c0 * (1 - c1), (1 - c0) * c1, c0 * c1]))
    return np.outer(tables[0], tables[1])


def _fusion_tables(noise, overlap, mode, shots, rng):
    distribution = noise.photon_distribution()
    inputs = _fusion_inputs(distribution, overlap)
    efficiency = noise.detector_efficiency * noise.transmission
    dark = -math.expm1(-noise.noise_clicks)
    exchange = _path_exchange()

    draws = noise.draws if noise.phase_error_std else 1
    per_draw = max(1, shots // draws) if mode == "sampled" else 0
    settings = list(itertools.product(MEASUREMENT_SETTINGS, repeat=2))

    counts = collections.OrderedDict((setting, np.zeros((2, 2))) for setting in settings)
    success = []
    for _ in range(draws):
        prepare = _pair_unitary(
            *[qubit_unitary(*noise.jitter(rng, setting)) for setting in _FUSION_INPUTS]
        )
        for first, second in settings:
            measure = _pair_unitary(
                *[
                    qubit_unitary(*noise.jitter(rng, MEASUREMENT_SETTINGS[axis])).conj().T
                    for axis in (first, second)
                ]
            )
            circuit = measure.dot(exchange).dot(prepare)

            outcomes = np.zeros((4, 4))
            for occupation, weight in inputs:
                for vector, p in _output_probabilities(circuit, occupation):
                    outcomes += weight * p * _pair_outcomes(vector, efficiency, dark)

            heralded = outcomes[1:3, 1:3]
            probability = heralded.sum()
            if probability <= 1e-15:
                raise ImpossibleOutcomeError(
                    "Fusion heralding pattern never occurs for setting %s%s" % (first, second),
                    probability,
                )
            success.append(probability)

            if mode == "exact":
                counts[(first, second)] += heralded / probability
            else:
                flat = np.append(heralded.ravel(), max(0.0, 1.0 - probability))
                sample = rng.multinomial(per_draw, flat / flat.sum())
                counts[(first, second)] += sample[:4].reshape(2, 2)

    return counts, float(np.mean(success))


def discover_bell_target():
    """
    Run the ideal fusion circuit and return the Bell state it heralds, keyed by
    detection pattern, with the state vector.
    """

    counts, _ = _fusion_tables(NoiseConfig(), 1.0, "exact", 0, make_rng(0, "fusion", "ideal"))
    rho = tomography.reconstruct_two_qubit_state(counts)
    values, vectors = np.linalg.eigh(rho)
    leading = vectors[:, -1]

    overlaps = dict((name, abs(np.vdot(bell, leading)) ** 2) for name, bell in BELL_STATES.items())
    name = max(overlaps, key=overlaps.get)
    if overlaps[name] < 1.0 - 1e-9:
        default_logger.warning("Ideal fusion state is not a standard Bell state")
        return {FUSION_PATTERN: "ideal"}, leading
    return {FUSION_PATTERN: name}, BELL_STATES[name]


def fusion_experiment(noise=None, indistinguishability=1.0, shots=100000, seed=0, mode="exact", resamples=20):
    """
    Type II fusion of |+> and |->: the paths are exchanged between the qubits,
    each output pair is measured in a Pauli basis and events with one click in
    each pair are kept. The heralded two-qubit state is reconstructed from nine
    settings and compared with the Bell state the ideal circuit heralds.
    """

    _check_mode(mode)
    noise = noise or NoiseConfig()
    if not 0.0 <= indistinguishability <= 1.0:
        raise UnphysicalParameterError("indistinguishability", indistinguishability, "[0, 1]")

    bell_map, target = discover_bell_target()
    counts, success = _fusion_tables(
        noise, indistinguishability, mode, shots, make_rng(seed, "fusion")
    )
    rho = tomography.reconstruct_two_qubit_state(counts)
    fidelity = tomography.state_fidelity(rho, target)

    error = 0.0
    if mode == "sampled":
        rng = make_rng(seed, "fusion", "bootstrap")
        copies = [
            tomography.state_fidelity(
                tomography.reconstruct_two_qubit_state(_resample(counts, rng)), target
            )
            for _ in range(resamples)
        ]
        error = float(np.std(copies))

    default_logger.info("Fusion Bell fidelity %.6f (%s)" % (fidelity, bell_map[FUSION_PATTERN]))
    return FusionResult(rho, fidelity, bell_map, target, success, error, counts)
