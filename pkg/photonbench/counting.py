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
Heralded single-photon source counting experiments.

Pulse trains are simulated in fixed-size blocks. Every block draws from its own
generator derived from ``(seed, block index)``, so the merged counts do not
depend on how blocks are scheduled.
"""

import collections
import math

import numpy as np

from photonbench.components import SHIELDING_SUPPRESSION_DB
from photonbench.detectors import PnrdModel
from photonbench.errors import CountingError, TruncationError, UnphysicalParameterError
from photonbench.helpers import make_rng
from photonbench.logger import default_logger

__all__ = [
    "BLOCK_PULSES",
    "CountingResult",
    "Estimate",
    "ExactRates",
    "HspsChain",
    "TmsvSource",
    "analytic_small_mu",
    "exact_rates",
    "heralded_photon_distribution",
    "metrics",
    "noise_from_suppression",
    "pair_distribution",
    "simulate_hsps",
]

BLOCK_PULSES = 1 << 20
DEFAULT_REPETITION_RATE = 125e6
TAIL_TOLERANCE = 1e-6
ANALYTIC_MU_LIMIT = 0.05

_COUNT_FIELDS = (
    "pulses",
    "adjacent_pairs",
    "herald",
    "signal",
    "a",
    "b",
    "coincidences",
    "accidentals",
    "h_a",
    "h_b",
    "h_ab",
)


class CountingResult(collections.namedtuple("CountingResult", _COUNT_FIELDS)):
    """
    Raw counts of one simulated pulse train.

    ``accidentals`` counts herald clicks at pulse t followed by a signal click
    at pulse t+1; ``adjacent_pairs`` is the number of such pulse pairs.
    """

    __slots__ = ()

    @classmethod
    def empty(cls):
        return cls(*([0] * len(_COUNT_FIELDS)))

    def merge(self, other):
        return CountingResult(*[int(x + y) for x, y in zip(self, other)])


Estimate = collections.namedtuple("Estimate", ["value", "error", "lower_bound"])
Estimate.__new__.__defaults__ = (False,)

ExactRates = collections.namedtuple(
    "ExactRates",
    [
        "herald",
        "signal",
        "coincidence",
        "h_a",
        "h_b",
        "h_ab",
        "car",
        "klyshko_signal",
        "klyshko_herald",
        "g2_heralded",
    ],
)


def pair_distribution(mu, n_max=None):
    """
    Thermal pair-number distribution P(n) = mu**n / (1 + mu)**(n + 1).

    Without ``n_max`` the truncation is chosen so that the discarded tail is
    below 1e-6. The returned distribution is renormalized.
    """

    if mu < 0 or not math.isfinite(mu):
        raise UnphysicalParameterError("mu", mu, "[0, inf)")

    if mu == 0:
        return np.array([1.0])

    ratio = mu / (1.0 + mu)
    if n_max is None:
        # tail mass beyond n is ratio ** (n + 1)
        n_max = max(1, int(math.ceil(math.log(TAIL_TOLERANCE) / math.log(ratio))) - 1)

    probabilities = ratio ** np.arange(n_max + 1) / (1.0 + mu)
    return probabilities / probabilities.sum()


def _no_click(photons, efficiency, noise):
    return (1.0 - efficiency) ** photons * math.exp(-noise)


class TmsvSource(object):
    def __init__(self, mu, n_max=None):
        if mu < 0:
            raise UnphysicalParameterError("mu", mu, "[0, inf)")

        self.mu = float(mu)
        self.distribution = pair_distribution(self.mu, n_max)
        self.n_max = self.distribution.size - 1
        self.leaked = 0.0 if self.mu == 0 else (self.mu / (1.0 + self.mu)) ** (self.n_max + 1)

        if self.leaked > TAIL_TOLERANCE:
            default_logger.warning(
                "Pair distribution truncated at n = %d leaks %.3g" % (self.n_max, self.leaked)
            )

    def __repr__(self):
        return "TmsvSource(mu=%g, n_max=%d)" % (self.mu, self.n_max)


class HspsChain(object):
    """
    Heralded source followed by lumped herald and signal arms.

    Efficiencies lump filtering, coupling and detection. Noise is given in
    mean clicks per pulse per detector. The signal arm ends in a balanced
    splitter with two threshold detectors, ``a`` and ``b``. With a PnrdModel
    as ``herald_detector`` the herald fires only when exactly one cell fires.
    """

    def __init__(
        self,
        source,
        herald_efficiency=1.0,
        signal_efficiency=1.0,
        herald_noise=0.0,
        signal_noise=0.0,
        repetition_rate=DEFAULT_REPETITION_RATE,
        herald_detector=None,
    ):
        for name, value in (
            ("herald_efficiency", herald_efficiency),
            ("signal_efficiency", signal_efficiency),
        ):
            if not 0.0 <= value <= 1.0:
                raise UnphysicalParameterError(name, value, "[0, 1]")

        for name, value in (("herald_noise", herald_noise), ("signal_noise", signal_noise)):
            if value < 0:
                raise UnphysicalParameterError(name, value, "[0, inf)")

        if repetition_rate <= 0:
            raise UnphysicalParameterError("repetition_rate", repetition_rate, "(0, inf)")

        if herald_detector is not None and not isinstance(herald_detector, PnrdModel):
            raise UnphysicalParameterError(
                "herald_detector", herald_detector, "None or a PnrdModel"
            )

        self.source = source
        self.herald_efficiency = float(herald_efficiency)
        self.signal_efficiency = float(signal_efficiency)
        self.herald_noise = float(herald_noise)
        self.signal_noise = float(signal_noise)
        self.repetition_rate = float(repetition_rate)
        self.herald_detector = herald_detector

    @property
    def mu(self):
        return self.source.mu

    @property
    def herald_noise_probability(self):
        return -math.expm1(-self.herald_noise)

    @property
    def signal_noise_probability(self):
        return -math.expm1(-self.signal_noise)

    def herald_probability(self, pairs):
        """P(herald | n pairs), including herald-arm loss and noise."""

        if self.herald_detector is None:
            return 1.0 - _no_click(pairs, self.herald_efficiency, self.herald_noise)

        detector = self.herald_detector
        if pairs > detector.n_max:
            raise TruncationError(
                "PNRD herald supports up to %d photons, got %d" % (detector.n_max, pairs)
            )

        noise = self.herald_noise_probability
        photons = np.arange(pairs + 1)
        arrive = _binomial_pmf(photons, pairs, self.herald_efficiency)
        single = 0.0
        for k, weight in zip(photons, arrive):
            levels = detector.level_distribution(int(k))
            single += weight * (levels[1] * (1.0 - noise) + levels[0] * noise)
        return single

    def with_mu(self, mu):
        return HspsChain(
            TmsvSource(mu),
            self.herald_efficiency,
            self.signal_efficiency,
            self.herald_noise,
            self.signal_noise,
            self.repetition_rate,
            self.herald_detector,
        )


def _binomial_pmf(k, n, p):
    k = np.asarray(k)
    comb = np.array([math.comb(n, int(x)) for x in k], dtype=float)
    return comb * p ** k * (1.0 - p) ** (n - k)


def noise_from_suppression(
    pump_photons_per_pulse,
    suppression_db=SHIELDING_SUPPRESSION_DB,
    detector_efficiency=1.0,
    dark_clicks=0.0,
):
    """Mean noise clicks per pulse left by a pump rejected by ``suppression_db``."""

    if pump_photons_per_pulse < 0:
        raise UnphysicalParameterError("pump_photons_per_pulse", pump_photons_per_pulse, "[0, inf)")
    if not 0.0 <= detector_efficiency <= 1.0:
        raise UnphysicalParameterError("detector_efficiency", detector_efficiency, "[0, 1]")

    leaked = pump_photons_per_pulse * 10.0 ** (-suppression_db / 10.0)
    return leaked * detector_efficiency + dark_clicks


def _herald_clicks(chain, photons, rng):
    noise = rng.random(photons.size) < chain.herald_noise_probability

    if chain.herald_detector is None:
        return (photons > 0) | noise

    detector = chain.herald_detector
    if photons.size and photons.max() > detector.n_max:
        raise TruncationError(
            "PNRD herald supports up to %d photons, got %d" % (detector.n_max, photons.max())
        )

    levels = np.zeros(photons.size, dtype=int)
    for k in np.unique(photons):
        if k == 0:
            continue
        where = photons == k
        distribution = detector.level_distribution(int(k))
        levels[where] = rng.choice(distribution.size, size=where.sum(), p=distribution)

    levels = np.minimum(levels + noise, detector.cell_count)
    return levels == 1


def _simulate_block(chain, size, rng):
    distribution = chain.source.distribution
    pairs = rng.choice(distribution.size, size=size, p=distribution)

    herald = _herald_clicks(chain, rng.binomial(pairs, chain.herald_efficiency), rng)

    signal_photons = rng.binomial(pairs, chain.signal_efficiency)
    a_photons = rng.binomial(signal_photons, 0.5)
    b_photons = signal_photons - a_photons
    p_noise = chain.signal_noise_probability
    a = (a_photons > 0) | (rng.random(size) < p_noise)
    b = (b_photons > 0) | (rng.random(size) < p_noise)
    signal = a | b

    h_a = herald & a
    h_b = herald & b

    return CountingResult(
        pulses=size,
        adjacent_pairs=size - 1,
        herald=int(herald.sum()),
        signal=int(signal.sum()),
        a=int(a.sum()),
        b=int(b.sum()),
        coincidences=int((herald & signal).sum()),
        accidentals=int((herald[:-1] & signal[1:]).sum()),
        h_a=int(h_a.sum()),
        h_b=int(h_b.sum()),
        h_ab=int((h_a & b).sum()),
    )


def simulate_hsps(chain, pulses, seed, block_size=BLOCK_PULSES):
    """
    Monte Carlo pulse train through ``chain``.

    Adjacent-pulse accidentals are counted inside blocks, so ``adjacent_pairs``
    is ``pulses`` minus the number of blocks.
    """

    if pulses < 1:
        raise UnphysicalParameterError("pulses", pulses, "[1, inf)")

    default_logger.debug("Simulating %d pulses, mu = %g" % (pulses, chain.mu))

    result = CountingResult.empty()
    for index, start in enumerate(range(0, pulses, block_size)):
        size = min(block_size, pulses - start)
        result = result.merge(_simulate_block(chain, size, make_rng(seed, index)))

    return result


def _ratio(numerator, denominator):
    if denominator == 0:
        return float("nan")
    return numerator / float(denominator)


def _binomial_fraction(successes, trials):
    if trials == 0:
        return Estimate(float("nan"), float("nan"))
    p = successes / float(trials)
    return Estimate(p, math.sqrt(p * (1.0 - p) / trials))


def _relative_error(*counts):
    if any(count == 0 for count in counts):
        return float("nan")
    return math.sqrt(sum(1.0 / count for count in counts))


def metrics(result, chain=None):
    """
    Derive CAR, Klyshko efficiencies and heralded g2(0) with counting errors.

    Two CAR conventions are reported: ``car_adjacent`` compares the
    coincidence rate with herald/signal clicks in adjacent pulses and
    ``car_singles`` with the product of singles rates. With no accidentals
    observed, ``car_adjacent`` assumes one and is flagged as a lower bound.
    The corrected Klyshko values subtract accidental coincidences and, when a
    chain is given, the expected noise heralds.
    """

    values = collections.OrderedDict()

    accidentals = result.accidentals
    lower_bound = accidentals == 0 and result.coincidences > 0
    if lower_bound:
        default_logger.warning("No accidentals observed; CAR is a lower bound")
        accidentals = 1

    coincidence_rate = _ratio(result.coincidences, result.pulses)
    accidental_rate = _ratio(accidentals, result.adjacent_pairs)
    car = _ratio(coincidence_rate, accidental_rate) if accidental_rate else float("nan")
    values["car_adjacent"] = Estimate(
        car, car * _relative_error(result.coincidences, accidentals), lower_bound
    )

    singles = _ratio(result.coincidences * float(result.pulses), result.herald * float(result.signal))
    values["car_singles"] = Estimate(
        singles, singles * _relative_error(result.coincidences, result.herald, result.signal)
    )

    values["klyshko_signal"] = _binomial_fraction(result.coincidences, result.herald)
    values["klyshko_herald"] = _binomial_fraction(result.coincidences, result.signal)

    background = result.accidentals * _ratio(result.pulses, result.adjacent_pairs)
    herald_noise = 0.0
    signal_noise = 0.0
    if chain is not None:
        herald_noise = result.pulses * chain.herald_noise_probability
        signal_noise = result.pulses * (1.0 - math.exp(-2.0 * chain.signal_noise))

    net = result.coincidences - background
    values["klyshko_signal_corrected"] = Estimate(
        _ratio(net, result.herald - herald_noise),
        values["klyshko_signal"].error,
    )
    values["klyshko_herald_corrected"] = Estimate(
        _ratio(net, result.signal - signal_noise),
        values["klyshko_herald"].error,
    )

    if result.h_a and result.h_b:
        g2 = result.herald * float(result.h_ab) / (result.h_a * float(result.h_b))
        if result.h_ab:
            error = g2 * _relative_error(result.herald, result.h_ab, result.h_a, result.h_b)
        else:
            # one-count scale for an empty three-fold
            error = result.herald / (result.h_a * float(result.h_b))
        values["g2_heralded"] = Estimate(g2, error)
    else:
        values["g2_heralded"] = Estimate(float("nan"), float("nan"))

    return values


def exact_rates(chain):
    """
    Exact per-pulse click probabilities, summed over the truncated pair distribution.

    Herald and signal arms are independent given the pair number, so every
    joint probability is a single sum over n.
    """

    distribution = chain.source.distribution
    pairs = np.arange(distribution.size)
    eta = chain.signal_efficiency
    quiet = math.exp(-chain.signal_noise)

    herald = np.array([chain.herald_probability(int(n)) for n in pairs])
    no_a = (1.0 - eta / 2.0) ** pairs * quiet
    no_ab = (1.0 - eta) ** pairs * quiet * quiet
    a = 1.0 - no_a
    ab = 1.0 - 2.0 * no_a + no_ab
    signal = 1.0 - no_ab

    p_h = float(np.dot(distribution, herald))
    p_s = float(np.dot(distribution, signal))
    p_hs = float(np.dot(distribution, herald * signal))
    p_ha = float(np.dot(distribution, herald * a))
    p_hab = float(np.dot(distribution, herald * ab))

    return ExactRates(
        herald=p_h,
        signal=p_s,
        coincidence=p_hs,
        h_a=p_ha,
        h_b=p_ha,
        h_ab=p_hab,
        car=_ratio(p_hs, p_h * p_s),
        klyshko_signal=_ratio(p_hs, p_h),
        klyshko_herald=_ratio(p_hs, p_s),
        g2_heralded=_ratio(p_h * p_hab, p_ha * p_ha),
    )


def analytic_small_mu(chain):
    """
    First-order closed forms for a weakly pumped source.

    CAR counts net coincidences, mu * eta_h * eta_s, against accidentals
    (mu * eta_h + n_h) * (mu * eta_s + 2 n_s) where the factor 2 covers both
    signal detectors. The heralded g2 keeps the leading multi-pair term and
    ignores signal-arm noise. Neglected terms are of relative order mu, which
    is returned as ``relative_error_bound``.
    """

    mu = chain.mu
    if mu > ANALYTIC_MU_LIMIT:
        raise CountingError(
            "mu = %g is outside the small-mu regime (<= %g); use simulate_hsps or exact_rates"
            % (mu, ANALYTIC_MU_LIMIT)
        )

    eta_h = chain.herald_efficiency
    eta_s = chain.signal_efficiency
    n_h = chain.herald_noise
    n_s = chain.signal_noise

    coincidence = mu * eta_h * eta_s
    herald = mu * eta_h + n_h
    accidental = herald * (mu * eta_s + 2.0 * n_s)
    real = mu * eta_h

    return collections.OrderedDict(
        [
            ("car", _ratio(coincidence, accidental)),
            ("klyshko", _ratio(coincidence, herald)),
            ("g2", _ratio(2.0 * mu * (2.0 - eta_h) * herald, real)),
            ("relative_error_bound", 2.0 * mu),
        ]
    )


def heralded_photon_distribution(chain):
    """Photon-number distribution of the signal mode, before signal loss, given a herald."""

    distribution = chain.source.distribution
    weights = distribution * np.array(
        [chain.herald_probability(int(n)) for n in range(distribution.size)]
    )
    total = weights.sum()

    if total <= 0:
        raise CountingError("Herald never fires for this chain")

    return weights / total
