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
Frequency-domain transfer matrices of integrated photonic components.

Every element is a 2x2 field matrix per frequency acting on two rails (port 0
and port 1). Couplers use the symmetric convention [[t, ik], [ik, t]] with
t = sqrt(1 - r) and k = sqrt(r). Frequencies are offsets in GHz.
"""

import collections
import csv
import math

import numpy as np

from photonbench.errors import DimensionError, GridError, UnphysicalParameterError
from photonbench.helpers import make_rng
from photonbench.logger import default_logger

__all__ = [
    "Band",
    "BandSpec",
    "ELEMENT_KINDS",
    "FilterDesign",
    "FilterNetwork",
    "FilterTargets",
    "LossBudget",
    "LossItem",
    "NetworkResponse",
    "REFERENCE_LOSSES",
    "SHIELDING_SUPPRESSION_DB",
    "TransferElement",
    "band_metrics",
    "default_bands",
    "evaluate",
    "export_spectrum_csv",
    "grade_filter",
    "loss_budget",
    "make_element",
    "mzi_extinction",
    "mzi_extinction_analytic",
    "optimize_filter",
    "reference_filter",
]

SPEED_OF_LIGHT = 299792458.0
EXTINCTION_CAP_DB = 120.0
POWER_FLOOR = 1e-30
PASSIVE_TOLERANCE = 1e-9
SHIELDING_SUPPRESSION_DB = 115.0

# dB per metre for waveguides, dB per component otherwise
REFERENCE_LOSSES = {
    "waveguide_sm": 1.58,
    "waveguide_mm": 0.39,
    "crossing": 0.0016,
    "splitter": 0.0005,
    "smf28_facet": 0.120,
    "uhna4_facet": 0.053,
    "bto_shifter": 0.106,
}

_DEFAULTS = {
    "coupler": {"r": 0.5},
    "crossing": {"loss_db": 0.0},
    "phase": {"phase": 0.0, "port": 0},
    "waveguide": {"length_m": 0.0, "loss_db_per_m": 0.0, "group_index": 2.0, "port": None},
    "amzi1": {
        "r1": 0.5,
        "r2": 0.5,
        "fsr_ghz": None,
        "delta_length_m": None,
        "group_index": 2.0,
        "phase": 0.0,
        "reference_ghz": 0.0,
    },
    "amzi3": {
        "r": (0.5, 0.5, 0.5, 0.5),
        "fsr_ghz": None,
        "delta_length_m": None,
        "group_index": 2.0,
        "phases": (0.0, 0.0, 0.0),
        "reference_ghz": 0.0,
    },
    "allpass_ring": {"k": 0.1, "a": 1.0, "fsr_ghz": 100.0, "resonance_ghz": 0.0, "port": 0},
    "adddrop_ring": {"k1": 0.1, "k2": 0.1, "a": 1.0, "fsr_ghz": 100.0, "resonance_ghz": 0.0},
    "eo_phase": {
        "voltage": 0.0,
        "length_m": 2e-3,
        "vpil_v_cm": 0.62,
        "loss_db_per_m": 53.0,
        "port": 0,
    },
}

ELEMENT_KINDS = tuple(sorted(_DEFAULTS))


def _coupler(r):
    t = math.sqrt(1.0 - r)
    k = 1j * math.sqrt(r)
    return np.array([[t, k], [k, t]], dtype=complex)


def _on_port(values, port):
    """Broadcast a per-frequency factor onto one rail (or both if port is None)."""

    matrices = np.zeros((values.size, 2, 2), dtype=complex)
    if port is None:
        matrices[:, 0, 0] = values
        matrices[:, 1, 1] = values
    else:
        matrices[:, port, port] = values
        matrices[:, 1 - port, 1 - port] = 1.0
    return matrices


def _constant(matrix, frequencies):
    return np.broadcast_to(matrix, (frequencies.size, 2, 2)).copy()


def _fsr(params):
    if params["fsr_ghz"] is not None:
        fsr = params["fsr_ghz"]
    elif params["delta_length_m"] is not None:
        fsr = SPEED_OF_LIGHT / (params["group_index"] * params["delta_length_m"]) * 1e-9
    else:
        raise UnphysicalParameterError("fsr_ghz", None, "fsr_ghz or delta_length_m")

    if fsr <= 0:
        raise UnphysicalParameterError("fsr_ghz", fsr, "(0, inf)")
    return fsr


def _delay(frequencies, fsr, reference, phase):
    return np.exp(1j * (2.0 * np.pi * (frequencies - reference) / fsr + phase))


def _amzi1(params, frequencies):
    first = _coupler(params["r1"])
    second = _coupler(params["r2"])
    arm = _on_port(_delay(frequencies, _fsr(params), params["reference_ghz"], params["phase"]), 0)
    return np.matmul(second, np.matmul(arm, first))


def _amzi3(params, frequencies):
    fsr = _fsr(params)
    couplers = [_coupler(r) for r in params["r"]]
    matrices = _constant(couplers[0], frequencies)
    for phase, coupler in zip(params["phases"], couplers[1:]):
        arm = _on_port(_delay(frequencies, fsr, params["reference_ghz"], phase), 0)
        matrices = np.matmul(coupler, np.matmul(arm, matrices))
    return matrices


def _round_trip(params, frequencies):
    return np.exp(1j * 2.0 * np.pi * (frequencies - params["resonance_ghz"]) / params["fsr_ghz"])


def _allpass_ring(params, frequencies):
    r = math.sqrt(1.0 - params["k"])
    a = params["a"]
    phase = _round_trip(params, frequencies)
    through = (r - a * phase) / (1.0 - r * a * phase)
    return _on_port(through, params["port"])


def _adddrop_ring(params, frequencies):
    k1, k2, a = params["k1"], params["k2"], params["a"]
    r1 = math.sqrt(1.0 - k1)
    r2 = math.sqrt(1.0 - k2)
    phase = _round_trip(params, frequencies)
    denominator = 1.0 - r1 * r2 * a * phase
    drop = -math.sqrt(k1 * k2 * a) * np.sqrt(phase) / denominator

    matrices = np.empty((frequencies.size, 2, 2), dtype=complex)
    matrices[:, 0, 0] = (r1 - r2 * a * phase) / denominator
    matrices[:, 1, 1] = (r2 - r1 * a * phase) / denominator
    matrices[:, 0, 1] = drop
    matrices[:, 1, 0] = drop
    return matrices


def _waveguide(params, frequencies):
    amplitude = 10.0 ** (-params["loss_db_per_m"] * params["length_m"] / 20.0)
    delay = 2.0 * np.pi * params["group_index"] * params["length_m"] * frequencies * 1e9 / SPEED_OF_LIGHT
    return _on_port(amplitude * np.exp(1j * delay), params["port"])


def _eo_phase(params, frequencies):
    length_cm = params["length_m"] * 100.0
    phase = math.pi * params["voltage"] * length_cm / params["vpil_v_cm"]
    amplitude = 10.0 ** (-params["loss_db_per_m"] * params["length_m"] / 20.0)
    return _on_port(np.full(frequencies.size, amplitude * np.exp(1j * phase)), params["port"])


def _crossing(params, frequencies):
    amplitude = 10.0 ** (-params["loss_db"] / 20.0)
    return _constant(np.array([[0, amplitude], [amplitude, 0]], dtype=complex), frequencies)


def _phase(params, frequencies):
    return _on_port(np.full(frequencies.size, np.exp(1j * params["phase"])), params["port"])


def _coupler_element(params, frequencies):
    return _constant(_coupler(params["r"]), frequencies)


_EVALUATORS = {
    "coupler": _coupler_element,
    "crossing": _crossing,
    "phase": _phase,
    "waveguide": _waveguide,
    "amzi1": _amzi1,
    "amzi3": _amzi3,
    "allpass_ring": _allpass_ring,
    "adddrop_ring": _adddrop_ring,
    "eo_phase": _eo_phase,
}

_FOUR_PORT = ("coupler", "crossing", "amzi1", "amzi3", "adddrop_ring")


def _check_fraction(name, value):
    if not 0.0 <= value <= 1.0:
        raise UnphysicalParameterError(name, value, "[0, 1]")


def _validate(kind, params):
    for name in ("r", "r1", "r2", "k", "k1", "k2", "a"):
        if name in params:
            values = params[name] if name == "r" and kind == "amzi3" else (params[name],)
            for value in values:
                _check_fraction(name, value)

    if kind == "amzi3" and (len(params["r"]) != 4 or len(params["phases"]) != 3):
        raise UnphysicalParameterError("r", list(params["r"]), "4 couplers and 3 phases")

    for name in ("length_m", "delta_length_m", "loss_db", "loss_db_per_m"):
        if params.get(name) is not None and params[name] < 0:
            raise UnphysicalParameterError(name, params[name], "[0, inf)")

    if kind in ("allpass_ring", "adddrop_ring") and params["fsr_ghz"] <= 0:
        raise UnphysicalParameterError("fsr_ghz", params["fsr_ghz"], "(0, inf)")
    if kind == "eo_phase" and params["vpil_v_cm"] <= 0:
        raise UnphysicalParameterError("vpil_v_cm", params["vpil_v_cm"], "(0, inf)")
    if params.get("port", 0) not in (0, 1, None):
        raise UnphysicalParameterError("port", params["port"], "0, 1 or None")

    if kind in ("amzi1", "amzi3"):
        _fsr(params)


class TransferElement(object):
    def __init__(self, kind, params):
        self.kind = kind
        self.params = params
        self._evaluator = _EVALUATORS[kind]

    @property
    def port_count(self):
        return 4 if self.kind in _FOUR_PORT else 2

    @property
    def lossless(self):
        p = self.params
        if self.kind in ("allpass_ring", "adddrop_ring"):
            return p["a"] == 1.0
        if self.kind == "crossing":
            return p["loss_db"] == 0.0
        if self.kind in ("waveguide", "eo_phase"):
            return p["loss_db_per_m"] == 0.0 or p["length_m"] == 0.0
        return True

    def evaluate(self, frequencies):
        return self._evaluator(self.params, np.atleast_1d(np.asarray(frequencies, dtype=float)))

    def with_params(self, **changes):
        params = dict(self.params)
        params.update(changes)
        return make_element(self.kind, params)

    def __repr__(self):
        return "TransferElement(%r, %r)" % (self.kind, self.params)


def make_element(kind, params=None, **kwargs):
    if kind not in _DEFAULTS:
        raise UnphysicalParameterError("kind", kind, "one of %s" % ", ".join(ELEMENT_KINDS))

    given = dict(params or {})
    given.update(kwargs)
    unknown = set(given) - set(_DEFAULTS[kind])
    if unknown:
        raise UnphysicalParameterError(
            "params", sorted(unknown), "keys of %s: %s" % (kind, ", ".join(sorted(_DEFAULTS[kind])))
        )

    merged = dict(_DEFAULTS[kind])
    merged.update(given)
    if kind == "amzi3":
        merged["r"] = tuple(merged["r"])
        merged["phases"] = tuple(merged["phases"])

    _validate(kind, merged)
    return TransferElement(kind, merged)


Stage = collections.namedtuple("Stage", ["element", "route"])


class FilterNetwork(object):
    """
    Ordered cascade of elements on two rails.

    A routed stage ``(element, (in_port, out_port))`` keeps only the path from
    ``in_port`` to ``out_port``; light leaving through its other port is dumped.
    """

    def __init__(self, stages=(), port_names=("through", "drop")):
        if len(port_names) != 2 or len(set(port_names)) != 2:
            raise DimensionError("A filter network has two distinct port names")

        self.port_names = tuple(port_names)
        self.stages = []
        for stage in stages:
            if isinstance(stage, TransferElement):
                self.add(stage)
            else:
                self.add(*stage)

    def add(self, element, route=None):
        if route is not None:
            route = tuple(route)
            if len(route) != 2 or any(port not in (0, 1) for port in route):
                raise DimensionError("Route %r must name an input and output port 0/1" % (route,))

            previous = self._last_route()
            if previous is not None and previous[1] != route[0]:
                raise DimensionError(
                    "Dangling port: stage %d feeds port %d but the next stage reads port %d"
                    % (len(self.stages) - 1, previous[1], route[0])
                )

        self.stages.append(Stage(element, route))
        return self

    def _last_route(self):
        if self.stages:
            return self.stages[-1].route
        return None

    def port(self, name_or_index):
        if name_or_index in (0, 1):
            return name_or_index
        try:
            return self.port_names.index(name_or_index)
        except ValueError:
            raise DimensionError("Unknown port %r; ports are %s" % (name_or_index, self.port_names))

    @property
    def lossless(self):
        return all(stage.route is None and stage.element.lossless for stage in self.stages)

    def elements(self):
        return [stage.element for stage in self.stages]

    def replaced(self, index, element):
        stages = list(self.stages)
        stages[index] = Stage(element, stages[index].route)
        return FilterNetwork(stages, self.port_names)

    def __len__(self):
        return len(self.stages)

    def __repr__(self):
        return "FilterNetwork(%s)" % ", ".join(stage.element.kind for stage in self.stages)


class NetworkResponse(object):
    def __init__(self, frequencies, matrices, port_names=("through", "drop")):
        self.frequencies = frequencies
        self.matrices = matrices
        self.port_names = port_names

    def _port(self, port):
        if port in (0, 1):
            return port
        return self.port_names.index(port)

    def amplitude(self, output_port, input_port=0):
        return self.matrices[:, self._port(output_port), self._port(input_port)]

    def transmission(self, output_port, input_port=0):
        return np.abs(self.amplitude(output_port, input_port)) ** 2

    def is_passive(self, tolerance=PASSIVE_TOLERANCE):
        singular = np.linalg.svd(self.matrices, compute_uv=False)
        return bool(singular.max() <= 1.0 + tolerance)


def _frequencies_of(grid):
    offsets = getattr(grid, "offsets_ghz", None)
    if offsets is not None:
        return offsets
    return np.atleast_1d(np.asarray(grid, dtype=float))


def _stage_matrices(stage, frequencies):
    matrices = stage.element.evaluate(frequencies)
    if stage.route is None:
        return matrices
    source, target = stage.route
    routed = np.zeros_like(matrices)
    routed[:, target, source] = matrices[:, target, source]
    return routed


def evaluate(network, grid):
    """
    Port matrices of the whole cascade; ``grid`` is a FrequencyGrid or an array
    of frequency offsets in GHz.
    """

    frequencies = _frequencies_of(grid)
    total = np.broadcast_to(np.eye(2, dtype=complex), (frequencies.size, 2, 2)).copy()
    for stage in network.stages:
        total = np.matmul(_stage_matrices(stage, frequencies), total)

    return NetworkResponse(frequencies, total, network.port_names)


Band = collections.namedtuple("Band", ["name", "center_ghz", "width_ghz", "kind", "output_port"])
Band.__new__.__defaults__ = ("pass", 0)

BandMetric = collections.namedtuple(
    "BandMetric", ["kind", "rejection_db", "insertion_loss_db", "min_transmission", "max_transmission"]
)


class BandSpec(object):
    def __init__(self, bands):
        self.bands = [band if isinstance(band, Band) else Band(*band) for band in bands]

        for band in self.bands:
            if band.kind not in ("pass", "stop"):
                raise UnphysicalParameterError("kind", band.kind, "'pass' or 'stop'")
            if band.width_ghz < 0:
                raise UnphysicalParameterError("width_ghz", band.width_ghz, "[0, inf)")

        ordered = sorted(self.bands, key=lambda band: band.center_ghz)
        for low, high in zip(ordered, ordered[1:]):
            if low.center_ghz + low.width_ghz / 2.0 >= high.center_ghz - high.width_ghz / 2.0:
                raise GridError("Bands %r and %r overlap" % (low.name, high.name))

    def __iter__(self):
        return iter(self.bands)

    def __getitem__(self, name):
        for band in self.bands:
            if band.name == name:
                return band
        raise KeyError(name)

    def sample_frequencies(self, points_per_band=41):
        return np.concatenate(
            [
                np.linspace(
                    band.center_ghz - band.width_ghz / 2.0,
                    band.center_ghz + band.width_ghz / 2.0,
                    points_per_band,
                )
                for band in self.bands
            ]
        )


def default_bands(separation_ghz=400.0, pump_width_ghz=10.0, photon_width_ghz=5.0):
    """Pump at zero offset with the signal and herald one separation either side."""

    return BandSpec(
        [
            Band("herald", -separation_ghz, photon_width_ghz, "pass", 0),
            Band("pump", 0.0, pump_width_ghz, "stop", 0),
            Band("signal", separation_ghz, photon_width_ghz, "pass", 0),
        ]
    )


def _to_db(power):
    return -10.0 * math.log10(max(power, POWER_FLOOR))


def band_metrics(network, bands, grid, input_port=0):
    """
    Rejection is -10 log10 of the worst (largest) in-band transmission and
    insertion loss -10 log10 of the mean in-band transmission.
    """

    response = evaluate(network, grid)
    frequencies = response.frequencies
    metrics = collections.OrderedDict()

    for band in bands:
        inside = np.abs(frequencies - band.center_ghz) <= band.width_ghz / 2.0 + 1e-9
        if not inside.any():
            raise GridError("No grid frequency falls inside band %r" % band.name)

        power = response.transmission(band.output_port, input_port)[inside]
        metrics[band.name] = BandMetric(
            kind=band.kind,
            rejection_db=_to_db(float(power.max())),
            insertion_loss_db=_to_db(float(power.mean())),
            min_transmission=float(power.min()),
            max_transmission=float(power.max()),
        )

    return metrics


def mzi_extinction_analytic(delta_r):
    """Fringe extinction of a balanced MZI whose couplers sit at 0.5 + delta_r."""

    if delta_r == 0:
        return EXTINCTION_CAP_DB
    return min(-10.0 * math.log10(4.0 * delta_r ** 2), EXTINCTION_CAP_DB)


def mzi_extinction(delta_r, phases=None):
    """
    Sweep the arm phase of an MZI built from two couplers at r = 0.5 + delta_r and
    return 10 log10(max / min) of the bar-port fringe, capped at 120 dB.
    """

    if not 0.0 <= abs(delta_r) < 0.5:
        raise UnphysicalParameterError("delta_r", delta_r, "[0, 0.5)")

    if phases is None:
        phases = np.linspace(-np.pi, np.pi, 2001)
    phases = np.asarray(phases, dtype=float)

    coupler = _coupler(0.5 + delta_r)
    arm = _on_port(np.exp(1j * phases), 0)
    fringe = np.abs(np.matmul(coupler, np.matmul(arm, coupler))[:, 0, 0]) ** 2

    low = fringe.min()
    if low <= 0.0:
        return EXTINCTION_CAP_DB
    return min(10.0 * math.log10(fringe.max() / low), EXTINCTION_CAP_DB)


FilterTargets = collections.namedtuple("FilterTargets", ["rejection_db", "insertion_loss_db"])
FilterTargets.__new__.__defaults__ = (99.0, 1.5)

FilterDesign = collections.namedtuple(
    "FilterDesign", ["network", "metrics", "target_met", "score", "restart"]
)

Coordinate = collections.namedtuple("Coordinate", ["stage", "name", "item", "lower", "upper", "step"])


def _output_port(network):
    for stage in reversed(network.stages):
        if stage.route is not None:
            return stage.route[1]
    return 0


def reference_filter(separation_ghz=400.0, topology=(2, 2, 2), ring_coupling=0.05, ring_loss=0.999):
    """
    Analytic starting point: first- and third-order AMZIs with their nulls on
    the pump and add-drop rings resonant with the signal and herald. All stages
    are routed; the rings hand the light between rails in turn.
    """

    first_order, third_order, rings = topology
    period = 2.0 * separation_ghz
    network = FilterNetwork()

    for _ in range(first_order):
        network.add(make_element("amzi1", fsr_ghz=period), (0, 0))
    for _ in range(third_order):
        # inner couplers open so the lattice starts as a single long-delay AMZI
        network.add(make_element("amzi3", r=(0.5, 0.0, 0.0, 0.5), fsr_ghz=3.0 * period), (0, 0))

    port = 0
    for _ in range(rings):
        element = make_element(
            "adddrop_ring",
            k1=ring_coupling,
            k2=ring_coupling,
            a=ring_loss,
            fsr_ghz=period,
            resonance_ghz=separation_ghz,
        )
        network.add(element, (port, 1 - port))
        port = 1 - port

    return network


def _coordinates(network, separation_ghz):
    period = 2.0 * separation_ghz
    coordinates = []
    for index, element in enumerate(network.elements()):
        if element.kind == "amzi1":
            coordinates += [
                Coordinate(index, "r1", None, 0.3, 0.7, 0.02),
                Coordinate(index, "r2", None, 0.3, 0.7, 0.02),
                Coordinate(index, "fsr_ghz", None, 0.9 * period, 1.1 * period, 0.005 * period),
                Coordinate(index, "phase", None, -0.5, 0.5, 0.05),
            ]
        elif element.kind == "amzi3":
            coordinates += [Coordinate(index, "r", i, 0.0, 1.0, 0.05) for i in range(4)]
            coordinates += [
                Coordinate(index, "fsr_ghz", None, 2.7 * period, 3.3 * period, 0.005 * period)
            ]
            coordinates += [Coordinate(index, "phases", i, -np.pi, np.pi, 0.1) for i in range(3)]
        elif element.kind == "adddrop_ring":
            coordinates += [
                Coordinate(index, "k1", None, 0.01, 0.3, 0.01),
                Coordinate(index, "k2", None, 0.01, 0.3, 0.01),
                Coordinate(index, "fsr_ghz", None, 0.9 * period, 1.1 * period, 0.002 * period),
                Coordinate(index, "resonance_ghz", None, separation_ghz - 20.0, separation_ghz + 20.0, 1.0),
            ]
    return coordinates


def _read(network, coordinate):
    value = network.stages[coordinate.stage].element.params[coordinate.name]
    return value if coordinate.item is None else value[coordinate.item]


def _write(network, coordinate, value):
    element = network.stages[coordinate.stage].element
    value = float(np.clip(value, coordinate.lower, coordinate.upper))
    if coordinate.item is not None:
        items = list(element.params[coordinate.name])
        items[coordinate.item] = value
        value = tuple(items)
    return network.replaced(coordinate.stage, element.with_params(**{coordinate.name: value}))


def _score(network, bands, frequencies, targets):
    output = _output_port(network)
    routed = BandSpec([band._replace(output_port=output) for band in bands])
    metrics = band_metrics(network, routed, frequencies)

    rejection = min(m.rejection_db for m in metrics.values() if m.kind == "stop")
    loss = max(m.insertion_loss_db for m in metrics.values() if m.kind == "pass")
    score = min(rejection - targets.rejection_db, 20.0 * (targets.insertion_loss_db - loss))
    return score, metrics


def grade_filter(network, bands=None, targets=FilterTargets(), separation_ghz=400.0):
    """Score a given network against the band targets without tuning it."""

    bands = default_bands(separation_ghz) if bands is None else bands
    score, metrics = _score(network, bands, bands.sample_frequencies(), targets)
    return FilterDesign(network, metrics, score >= 0.0, score, None)


def optimize_filter(
    bands=None,
    seed=0,
    topology=(2, 2, 2),
    targets=FilterTargets(),
    separation_ghz=400.0,
    restarts=4,
    rounds=8,
):
    """
    Coordinate descent over the FSRs, coupling ratios and phases of a fixed
    topology, starting from ``reference_filter``. Restart 0 starts from the
    analytic point and later restarts from perturbations of it drawn from
    ``(seed, restart)``. The score is the smaller of the rejection margin and
    twenty times the insertion-loss margin.
    """

    bands = default_bands(separation_ghz) if bands is None else bands
    if not any(band.kind == "stop" for band in bands) or not any(band.kind == "pass" for band in bands):
        raise UnphysicalParameterError("bands", [band.name for band in bands], "a stop and a pass band")

    frequencies = bands.sample_frequencies()
    start = reference_filter(separation_ghz, topology)
    coordinates = _coordinates(start, separation_ghz)

    best = None
    for restart in range(restarts):
        network = start
        if restart:
            rng = make_rng(seed, "filter", restart)
            for coordinate in coordinates:
                jitter = rng.uniform(-2.0, 2.0) * coordinate.step
                network = _write(network, coordinate, _read(network, coordinate) + jitter)

        score, metrics = _score(network, bands, frequencies, targets)
        steps = [coordinate.step for coordinate in coordinates]

        for _ in range(rounds):
            improved = False
            for i, coordinate in enumerate(coordinates):
                for direction in (1.0, -1.0):
                    trial = _write(network, coordinate, _read(network, coordinate) + direction * steps[i])
                    trial_score, trial_metrics = _score(trial, bands, frequencies, targets)
                    if trial_score > score:
                        network, score, metrics, improved = trial, trial_score, trial_metrics, True
                        break
            if not improved:
                steps = [step / 2.0 for step in steps]

        default_logger.debug("Filter restart %d: score %.3f" % (restart, score))
        if best is None or score > best.score:
            best = FilterDesign(network, metrics, score >= 0.0, score, restart)

    if best.target_met:
        default_logger.info("Filter design meets targets (score %.2f)" % best.score)
    else:
        default_logger.warning("Filter design target unmet (score %.2f)" % best.score)

    return best


LossItem = collections.namedtuple("LossItem", ["kind", "count", "unit_loss_db"])
LossItem.__new__.__defaults__ = (1, None)

LossBudget = collections.namedtuple("LossBudget", ["items", "item_losses_db", "total_db"])


def _loss_item(item):
    if isinstance(item, LossItem):
        return item
    if isinstance(item, dict):
        return LossItem(**item)
    return LossItem(*item)


def loss_budget(items):
    """
    Itemized loss in dB. ``count`` is a length in metres for waveguide kinds and
    a number of components otherwise; a missing unit loss is looked up in
    REFERENCE_LOSSES.
    """

    items = [_loss_item(item) for item in items]
    if not items:
        raise UnphysicalParameterError("items", [], "at least one loss item")

    resolved = []
    for item in items:
        unit = item.unit_loss_db
        if unit is None:
            if item.kind not in REFERENCE_LOSSES:
                raise UnphysicalParameterError(
                    "kind", item.kind, "one of %s or an explicit unit loss" % ", ".join(sorted(REFERENCE_LOSSES))
                )
            unit = REFERENCE_LOSSES[item.kind]
        if unit < 0:
            raise UnphysicalParameterError("unit_loss_db", unit, "[0, inf)")
        if item.count < 0:
            raise UnphysicalParameterError("count", item.count, "[0, inf)")
        resolved.append(LossItem(item.kind, item.count, float(unit)))

    losses = [item.count * item.unit_loss_db for item in resolved]
    return LossBudget(resolved, losses, math.fsum(losses))


def export_spectrum_csv(response, path):
    header = ["frequency_ghz"]
    columns = []
    for out in range(2):
        for source in range(2):
            label = "%s_from_%s" % (response.port_names[out], response.port_names[source])
            header += [label + "_real", label + "_imag"]
            columns.append(response.matrices[:, out, source])

    with open(path, "w") as target:
        writer = csv.writer(target)
        writer.writerow(header)
        for row, frequency in enumerate(response.frequencies):
            values = [repr(float(frequency))]
            for column in columns:
                values += [repr(float(column[row].real)), repr(float(column[row].imag))]
            writer.writerow(values)
