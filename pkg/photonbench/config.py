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
Experiment configuration: a JSON document with an explicit schema version,
one named section per experiment and an optional output block. Every key is
checked against the section schema before anything runs.
"""

import collections
import copy
import json
import os

import six
from looseversion import LooseVersion

from photonbench import components
from photonbench.errors import (
    ConfigRangeError,
    ConfigSchemaError,
    UnknownKeyError,
    UnphysicalParameterError,
)
from photonbench.fock import DEFAULT_N_MAX
from photonbench.helpers import config_hash, decode_utf8

__all__ = [
    "ExperimentConfig",
    "SCHEMA_VERSION",
    "SECTIONS",
    "load_config",
    "parse_config",
    "reference_config",
]

SCHEMA_VERSION = "1.0"
MIN_SCHEMA_VERSION = LooseVersion("1.0")
MAX_SCHEMA_VERSION = LooseVersion("2.0")
MODES = ("exact", "sampled")
FORMATS = ("csv", "json", "table")
CONFIG_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data", "configs")

Field = collections.namedtuple(
    "Field", ["kind", "default", "minimum", "maximum", "open_minimum", "choices", "nullable"]
)


def _field(kind, default=None, minimum=None, maximum=None, open_minimum=False, choices=None, nullable=False):
    return Field(kind, default, minimum, maximum, open_minimum, choices, nullable)


def _probability(default=1.0):
    return _field("float", default, 0.0, 1.0)


def _non_negative(default=0.0):
    return _field("float", default, 0.0)


def _positive(default):
    return _field("float", default, 0.0, open_minimum=True)


def _count(default, minimum=1, maximum=None):
    return _field("int", default, minimum, maximum)


NOISE_FIELDS = {
    "phase_error_std": _non_negative(),
    "transmission": _probability(),
    "detector_efficiency": _probability(),
    "noise_clicks": _non_negative(),
    "mu": _non_negative(),
    "herald_efficiency": _probability(),
    "herald_noise": _non_negative(),
    "draws": _count(200),
    "max_photons": _count(DEFAULT_N_MAX, 1, DEFAULT_N_MAX),
}

SHOT_FIELDS = {
    "shots": _count(100000),
    "resamples": _count(20),
}

SPECTRAL_FIELDS = {
    "linewidth_ghz": _positive(1.0),
    "span_linewidths": _field("float", 40.0, 6.0),
    "points": _count(256, 64),
    "cascade_size": _count(24),
    "restarts": _count(16),
    "rounds": _count(20),
}

SOURCE_DESIGNS = ("single_ring", "mzi", "cascade")


def _merge(*parts, **extra):
    merged = {}
    for part in parts:
        merged.update(part)
    merged.update(extra)
    return merged


SECTIONS = {
    "spam": _merge(NOISE_FIELDS, SHOT_FIELDS),
    "spam_bright": _merge(
        SHOT_FIELDS,
        phase_error_std=_non_negative(),
        transmission=_probability(),
        detector_efficiency=_probability(),
        draws=_count(200),
    ),
    "chip_to_chip": _merge(
        NOISE_FIELDS,
        SHOT_FIELDS,
        epsilon=_non_negative(),
        depolarization=_probability(0.0),
        channel_transmission=_field("float", 1.0, 0.0, 1.0, open_minimum=True),
    ),
    "hom": _merge(
        NOISE_FIELDS,
        SPECTRAL_FIELDS,
        shots=_count(100000),
        indistinguishability=_field("float", None, 0.0, 1.0, nullable=True),
        source=_field("str", None, choices=SOURCE_DESIGNS, nullable=True),
        delays_ps=_field("floats", [0.0]),
        points=_count(128, 64),
    ),
    "fusion": _merge(NOISE_FIELDS, SHOT_FIELDS, indistinguishability=_probability()),
    "hsps": {
        "mu": _non_negative(0.0018),
        "herald_efficiency": _probability(),
        "signal_efficiency": _probability(),
        "herald_noise": _non_negative(),
        "signal_noise": _non_negative(),
        "pump_photons_per_pulse": _field("float", None, 0.0, nullable=True),
        "suppression_db": _non_negative(components.SHIELDING_SUPPRESSION_DB),
        "pulses": _count(1000000),
        "repetition_rate": _positive(125e6),
        "herald_detector": _field("str", "threshold", choices=("threshold", "pnrd")),
        "pnrd_cells": _count(4),
    },
    "source_purity": _merge(
        SPECTRAL_FIELDS,
        design=_field("str", "single_ring", choices=SOURCE_DESIGNS),
        pump_bandwidth_ghz=_field("float", None, 0.0, open_minimum=True, nullable=True),
        target=_probability(0.99),
    ),
    "detuning": _merge(
        SPECTRAL_FIELDS,
        max_shift_linewidths=_positive(3.0),
        steps=_count(41, 3),
    ),
    "filter": {
        "separation_ghz": _positive(400.0),
        "pump_width_ghz": _positive(10.0),
        "photon_width_ghz": _positive(5.0),
        "rejection_db": _non_negative(99.0),
        "insertion_loss_db": _non_negative(1.5),
        "topology": _field("ints", [2, 2, 2]),
        "restarts": _count(4),
        "rounds": _count(8),
        "optimize": _field("bool", True),
        "network": _field("elements", None, nullable=True),
    },
    "pnrd": {
        "cells": _count(4),
        "total_efficiency": _probability(),
        "profile": _field("str", "equal", choices=("equal", "exponential")),
        "decay": _non_negative(0.15),
        "dark_rate": _non_negative(),
        "gate_window": _positive(1e-9),
        "photons": _count(2, 0, 4),
    },
    "extinction": {
        "delta_r": _field("float", 0.001, 0.0, 0.5),
    },
    "loss_budget": {
        "items": _field("losses", None),
    },
}

# sections without a usable default for these keys
REQUIRED = {"loss_budget": ("items",)}

TOP_LEVEL = ("schema_version", "suite", "mode", "seed", "experiments", "output")
OUTPUT_KEYS = ("path", "format")


def _line_of(text, path):
    """Best-effort line number of a dotted key path in the source text."""

    if text is None:
        return None
    position = -1
    for part in path.split("."):
        found = text.find('"%s"' % part, max(position, 0))
        if found < 0:
            break
        position = found
    if position < 0:
        return None
    return text.count("\n", 0, position) + 1


class _Validator(object):
    def __init__(self, text):
        self.text = text

    def schema_error(self, message, path):
        return ConfigSchemaError(message, field=path, line=_line_of(self.text, path))

    def range_error(self, message, path):
        return ConfigRangeError(message, field=path, line=_line_of(self.text, path))

    def unknown(self, keys, path):
        first = sorted(keys)[0]
        return UnknownKeyError(
            keys, field=path, line=_line_of(self.text, "%s.%s" % (path, first) if path else first)
        )

    def mapping(self, value, path):
        if not isinstance(value, dict):
            raise self.schema_error("Expected an object", path)
        return value

    def number(self, value, path, integer=False):
        if isinstance(value, bool) or not isinstance(value, six.integer_types + (float,)):
            raise self.schema_error("Expected a number", path)
        if integer:
            if isinstance(value, float):
                if not value.is_integer():
                    raise self.schema_error("Expected an integer", path)
                value = int(value)
            return value
        return float(value)

    def check_range(self, field, value, path):
        if field.minimum is not None:
            if value < field.minimum or (field.open_minimum and value == field.minimum):
                bracket = "(" if field.open_minimum else "["
                upper = field.maximum if field.maximum is not None else "inf"
                raise self.range_error(
                    "Value %r is outside %s%s, %s]" % (value, bracket, field.minimum, upper), path
                )
        if field.maximum is not None and value > field.maximum:
            raise self.range_error(
                "Value %r is outside [%s, %s]" % (value, field.minimum, field.maximum), path
            )

    def value(self, field, value, path):
        if value is None:
            if field.nullable:
                return None
            raise self.schema_error("Value must not be null", path)

        kind = field.kind
        if kind in ("float", "int"):
            value = self.number(value, path, integer=kind == "int")
            self.check_range(field, value, path)
        elif kind == "str":
            if not isinstance(value, six.string_types):
                raise self.schema_error("Expected a string", path)
            if field.choices and value not in field.choices:
                raise self.range_error(
                    "Value %r is not one of %s" % (value, ", ".join(field.choices)), path
                )
        elif kind == "bool":
            if not isinstance(value, bool):
                raise self.schema_error("Expected true or false", path)
        elif kind in ("floats", "ints"):
            if not isinstance(value, list) or not value:
                raise self.schema_error("Expected a non-empty list", path)
            value = [
                self.number(item, "%s.%d" % (path, i), integer=kind == "ints")
                for i, item in enumerate(value)
            ]
            if kind == "ints" and any(item < 0 for item in value):
                raise self.range_error("List entries must be non-negative", path)
        elif kind == "elements":
            value = self.elements(value, path)
        elif kind == "losses":
            value = self.losses(value, path)
        return value

    def elements(self, value, path):
        if not isinstance(value, list) or not value:
            raise self.schema_error("Expected a non-empty list of elements", path)
        stages = []
        for i, item in enumerate(value):
            where = "%s.%d" % (path, i)
            item = self.mapping(item, where)
            unknown = set(item) - {"kind", "params", "route"}
            if unknown:
                raise self.unknown(unknown, where)
            if "kind" not in item:
                raise self.schema_error("Element without a kind", where)
            params = self.mapping(item.get("params", {}), where + ".params")
            try:
                components.make_element(item["kind"], params)
            except UnphysicalParameterError as ex:
                raise self.range_error(str(ex), where)
            route = item.get("route")
            if route is not None:
                if (
                    not isinstance(route, list)
                    or len(route) != 2
                    or any(port not in (0, 1) or isinstance(port, bool) for port in route)
                ):
                    raise self.range_error("A route is a pair of ports 0 or 1", where + ".route")
            stages.append(
                collections.OrderedDict(
                    [("kind", item["kind"]), ("params", params), ("route", route)]
                )
            )
        return stages

    def losses(self, value, path):
        if not isinstance(value, list) or not value:
            raise self.schema_error("Expected a non-empty list of loss items", path)
        items = []
        for i, item in enumerate(value):
            where = "%s.%d" % (path, i)
            item = self.mapping(item, where)
            unknown = set(item) - set(components.LossItem._fields)
            if unknown:
                raise self.unknown(unknown, where)
            kind = item.get("kind")
            if not isinstance(kind, six.string_types):
                raise self.schema_error("Loss item without a kind", where)
            count = self.number(item.get("count", 1), where + ".count")
            unit = item.get("unit_loss_db")
            if unit is None and kind not in components.REFERENCE_LOSSES:
                raise self.range_error(
                    "Unknown loss kind %r without unit_loss_db" % kind, where + ".kind"
                )
            if unit is not None:
                unit = self.number(unit, where + ".unit_loss_db")
            if count < 0 or (unit is not None and unit < 0):
                raise self.range_error("Losses and counts are non-negative", where)
            items.append(
                collections.OrderedDict([("kind", kind), ("count", count), ("unit_loss_db", unit)])
            )
        return items

    def section(self, name, body):
        path = "experiments.%s" % name
        schema = SECTIONS[name]
        body = self.mapping(body, path)

        unknown = set(body) - set(schema)
        if unknown:
            raise self.unknown(unknown, path)
        for key in REQUIRED.get(name, ()):
            if key not in body:
                raise self.schema_error("Missing required key '%s'" % key, "%s.%s" % (path, key))

        resolved = collections.OrderedDict()
        for key in sorted(schema):
            field = schema[key]
            if key in body:
                resolved[key] = self.value(field, body[key], "%s.%s" % (path, key))
            else:
                resolved[key] = copy.deepcopy(field.default)
        return resolved


class ExperimentConfig(object):
    """
    A validated experiment configuration. Sections hold every key of their
    schema with defaults filled in, so two configs that run the same
    experiments share a hash.
    """

    def __init__(self, suite, experiments, mode="exact", seed=0, output=None, schema_version=SCHEMA_VERSION):
        self.suite = suite
        self.experiments = experiments
        self.mode = mode
        self.seed = seed
        self.output = output or {}
        self.schema_version = schema_version

    def to_dict(self):
        return collections.OrderedDict(
            [
                ("schema_version", self.schema_version),
                ("suite", self.suite),
                ("mode", self.mode),
                ("seed", self.seed),
                ("experiments", self.experiments),
                ("output", self.output),
            ]
        )

    @property
    def config_hash(self):
        """Hash of everything that determines the results; output paths excluded."""

        data = self.to_dict()
        del data["output"]
        return config_hash(data)

    def with_seed(self, seed):
        return self.replaced("seed", seed)

    def replaced(self, dotted, value):
        """
        Copy with one value changed and revalidated, e.g.
        ``replaced("experiments.hsps.mu", 0.01)``.
        """

        data = copy.deepcopy(self.to_dict())
        target = data
        parts = dotted.split(".")
        for part in parts[:-1]:
            if not isinstance(target, dict) or part not in target:
                raise ConfigSchemaError("No such section", field=dotted)
            target = target[part]
        if not isinstance(target, dict):
            raise ConfigSchemaError("No such section", field=dotted)
        target[parts[-1]] = value
        return _validate(data, None)

    def __repr__(self):
        return "ExperimentConfig(%r, %s)" % (self.suite, ", ".join(self.experiments))


def _validate(data, text):
    check = _Validator(text)
    check.mapping(data, "")

    unknown = set(data) - set(TOP_LEVEL)
    if unknown:
        raise check.unknown(unknown, None)

    for key in ("schema_version", "experiments"):
        if key not in data:
            raise check.schema_error("Missing required key '%s'" % key, key)

    version = data["schema_version"]
    if not isinstance(version, six.string_types):
        raise check.schema_error("Expected a version string", "schema_version")
    if not MIN_SCHEMA_VERSION <= LooseVersion(version) < MAX_SCHEMA_VERSION:
        raise check.range_error(
            "Unsupported schema version %s (supported %s up to %s)"
            % (version, MIN_SCHEMA_VERSION, MAX_SCHEMA_VERSION),
            "schema_version",
        )

    suite = data.get("suite", "custom")
    if not isinstance(suite, six.string_types) or not suite:
        raise check.schema_error("Expected a suite name", "suite")

    mode = check.value(_field("str", choices=MODES), data.get("mode", "exact"), "mode")
    seed = check.value(_field("int", minimum=0), data.get("seed", 0), "seed")

    experiments = check.mapping(data["experiments"], "experiments")
    unknown = set(experiments) - set(SECTIONS)
    if unknown:
        raise check.unknown(unknown, "experiments")
    if not experiments:
        raise check.schema_error("At least one experiment is required", "experiments")
    sections = collections.OrderedDict(
        (name, check.section(name, experiments[name])) for name in sorted(experiments)
    )

    output = check.mapping(data.get("output") or {}, "output")
    unknown = set(output) - set(OUTPUT_KEYS)
    if unknown:
        raise check.unknown(unknown, "output")
    if "format" in output:
        check.value(_field("str", choices=FORMATS), output["format"], "output.format")
    if "path" in output and not isinstance(output["path"], six.string_types):
        raise check.schema_error("Expected a path string", "output.path")

    return ExperimentConfig(suite, sections, mode, seed, dict(output), version)


def parse_config(text):
    """
    Parse and validate a configuration document.

    :param text: JSON document as str or UTF-8 bytes
    :return: ExperimentConfig
    :raises ConfigError: with the offending field path and line when known
    """

    if isinstance(text, bytes):
        try:
            text = decode_utf8(text)
        except UnicodeDecodeError as ex:
            raise ConfigSchemaError("Configuration is not UTF-8: %s" % ex)

    try:
        data = json.loads(text, object_pairs_hook=collections.OrderedDict)
    except ValueError as ex:
        raise ConfigSchemaError(
            "Malformed JSON: %s" % getattr(ex, "msg", ex), line=getattr(ex, "lineno", None)
        )

    return _validate(data, text)


def load_config(path):
    try:
        with open(path, "rb") as handle:
            return parse_config(handle.read())
    except (IOError, OSError) as ex:
        raise ConfigSchemaError("Cannot read configuration %s: %s" % (path, ex))


def reference_config(name):
    """One of the packaged configurations: ``qubit_benchmarks``, ``calibrated`` or ``components``."""
    return load_config(os.path.join(CONFIG_DIR, "%s.json" % name))
