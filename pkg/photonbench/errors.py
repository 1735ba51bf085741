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


__all__ = [
    "ConfigError",
    "ConfigRangeError",
    "ConfigSchemaError",
    "CountingError",
    "DimensionError",
    "ExperimentError",
    "GridError",
    "ImpossibleOutcomeError",
    "ModelError",
    "NonUnitaryError",
    "NotTracePreservingError",
    "PhotonBenchError",
    "ReportError",
    "SimulationError",
    "TruncationError",
    "UnknownKeyError",
    "UnphysicalParameterError",
]


class PhotonBenchError(Exception):
    def __init__(self, message):
        super(PhotonBenchError, self).__init__(message)
        self.message = message

    def __str__(self):
        return self.message

    def __repr__(self):
        return "<%s instance: %s >" % (self.__class__.__name__, str(self))


class SimulationError(PhotonBenchError):
    pass


class DimensionError(SimulationError):
    pass


class TruncationError(SimulationError):
    def __init__(self, message, leaked=None):
        if leaked is not None:
            message = "%s (leaked probability %.3g)" % (message, leaked)
        super(TruncationError, self).__init__(message)
        self.leaked = leaked


class NonUnitaryError(SimulationError):
    pass


class ImpossibleOutcomeError(SimulationError):
    def __init__(self, message, probability=0.0):
        super(ImpossibleOutcomeError, self).__init__(message)
        self.probability = probability


class NotTracePreservingError(SimulationError):
    pass


class ModelError(PhotonBenchError):
    pass


class UnphysicalParameterError(ModelError):
    def __init__(self, name, value, expected):
        super(UnphysicalParameterError, self).__init__(
            "Parameter '{name}' = {value!r} is outside {expected}".format(
                name=name, value=value, expected=expected
            )
        )
        self.name = name
        self.value = value


class GridError(ModelError):
    pass


class CountingError(ModelError):
    pass


class ConfigError(PhotonBenchError):
    def __init__(self, message, field=None, line=None):
        location = []
        if field is not None:
            location.append("field '%s'" % field)
        if line is not None:
            location.append("line %d" % line)
        if location:
            message = "%s (%s)" % (message, ", ".join(location))
        super(ConfigError, self).__init__(message)
        self.field = field
        self.line = line


class ConfigSchemaError(ConfigError):
    pass


class ConfigRangeError(ConfigError):
    pass


class UnknownKeyError(ConfigError):
    def __init__(self, keys, field=None, line=None):
        self.keys = sorted(keys)
        super(UnknownKeyError, self).__init__(
            "Unknown key(s): %s" % ", ".join(self.keys), field=field, line=line
        )


class ReportError(PhotonBenchError):
    pass


class ExperimentError(PhotonBenchError):
    """A suite experiment failed; ``cause`` names the original error class."""

    def __init__(self, experiment, message, cause=None):
        super(ExperimentError, self).__init__("Experiment '%s' failed: %s" % (experiment, message))
        self.experiment = experiment
        self.cause = cause
