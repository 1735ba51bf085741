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

from photonbench import errors, version
from photonbench.config import ExperimentConfig, load_config, parse_config
from photonbench.errors import *  # noqa: F401,F403
from photonbench.report import BenchmarkReport, ReportRow, compare_targets, emit_report
from photonbench.suite import run_suite, sweep_suite

__all__ = [
    "BenchmarkReport",
    "ExperimentConfig",
    "ReportRow",
    "compare_targets",
    "emit_report",
    "load_config",
    "parse_config",
    "run_suite",
    "sweep_suite",
] + errors.__all__
__version__ = version.VERSION
