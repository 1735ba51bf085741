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


"""'photonbench compare' grades a benchmark report against the reference
  targets and exits with 1 when a primary target is missed."""

from __future__ import print_function

import sys
import traceback

from photonbench import utils_common
from photonbench.config import load_config
from photonbench.errors import ConfigError, PhotonBenchError
from photonbench.report import BenchmarkReport, compare_targets, emit_report, load_report, load_targets
from photonbench.suite import run_suite

usage = "photonbench compare (--report FILE | --config FILE) [--targets FILE] [--format FORMAT] [--out FILE]"
help_epilog = """
EXAMPLES:
photonbench compare --report report.json
  Grade a stored report against the packaged targets.

photonbench compare --config calibrated.json --targets my_targets.json
  Run the suite and grade it against other targets.
"""


def parse_options(argv, prog=None):
    parser = utils_common.CommonOptionsParser(usage=usage, epilog=help_epilog, prog=prog)

    parser.add_option(
        "--report",
        dest="report",
        metavar="FILE",
        help="report written by 'photonbench run' (.json or .csv)",
        type="file",
    )
    parser.add_option(
        "--targets",
        dest="targets",
        metavar="FILE",
        help="reference targets (default: the packaged targets)",
        type="file",
    )

    options, args = parser.parse_args(argv)

    # Check validity of arguments
    if len(args) != 0:
        parser.error("No positional arguments supported. Unrecognized option '%s'" % args[0])
    if (options.report is None) == (options.config is None):
        parser.error("Exactly one of --report and --config is required")

    return options


def main(argv=None, prog=None):
    options = parse_options(argv if argv is not None else sys.argv[1:], prog=prog)

    try:
        config = None
        if options.config is not None:
            config = load_config(options.config)
    except ConfigError as ex:
        print("Invalid configuration: %s" % ex, file=sys.stderr)
        return utils_common.EXIT_CONFIG_ERROR

    try:
        targets = load_targets(options.targets)
        if config is not None:
            report = run_suite(config, options.seed, options.jobs, targets)
        else:
            report = load_report(options.report)

        summary = compare_targets(report, targets)
        graded = BenchmarkReport(
            report.suite, summary.passed + summary.failed + summary.informational, report.metadata
        )
        graded.rows.sort(key=lambda row: (row.experiment, row.metric))
        emit_report(graded, options.format or "table", options.out, targets)
    except PhotonBenchError as ex:
        if options.debug:
            traceback.print_exc()
        print(ex, file=sys.stderr)
        return utils_common.EXIT_FAILURE

    if not options.quiet:
        print(
            "  %d passed, %d failed, %d informational"
            % (len(summary.passed), len(summary.failed), len(summary.informational)),
            file=sys.stderr,
        )
    return summary.exit_code


if __name__ == "__main__":
    sys.exit(main())
