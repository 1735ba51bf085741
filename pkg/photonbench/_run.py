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


"""'photonbench run' executes the experiments of a configuration and writes
  the benchmark report. The exit code is 1 when a reference target is missed."""

from __future__ import print_function

import sys
import time
import traceback

from photonbench import utils_common
from photonbench.config import load_config
from photonbench.errors import ConfigError, PhotonBenchError
from photonbench.report import FAIL, emit_report
from photonbench.suite import run_suite

usage = "photonbench run --config FILE [--seed SEED] [--out FILE] [--format FORMAT] [--jobs NUM]"
help_epilog = """
EXAMPLES:
photonbench run --config qubit_benchmarks.json
  Run the suite and print the report table.

photonbench run --config calibrated.json --seed 7 --format csv --out report.csv --jobs 4
  Run with seed 7 on four worker processes and write a CSV report.
"""


def parse_options(argv, prog=None):
    parser = utils_common.CommonOptionsParser(usage=usage, epilog=help_epilog, prog=prog)

    options, args = parser.parse_args(argv)

    # Check validity of arguments
    if len(args) != 0:
        parser.error("No positional arguments supported. Unrecognized option '%s'" % args[0])
    if options.config is None:
        parser.error("--config is required")

    return options


def report_destination(options, config):
    """Command line options win over the configured output block."""

    path = options.out or config.output.get("path")
    output_format = options.format or config.output.get("format")
    if output_format is None:
        output_format = "table" if path in (None, "-") else "json"
    return path, output_format


def main(argv=None, prog=None):
    options = parse_options(argv if argv is not None else sys.argv[1:], prog=prog)

    start_time = time.time()
    try:
        config = load_config(options.config)
        if options.seed is not None:
            config = config.with_seed(options.seed)
    except ConfigError as ex:
        print("Invalid configuration: %s" % ex, file=sys.stderr)
        return utils_common.EXIT_CONFIG_ERROR

    try:
        report = run_suite(config, jobs=options.jobs)
        path, output_format = report_destination(options, config)
        emit_report(report, output_format, path)
    except PhotonBenchError as ex:
        if options.debug:
            traceback.print_exc()
        print(ex, file=sys.stderr)
        return utils_common.EXIT_FAILURE

    failed = [row for row in report.rows if row.status == FAIL]
    if not options.quiet:
        print(
            "  Done (%.2f seconds): %d rows, %d target(s) missed"
            % (time.time() - start_time, len(report), len(failed)),
            file=sys.stderr,
        )
    return utils_common.EXIT_FAILURE if failed else utils_common.EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
