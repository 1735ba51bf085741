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


"""'photonbench sweep' reruns a configuration over a grid of values of one
  parameter and writes one report with a block of rows per value."""

from __future__ import print_function

import sys
import time
import traceback

from photonbench import utils_common
from photonbench._run import report_destination
from photonbench.config import load_config
from photonbench.errors import ConfigError, PhotonBenchError
from photonbench.report import emit_report
from photonbench.suite import sweep_suite

usage = (
    "photonbench sweep --config FILE --param FIELD --values V1,V2,... [--seed SEED] "
    "[--out FILE] [--format FORMAT] [--jobs NUM]"
)
help_epilog = """
FIELD: dotted path of a configuration value, e.g. experiments.hsps.mu

EXAMPLES:
photonbench sweep --config calibrated.json --param experiments.hsps.mu --values 0.001,0.003,0.01
  Heralded source metrics at three pair numbers.
"""


def parse_options(argv, prog=None):
    parser = utils_common.CommonOptionsParser(usage=usage, epilog=help_epilog, prog=prog)

    parser.add_option(
        "--param",
        dest="param",
        metavar="FIELD",
        help="dotted path of the swept parameter",
        type="field",
    )
    parser.add_option(
        "--values",
        dest="values",
        metavar="V1,V2,...",
        help="comma-separated values of the swept parameter",
        type="values",
    )

    options, args = parser.parse_args(argv)

    # Check validity of arguments
    if len(args) != 0:
        parser.error("No positional arguments supported. Unrecognized option '%s'" % args[0])
    for name in ("config", "param", "values"):
        if getattr(options, name) is None:
            parser.error("--%s is required" % name)

    return options


def main(argv=None, prog=None):
    options = parse_options(argv if argv is not None else sys.argv[1:], prog=prog)

    start_time = time.time()
    try:
        config = load_config(options.config)
        # every value is validated before the first run starts
        for value in options.values:
            config.replaced(options.param, value)
    except ConfigError as ex:
        print("Invalid configuration: %s" % ex, file=sys.stderr)
        return utils_common.EXIT_CONFIG_ERROR

    try:
        report = sweep_suite(config, options.param, options.values, options.seed, options.jobs)
        path, output_format = report_destination(options, config)
        emit_report(report, output_format, path)
    except PhotonBenchError as ex:
        if options.debug:
            traceback.print_exc()
        print(ex, file=sys.stderr)
        return utils_common.EXIT_FAILURE

    if not options.quiet:
        print(
            "  Done (%.2f seconds): %d values, %d rows"
            % (time.time() - start_time, len(options.values), len(report)),
            file=sys.stderr,
        )
    return utils_common.EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
