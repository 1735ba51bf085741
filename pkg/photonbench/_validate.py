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


"""'photonbench validate' checks an experiment configuration against the schema
  without running anything."""

from __future__ import print_function

import sys
import traceback

from photonbench import utils_common
from photonbench.config import load_config
from photonbench.errors import ConfigError

usage = "photonbench validate --config FILE [-q]"
help_epilog = """
EXAMPLES:
photonbench validate --config qubit_benchmarks.json
  Check qubit_benchmarks.json and print the experiments it would run.
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


def main(argv=None, prog=None):
    options = parse_options(argv if argv is not None else sys.argv[1:], prog=prog)

    try:
        config = load_config(options.config)
    except ConfigError as ex:
        if options.debug:
            traceback.print_exc()
        print("Invalid configuration: %s" % ex, file=sys.stderr)
        return utils_common.EXIT_CONFIG_ERROR

    if not options.quiet:
        print(
            "%s: suite '%s', mode %s, seed %d, experiments %s (hash %s)"
            % (
                options.config,
                config.suite,
                config.mode,
                config.seed,
                ", ".join(config.experiments),
                config.config_hash,
            )
        )
    return utils_common.EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
