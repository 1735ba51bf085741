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

"""Dispatcher for the command line verbs: validate, run, sweep and compare"""

import sys

MODES = ["validate", "run", "sweep", "compare"]


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv

    if len(argv) < 1 or argv[0] not in MODES:
        sys.stderr.write(
            "ERROR: Must be called with one of the following verbs: %s\n" % ", ".join(MODES)
        )
        return 2

    verb = argv[0]
    prog = "photonbench " + verb
    argv = argv[1:]

    if verb == "validate":
        from photonbench import _validate

        return _validate.main(argv, prog=prog)
    elif verb == "run":
        from photonbench import _run

        return _run.main(argv, prog=prog)
    elif verb == "sweep":
        from photonbench import _sweep

        return _sweep.main(argv, prog=prog)
    elif verb == "compare":
        from photonbench import _compare

        return _compare.main(argv, prog=prog)


if __name__ == "__main__":
    sys.exit(main())
