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

from __future__ import print_function

import copy
import inspect
import json
import logging
import optparse
import os
import re

from photonbench import version
from photonbench.logger import default_logger

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG_ERROR = 2

JOBS_ENV = "PHOTONBENCH_JOBS"
FORMATS = ("csv", "json", "table")

_fieldRegex = re.compile(r"^[A-Za-z_]\w*(\.[A-Za-z_]\w*)+$")


def default_jobs():
    value = os.environ.get(JOBS_ENV)
    if value is None:
        return 1
    try:
        jobs = int(value)
    except ValueError:
        return None
    return jobs if jobs >= 1 else None


def parse_values(text):
    """
    Comma-separated sweep values. Each item is read as JSON when possible and
    kept as a string otherwise, so ``0.001,0.003`` gives floats.
    """

    values = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            values.append(json.loads(item))
        except ValueError:
            values.append(item)
    return values


class CommonOptionsParser(optparse.OptionParser, object):
    def format_epilog(self, formatter):
        return self.epilog or ""

    def __init__(self, *args, **kwargs):
        run_options = kwargs.pop("run_options", True)

        # -- Type Checkers

        def check_positive_int(_, opt_str, value):
            try:
                value = int(value)
                if value < 1:
                    raise ValueError
            except ValueError:
                raise optparse.OptionValueError(
                    "%s value must be an integer greater than 0: %s" % (opt_str, value)
                )

            return value

        def check_seed(_, opt_str, value):
            try:
                value = int(value)
                if value < 0:
                    raise ValueError
            except ValueError:
                raise optparse.OptionValueError(
                    "%s value must be a non-negative integer: %s" % (opt_str, value)
                )

            return value

        def check_existing_file(_, opt_str, value):
            if not os.path.isfile(value):
                raise optparse.OptionValueError(
                    "%s value was not an existing file: %s" % (opt_str, value)
                )

            return os.path.realpath(value)

        def check_output_location(_, opt_str, value):
            if value == "-":
                return value

            real_value = os.path.realpath(value)
            if not os.path.isdir(os.path.dirname(real_value)):
                raise optparse.OptionValueError(
                    "%s directory does not exist: %s" % (opt_str, value)
                )

            return real_value

        def check_field(_, opt_str, value):
            if not _fieldRegex.match(value):
                raise optparse.OptionValueError(
                    "%s value must be a dotted field path such as experiments.hsps.mu: %s"
                    % (opt_str, value)
                )

            return value

        def check_values(_, opt_str, value):
            values = parse_values(value)
            if not values:
                raise optparse.OptionValueError("%s needs at least one value" % opt_str)

            return values

        # -- setup custom Options object

        class CommonOptionChecker(optparse.Option, object):
            TYPES = optparse.Option.TYPES + ("pos_int", "seed", "file", "out_file", "field", "values")

            TYPE_CHECKER = copy.copy(optparse.Option.TYPE_CHECKER)
            TYPE_CHECKER["pos_int"] = check_positive_int
            TYPE_CHECKER["seed"] = check_seed
            TYPE_CHECKER["file"] = check_existing_file
            TYPE_CHECKER["out_file"] = check_output_location
            TYPE_CHECKER["field"] = check_field
            TYPE_CHECKER["values"] = check_values

        kwargs["option_class"] = CommonOptionChecker

        # - default description to the module's __doc__
        if "description" not in kwargs:
            # get calling module
            caller = inspect.getmodule(inspect.stack()[1][0])
            if caller is not None and caller.__doc__:
                kwargs["description"] = caller.__doc__

        # -- add version

        if "version" not in kwargs:
            kwargs["version"] = "%%prog %s" % version.VERSION

        # -- call super

        super(CommonOptionsParser, self).__init__(*args, **kwargs)

        # -- add common options

        self.add_option(
            "-q",
            "--quiet",
            dest="quiet",
            default=False,
            action="store_true",
            help="suppress non-error messages",
        )
        self.add_option(
            "--debug",
            dest="debug",
            default=False,
            action="store_true",
            help=optparse.SUPPRESS_HELP,
        )

        if not run_options:
            return

        run_group = optparse.OptionGroup(self, "Run options")
        run_group.add_option(
            "--config",
            dest="config",
            metavar="FILE",
            help="experiment configuration (JSON)",
            type="file",
        )
        run_group.add_option(
            "--seed",
            dest="seed",
            metavar="SEED",
            help="seed overriding the configured one",
            type="seed",
        )
        run_group.add_option(
            "--out",
            dest="out",
            metavar="FILE",
            help="report destination (default: the configured path or stdout)",
            type="out_file",
        )
        run_group.add_option(
            "--format",
            dest="format",
            metavar="FORMAT",
            help="report format: %s" % ", ".join(FORMATS),
            type="choice",
            choices=FORMATS,
        )
        run_group.add_option(
            "--jobs",
            dest="jobs",
            metavar="NUM",
            help="experiments run in parallel (default: $%s or 1)" % JOBS_ENV,
            type="pos_int",
            default=default_jobs() or 1,
        )
        self.add_option_group(run_group)

    def parse_args(self, *args, **kwargs):
        # - validate ENV variables

        if default_jobs() is None:
            self.error(
                "ENV variable %s is not a useable integer: %s" % (JOBS_ENV, os.environ[JOBS_ENV])
            )

        # - parse options

        options, args = super(CommonOptionsParser, self).parse_args(*args, **kwargs)

        # - console logging

        default_logger.write_to_console = True
        if options.debug:
            default_logger.set_level(logging.DEBUG)
        elif options.quiet:
            default_logger.set_level(logging.WARNING)
        else:
            default_logger.set_level(logging.INFO)

        return options, args
