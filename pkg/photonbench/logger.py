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
Wrap the logging package so simulation modules and CLI verbs share one logger.
"""


import logging
import sys


class BenchLogger(object):
    """
    BenchLogger forwards debug, info, warning and error records to the
    ``photonbench`` logger and can mirror them on the console for CLI runs.
    """

    def __init__(self, level=logging.INFO, name="photonbench"):
        """
        Initialize BenchLogger

        :param level: Minimum logging level
        :type level: int
        :param name: Name of the wrapped logger
        :type name: str
        """

        super(BenchLogger, self).__init__()

        self.logger = logging.getLogger(name)
        self.logger.setLevel(level)

        self.write_to_console = False

    def set_level(self, level):
        """
        Change the minimum level of both the wrapped logger and the console mirror.

        :param level: Minimum logging level, as set by the CLI verbosity flags
        :type level: int
        :rtype: None
        """

        self.logger.setLevel(level)

    @staticmethod
    def _convert_message(message):
        """
        Convert any message to string.

        :param message: Message to log
        :type message: any
        :return: String representation of the message
        :rtype: str
        """

        return str(message)

    def _print_message(self, level, message):
        """
        Mirror a record on the console: warnings and below go to stdout,
        errors to stderr. Records under the current level are dropped.
        """

        if self.write_to_console and level >= self.logger.level:
            if level <= logging.WARNING:
                sys.stdout.write(message + "\n")
            else:
                sys.stderr.write(message + "\n")

    def _log(self, level, message, *args, **kwargs):
        self._print_message(level, message)
        self.logger.log(level, message, *args, **kwargs)

    def debug(self, message):
        """
        Log debug messages, such as optimizer restarts and truncation cuts.

        :param message: Debug message
        :type message: str
        :rtype: None
        """

        self._log(logging.DEBUG, message)

    def info(self, message):
        """
        Log info messages, such as the headline metric of a finished experiment.

        :param message: Info message
        :type message: str
        :rtype: None
        """

        self._log(logging.INFO, message)

    def warning(self, message):
        """
        Log warning messages, such as a design missing its purity target.

        :param message: Warning message
        :type message: str
        :rtype: None
        """

        self._log(logging.WARNING, message)

    def error(self, message):
        """
        Log error messages.

        :param message: Error message
        :type message: str
        :rtype: None
        """

        self._log(logging.ERROR, message)

    def exception(self, exc, with_raise=False):
        """
        Log an exception with its traceback and re-raise it on request.

        :param exc: Exception
        :type exc: Exception
        :param with_raise: Raise ``exc`` after logging
        :type with_raise: bool
        :rtype: None
        """

        self._log(logging.ERROR, self._convert_message(exc), exc_info=1)

        if with_raise and isinstance(exc, Exception):
            raise exc


default_logger = BenchLogger()
