import logging

import pytest
from mock import call, patch

from photonbench.logger import BenchLogger


@pytest.mark.unit
class TestBenchLogger(object):
    bench_logger = BenchLogger(logging.DEBUG)
    logger = logging.getLogger("photonbench")

    def setup_method(self):
        self.bench_logger.set_level(logging.DEBUG)
        self.bench_logger.write_to_console = False

    def test_converter(self):
        expected_message = "converted message"

        message_types = [Exception(expected_message), expected_message]

        for message in message_types:
            converted_message = self.bench_logger._convert_message(message)
            assert converted_message == expected_message

    @patch("photonbench.logger.sys.stdout")
    def test_log_write_to_stdout(self, mock_stdout):
        expected_message = "purity 0.93"
        log_levels = [logging.DEBUG, logging.INFO, logging.WARNING]
        self.bench_logger.write_to_console = True

        with patch.object(self.logger, "log"):
            for level in log_levels:
                self.bench_logger._log(level, expected_message)

        mock_stdout.write.assert_has_calls([call(expected_message + "\n")] * 3)

    @patch("photonbench.logger.sys.stderr")
    def test_log_write_to_stderr(self, mock_stderr):
        expected_message = "experiment failed"
        self.bench_logger.write_to_console = True

        with patch.object(self.logger, "log"):
            self.bench_logger._log(logging.ERROR, expected_message)

        mock_stderr.write.assert_has_calls([call(expected_message + "\n")])

    @patch("photonbench.logger.sys.stdout")
    def test_console_respects_level(self, mock_stdout):
        self.bench_logger.write_to_console = True
        self.bench_logger.set_level(logging.WARNING)

        with patch.object(self.logger, "log"):
            self.bench_logger.info("hidden")

        mock_stdout.write.assert_not_called()

    def test_log_debug(self):
        expected_message = "debug message"

        with patch.object(self.logger, "log") as mock_log:
            self.bench_logger.debug(expected_message)

        mock_log.assert_called_once_with(logging.DEBUG, expected_message)

    def test_log_info(self):
        expected_message = "info message"

        with patch.object(self.logger, "log") as mock_log:
            self.bench_logger.info(expected_message)

        mock_log.assert_called_once_with(logging.INFO, expected_message)

    def test_log_warning(self):
        expected_message = "warning message"

        with patch.object(self.logger, "log") as mock_log:
            self.bench_logger.warning(expected_message)

        mock_log.assert_called_once_with(logging.WARNING, expected_message)

    def test_log_error(self):
        expected_message = "error message"

        with patch.object(self.logger, "log") as mock_log:
            self.bench_logger.error(expected_message)

        mock_log.assert_called_once_with(logging.ERROR, expected_message)

    @patch("photonbench.logger.BenchLogger._convert_message")
    def test_log_exception(self, mock_converter):
        expected_message = "exception message"
        expected_exception = Exception(expected_message)
        mock_converter.return_value = expected_message

        with patch.object(self.logger, "log") as mock_log:
            try:
                raise expected_exception
            except Exception as exc:
                self.bench_logger.exception(exc)

        mock_converter.assert_called_once_with(expected_exception)
        mock_log.assert_called_once_with(logging.ERROR, expected_message, exc_info=1)

    @patch("photonbench.logger.BenchLogger._convert_message")
    def test_log_exception_and_raise(self, mock_converter):
        expected_message = "exception message"
        expected_exception = AttributeError(expected_message)
        mock_converter.return_value = expected_message

        with patch.object(self.logger, "log") as mock_log:
            with pytest.raises(AttributeError):
                self.bench_logger.exception(expected_exception, with_raise=True)

        mock_converter.assert_called_once_with(expected_exception)
        mock_log.assert_called_once_with(logging.ERROR, expected_message, exc_info=1)

    @patch("photonbench.logger.sys.stdout")
    def test_console_shows_records_at_level(self, mock_stdout):
        self.bench_logger.write_to_console = True
        self.bench_logger.set_level(logging.WARNING)

        with patch.object(self.logger, "log"):
            self.bench_logger.warning("target missed")

        mock_stdout.write.assert_called_once_with("target missed\n")
