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
Benchmark reports: rows of metrics with provenance, reference targets,
serialization to CSV, JSON or a console table, and target comparison.
"""

import collections
import csv
import io
import json
import math
import os
import sys

import six

from photonbench.errors import ReportError
from photonbench.logger import default_logger

__all__ = [
    "BenchmarkReport",
    "CSV_COLUMNS",
    "CompareSummary",
    "REPORT_SCHEMA",
    "ReportRow",
    "Target",
    "apply_targets",
    "compare_targets",
    "emit_report",
    "load_report",
    "load_targets",
    "render_report",
]

REPORT_SCHEMA = "1"
FORMATS = ("csv", "json", "table")

CSV_COLUMNS = (
    "experiment",
    "metric",
    "value",
    "error",
    "target",
    "target_error",
    "tolerance",
    "direction",
    "status",
    "citation",
    "config_hash",
    "seed",
)

PASS = "pass"
FAIL = "fail"
INFO = "info"

TARGETS_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data", "targets.json")


class ReportRow(collections.namedtuple("ReportRow", CSV_COLUMNS)):
    __slots__ = ()

    def __new__(
        cls,
        experiment,
        metric,
        value,
        error=None,
        target=None,
        target_error=None,
        tolerance=None,
        direction=None,
        status=INFO,
        citation="",
        config_hash="",
        seed=0,
    ):
        return super(ReportRow, cls).__new__(
            cls,
            experiment,
            metric,
            _number(value),
            _number(error),
            _number(target),
            _number(target_error),
            _number(tolerance),
            direction,
            status,
            citation or "",
            config_hash,
            int(seed),
        )

    @property
    def key(self):
        return "%s.%s" % (self.experiment, self.metric)

    def to_dict(self):
        return collections.OrderedDict(zip(self._fields, self))


def _number(value):
    if value is None or value == "":
        return None
    value = float(value)
    if math.isnan(value):
        return None
    return value


class Target(
    collections.namedtuple(
        "Target",
        ["value", "error", "tolerance", "direction", "citation", "precision", "scale", "primary"],
    )
):
    """
    A reference value. ``direction`` is ``higher`` or ``lower`` when exceeding
    the target in that direction always passes, ``both`` for a symmetric window.
    ``scale`` and ``precision`` control the console view, e.g. percent with two
    decimals for fidelities.
    """

    __slots__ = ()

    def __new__(
        cls, value, error=0.0, tolerance=0.0, direction="both", citation="", precision=4, scale=1.0, primary=True
    ):
        if direction not in ("higher", "lower", "both"):
            raise ReportError("Unknown target direction %r" % direction)
        return super(Target, cls).__new__(
            cls, float(value), float(error), float(tolerance), direction, citation, int(precision), float(scale), primary
        )

    def passes(self, value):
        if self.direction == "higher" and value >= self.value:
            return True
        if self.direction == "lower" and value <= self.value:
            return True
        return abs(value - self.value) <= self.tolerance


def load_targets(path=None):
    """Reference targets keyed by ``experiment.metric``."""

    path = path or TARGETS_PATH
    try:
        with io.open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except (IOError, OSError, ValueError) as ex:
        raise ReportError("Cannot load targets from %s: %s" % (path, ex))

    return dict((key, Target(**entry)) for key, entry in data["targets"].items())


def apply_targets(rows, targets):
    """Attach targets to rows and grade them. Rows without a target stay informational."""

    graded = []
    for row in rows:
        target = targets.get(row.key)
        if target is None:
            graded.append(row._replace(status=INFO))
            continue
        if row.value is None:
            status = FAIL
        elif not target.primary:
            status = INFO
        else:
            status = PASS if target.passes(row.value) else FAIL
        graded.append(
            row._replace(
                target=target.value,
                target_error=target.error,
                tolerance=target.tolerance,
                direction=target.direction,
                citation=target.citation,
                status=status,
            )
        )
    return graded


class BenchmarkReport(object):
    """
    Rows plus run metadata. The body (suite, rows and notes) depends only on the
    configuration and seed; the metadata carries versions and timings.
    """

    def __init__(self, suite, rows=(), metadata=None, notes=None):
        self.suite = suite
        self.rows = list(rows)
        self.metadata = collections.OrderedDict(metadata or {})
        self.notes = collections.OrderedDict(sorted((notes or {}).items()))

    def append(self, row):
        self.rows.append(row)

    def extend(self, rows):
        self.rows.extend(rows)

    def merged(self, other):
        """Order-independent merge: rows are grouped by experiment name."""

        if other.suite != self.suite:
            raise ReportError("Cannot merge suites %r and %r" % (self.suite, other.suite))
        rows = sorted(self.rows + other.rows, key=lambda row: row.experiment)
        metadata = collections.OrderedDict(self.metadata)
        metadata.update(other.metadata)
        notes = dict(self.notes)
        notes.update(other.notes)
        return BenchmarkReport(self.suite, rows, metadata, notes)

    def experiments(self):
        return sorted(set(row.experiment for row in self.rows))

    def row(self, experiment, metric):
        for row in self.rows:
            if row.experiment == experiment and row.metric == metric:
                return row
        raise KeyError("%s.%s" % (experiment, metric))

    def body(self):
        return collections.OrderedDict(
            [
                ("suite", self.suite),
                ("rows", [row.to_dict() for row in self.rows]),
                ("notes", self.notes),
            ]
        )

    def to_dict(self):
        return collections.OrderedDict(
            [("schema", REPORT_SCHEMA), ("body", self.body()), ("metadata", self.metadata)]
        )

    def __len__(self):
        return len(self.rows)


def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return six.text_type(value)


def _render_csv(report):
    buffer = six.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in report.rows:
        writer.writerow([_csv_cell(value) for value in row])
    return buffer.getvalue()


def _render_json(report):
    return json.dumps(report.to_dict(), indent=2, allow_nan=False) + "\n"


def _display(value, error, target):
    if value is None:
        return "-"
    if target is None:
        text = "%.6g" % value
        if error:
            text += " ± %.2g" % error
        return text
    pattern = "%%.%df" % target.precision
    text = pattern % (value * target.scale)
    if error:
        text += " ± " + pattern % (error * target.scale)
    return text


def _render_table(report, targets):
    header = ("experiment", "metric", "value", "target", "status")
    lines = [header]
    for row in report.rows:
        target = targets.get(row.key)
        lines.append(
            (
                row.experiment,
                row.metric,
                _display(row.value, row.error, target),
                "" if row.target is None else _display(row.target, row.target_error, target),
                row.status,
            )
        )
    widths = [max(len(line[i]) for line in lines) for i in range(len(header))]
    text = [
        "  ".join(cell.ljust(width) for cell, width in zip(line, widths)).rstrip() for line in lines
    ]
    text.insert(1, "  ".join("-" * width for width in widths))
    return "\n".join(text) + "\n"


def render_report(report, output_format, targets=None):
    if output_format == "csv":
        return _render_csv(report)
    if output_format == "json":
        return _render_json(report)
    if output_format == "table":
        return _render_table(report, load_targets() if targets is None else targets)
    raise ReportError("Unknown report format %r (expected one of %s)" % (output_format, ", ".join(FORMATS)))


def emit_report(report, output_format="table", path=None, targets=None):
    """
    Write the report to ``path`` or to stdout when no path is given.

    :raises ReportError: for unknown formats and unwritable paths
    """

    text = render_report(report, output_format, targets)
    if path is None or path == "-":
        sys.stdout.write(text)
        return None

    try:
        with io.open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(six.text_type(text))
    except (IOError, OSError) as ex:
        raise ReportError("Cannot write report to %s: %s" % (path, ex))

    default_logger.info("Report written to %s" % path)
    return path


def load_report(path):
    """Read a report written as JSON or CSV; the format follows the extension."""

    try:
        with io.open(path, encoding="utf-8", newline="") as handle:
            text = handle.read()
    except (IOError, OSError) as ex:
        raise ReportError("Cannot read report %s: %s" % (path, ex))

    if path.endswith(".json"):
        try:
            data = json.loads(text, object_pairs_hook=collections.OrderedDict)
        except ValueError as ex:
            raise ReportError("Malformed report %s: %s" % (path, ex))
        if data.get("schema") != REPORT_SCHEMA:
            raise ReportError("Unsupported report schema %r" % data.get("schema"))
        body = data["body"]
        rows = [ReportRow(**row) for row in body["rows"]]
        return BenchmarkReport(body["suite"], rows, data.get("metadata"), body.get("notes"))

    reader = csv.DictReader(six.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ReportError("Unexpected CSV columns in %s" % path)
    rows = []
    for record in reader:
        record = dict((key, value if value != "" else None) for key, value in record.items())
        record["seed"] = int(record["seed"] or 0)
        record["citation"] = record["citation"] or ""
        record["config_hash"] = record["config_hash"] or ""
        rows.append(ReportRow(**record))
    return BenchmarkReport("csv", rows)


CompareSummary = collections.namedtuple(
    "CompareSummary", ["passed", "failed", "informational", "exit_code"]
)


def compare_targets(report, targets=None):
    """
    Grade every row against the reference targets.

    :return: CompareSummary; ``exit_code`` is 1 when a primary target failed
    """

    targets = load_targets() if targets is None else targets
    graded = apply_targets(report.rows, targets)

    passed = [row for row in graded if row.status == PASS]
    failed = [row for row in graded if row.status == FAIL]
    informational = [row for row in graded if row.status == INFO]

    for row in failed:
        default_logger.warning(
            "%s = %r misses target %r (tolerance %r, %s)"
            % (row.key, row.value, row.target, row.tolerance, row.citation)
        )

    return CompareSummary(passed, failed, informational, 1 if failed else 0)
