import json

import pytest

from photonbench.errors import ReportError
from photonbench.report import (
    CSV_COLUMNS,
    REPORT_SCHEMA,
    BenchmarkReport,
    ReportRow,
    Target,
    apply_targets,
    compare_targets,
    emit_report,
    load_report,
    load_targets,
    render_report,
)


def sample_report():
    rows = [
        ReportRow("fusion", "fidelity", 0.995, 0.001, config_hash="abc", seed=7),
        ReportRow("hsps", "car", 1200.0, 40.0, config_hash="abc", seed=7),
        ReportRow("pnrd", "p_level_1", 0.25, config_hash="abc", seed=7),
    ]
    return BenchmarkReport("unit", rows, {"seed": 7}, {"fusion": {"bell_state": "Psi-"}})


@pytest.mark.unit
class TestTarget(object):
    def test_higher(self):
        target = Target(0.99, tolerance=0.005, direction="higher")

        assert target.passes(0.999)
        assert target.passes(0.986)
        assert not target.passes(0.98)

    def test_lower(self):
        target = Target(0.004, tolerance=0.0003, direction="lower")

        assert target.passes(0.001)
        assert not target.passes(0.005)

    def test_both(self):
        target = Target(0.93, tolerance=0.01)

        assert target.passes(0.935)
        assert not target.passes(0.95)

    def test_unknown_direction(self):
        with pytest.raises(ReportError):
            Target(1.0, direction="up")

    def test_packaged_targets(self):
        targets = load_targets()

        assert targets["fusion.fidelity"].value == 0.9922
        assert not targets["hsps.car"].primary

    def test_packaged_bands_are_two_sided(self):
        targets = load_targets()
        g2 = targets["hsps.g2_heralded"]
        visibility = targets["hom.visibility"]

        assert g2.passes(0.0036)
        assert not g2.passes(0.0)
        assert not g2.passes(0.004)
        assert visibility.passes(0.997)
        assert not visibility.passes(0.999)
        assert not visibility.passes(0.99)

    def test_missing_targets_file(self, tmpdir):
        with pytest.raises(ReportError):
            load_targets(str(tmpdir.join("missing.json")))


@pytest.mark.unit
class TestApplyTargets(object):
    targets = {
        "fusion.fidelity": Target(0.9922, 0.0012, 0.0052, "higher"),
        "hsps.car": Target(929.0, direction="higher", primary=False),
    }

    def test_grading(self):
        graded = dict((row.key, row) for row in apply_targets(sample_report().rows, self.targets))

        assert graded["fusion.fidelity"].status == "pass"
        assert graded["fusion.fidelity"].target == 0.9922
        assert graded["hsps.car"].status == "info"
        assert graded["pnrd.p_level_1"].status == "info"
        assert graded["pnrd.p_level_1"].target is None

    def test_failure(self):
        row = ReportRow("fusion", "fidelity", 0.95)

        assert apply_targets([row], self.targets)[0].status == "fail"

    def test_missing_value_fails(self):
        row = ReportRow("fusion", "fidelity", float("nan"))

        assert row.value is None
        assert apply_targets([row], self.targets)[0].status == "fail"

    def test_compare_exit_codes(self):
        report = sample_report()

        assert compare_targets(report, self.targets).exit_code == 0

        report.append(ReportRow("fusion", "fidelity", 0.9))
        summary = compare_targets(report, self.targets)

        assert summary.exit_code == 1
        assert len(summary.failed) == 1
        assert len(summary.passed) == 1
        assert len(summary.informational) == 2


@pytest.mark.unit
class TestBenchmarkReport(object):
    def test_merge_groups_by_experiment(self):
        first = BenchmarkReport("unit", [ReportRow("spam", "average_fidelity", 1.0)])
        second = BenchmarkReport("unit", [ReportRow("hom", "visibility", 1.0)])

        assert first.merged(second).experiments() == second.merged(first).experiments()
        assert [row.experiment for row in first.merged(second).rows] == ["hom", "spam"]

    def test_merge_other_suite(self):
        with pytest.raises(ReportError):
            BenchmarkReport("a").merged(BenchmarkReport("b"))

    def test_row_lookup(self):
        report = sample_report()

        assert report.row("hsps", "car").value == 1200.0
        with pytest.raises(KeyError):
            report.row("hsps", "g2_heralded")

    def test_body_excludes_metadata(self):
        body = sample_report().body()

        assert list(body) == ["suite", "rows", "notes"]
        assert len(sample_report()) == 3


@pytest.mark.unit
class TestRendering(object):
    def test_csv_columns(self):
        lines = render_report(sample_report(), "csv").splitlines()

        assert lines[0] == ",".join(CSV_COLUMNS)
        assert lines[1].startswith("fusion,fidelity,0.995,0.001,")
        assert len(lines) == 4

    def test_json(self):
        data = json.loads(render_report(sample_report(), "json"))

        assert data["schema"] == REPORT_SCHEMA
        assert data["body"]["rows"][0]["metric"] == "fidelity"
        assert data["body"]["rows"][2]["error"] is None
        assert data["metadata"] == {"seed": 7}

    def test_table_shows_target_with_error(self):
        targets = load_targets()
        report = BenchmarkReport("unit", apply_targets(sample_report().rows, targets))
        text = render_report(report, "table", targets)

        assert "99.50 ± 0.10" in text
        assert "99.22 ± 0.12" in text
        assert text.splitlines()[0].split() == ["experiment", "metric", "value", "target", "status"]

    def test_unknown_format(self):
        with pytest.raises(ReportError):
            render_report(sample_report(), "xml")


@pytest.mark.unit
class TestEmitAndLoad(object):
    def test_stdout(self, capsys):
        assert emit_report(sample_report(), "csv") is None

        assert capsys.readouterr().out.startswith("experiment,metric,value")

    def test_unwritable_path(self, tmpdir):
        with pytest.raises(ReportError):
            emit_report(sample_report(), "csv", str(tmpdir.join("missing", "report.csv")))

    @pytest.mark.parametrize("name", ["report.json", "report.csv"])
    def test_load_written_report(self, tmpdir, name):
        path = str(tmpdir.join(name))
        report = sample_report()

        emit_report(report, "json" if name.endswith(".json") else "csv", path)
        loaded = load_report(path)

        assert loaded.rows == report.rows

    def test_json_round_trip_keeps_notes(self, tmpdir):
        path = str(tmpdir.join("report.json"))

        emit_report(sample_report(), "json", path)

        assert load_report(path).notes == {"fusion": {"bell_state": "Psi-"}}

    def test_wrong_csv_columns(self, tmpdir):
        path = tmpdir.join("other.csv")
        path.write("a,b\n1,2\n")

        with pytest.raises(ReportError):
            load_report(str(path))

    def test_wrong_schema(self, tmpdir):
        path = tmpdir.join("other.json")
        path.write(json.dumps({"schema": "0", "body": {}}))

        with pytest.raises(ReportError):
            load_report(str(path))
