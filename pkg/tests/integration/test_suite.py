import json
import multiprocessing
import os

import pytest
from mock import patch

from photonbench import suite
from photonbench.config import parse_config, reference_config
from photonbench.errors import ExperimentError
from photonbench.suite import run_experiment, run_suite, sweep_suite
from tests.helpers import IntegrationTestCaseBase

COMPONENTS = {
    "extinction": {"delta_r": 0.001},
    "pnrd": {"cells": 4, "photons": 2},
    "loss_budget": {"items": [{"kind": "crossing", "count": 10}, {"kind": "smf28_facet", "count": 2}]},
}


def body_of(report):
    return json.dumps(report.body(), sort_keys=True)


@pytest.mark.integration
class TestQubitBenchmarks(IntegrationTestCaseBase):
    def test_ideal_values(self):
        report = run_suite(reference_config("qubit_benchmarks"))

        assert report.experiments() == ["chip_to_chip", "fusion", "hom", "spam"]
        for key in ("spam.average_fidelity", "chip_to_chip.process_fidelity", "fusion.fidelity"):
            row = report.row(*key.split("."))
            assert abs(row.value - 1.0) < 1e-6
            assert row.status == "pass"

        # the measured visibility band is two-sided, so a perfect source lies above it
        visibility = report.row("hom", "visibility")
        assert abs(visibility.value - 1.0) < 1e-6
        assert visibility.status == "fail"

    def test_metadata(self):
        config = reference_config("qubit_benchmarks")
        report = run_suite(config)

        assert report.metadata["seed"] == config.seed
        assert report.metadata["config_hash"] == config.config_hash
        assert report.metadata["mode"] == "exact"
        assert set(report.metadata["timings_s"]) == set(config.experiments)
        assert all(row.config_hash == config.config_hash for row in report.rows)


@pytest.mark.integration
class TestDeterminism(IntegrationTestCaseBase):
    def config(self):
        experiments = dict(COMPONENTS)
        experiments["spam"] = {"shots": 20000, "resamples": 5}
        return parse_config(
            json.dumps({"schema_version": "1.0", "suite": "sampled", "mode": "sampled", "seed": 11, "experiments": experiments})
        )

    def test_same_seed_same_body(self):
        assert body_of(run_suite(self.config())) == body_of(run_suite(self.config()))

    def test_seed_override_changes_sampled_rows(self):
        first = run_suite(self.config(), seed_override=1)
        second = run_suite(self.config(), seed_override=2)

        assert first.metadata["seed"] == 1
        assert first.row("spam", "average_fidelity").value != second.row("spam", "average_fidelity").value

    def test_parallel_matches_sequential(self):
        sequential = run_suite(self.config(), jobs=1)
        parallel = run_suite(self.config(), jobs=self.jobs)

        assert body_of(parallel) == body_of(sequential)
        assert parallel.metadata["jobs"] == self.jobs


@pytest.mark.integration
class TestComponents(IntegrationTestCaseBase):
    def test_component_rows(self):
        report = run_suite(parse_config(json.dumps({"schema_version": "1.0", "experiments": COMPONENTS})))

        assert report.row("extinction", "extinction_db").value >= 50.0
        assert report.row("extinction", "extinction_db").status == "pass"
        assert abs(report.row("pnrd", "p_level_2").value - 0.75) < 1e-12
        assert abs(report.row("loss_budget", "total_db").value - (10 * 0.0016 + 2 * 0.120)) < 1e-12

    def test_failed_experiment(self):
        config = parse_config(json.dumps({"schema_version": "1.0", "experiments": {"extinction": {"delta_r": 0.5}}}))

        with pytest.raises(ExperimentError) as excinfo:
            run_suite(config)

        assert excinfo.value.experiment == "extinction"
        assert excinfo.value.cause == "UnphysicalParameterError"

    def test_failed_experiment_in_worker(self):
        experiments = dict(COMPONENTS)
        experiments["extinction"] = {"delta_r": 0.5}
        config = parse_config(json.dumps({"schema_version": "1.0", "experiments": experiments}))

        with pytest.raises(ExperimentError) as excinfo:
            run_suite(config, jobs=self.jobs)

        assert excinfo.value.experiment == "extinction"

    @pytest.mark.skipif(
        multiprocessing.get_start_method() != "fork", reason="patched module state reaches workers only through fork"
    )
    def test_killed_worker_is_reported(self):
        config = parse_config(json.dumps({"schema_version": "1.0", "experiments": COMPONENTS}))
        execute = suite._execute

        def crash_pnrd(name, *args):
            if name == "pnrd":
                os._exit(3)
            return execute(name, *args)

        with patch.object(suite, "_execute", side_effect=crash_pnrd):
            with pytest.raises(ExperimentError) as excinfo:
                run_suite(config, jobs=self.jobs)

        assert excinfo.value.experiment == "pnrd"
        assert excinfo.value.cause == "WorkerExit"
        assert "code 3" in str(excinfo.value)

    def test_run_single_experiment(self):
        config = parse_config(json.dumps({"schema_version": "1.0", "experiments": COMPONENTS}))
        rows, notes = run_experiment("pnrd", config.experiments["pnrd"], seed=3)

        assert all(row.experiment == "pnrd" for row in rows)
        assert all(row.seed == 3 for row in rows)
        assert notes == {}


@pytest.mark.integration
@pytest.mark.slow
class TestCalibrated(IntegrationTestCaseBase):
    def test_rows_land_in_reference_bands(self):
        report = run_suite(reference_config("calibrated"), jobs=self.jobs)

        graded = [row for row in report.rows if row.status in ("pass", "fail")]
        assert len(graded) >= 7
        assert [row.key for row in graded if row.status == "fail"] == []
        assert 0.00328 <= report.row("hsps", "g2_heralded").value <= 0.00388
        assert 0.9925 <= report.row("hom", "visibility").value <= 0.9975
        assert report.row("source_purity", "purity_mzi").value >= 0.99


@pytest.mark.integration
class TestSweep(IntegrationTestCaseBase):
    def test_relabelled_rows(self):
        config = parse_config(json.dumps({"schema_version": "1.0", "experiments": {"extinction": {}}}))
        report = sweep_suite(config, "experiments.extinction.delta_r", [0.001, 0.01])

        assert report.experiments() == ["extinction[delta_r=0.001]", "extinction[delta_r=0.01]"]
        assert report.metadata["sweep"]["values"] == [0.001, 0.01]
        first = report.row("extinction[delta_r=0.001]", "extinction_db").value
        second = report.row("extinction[delta_r=0.01]", "extinction_db").value
        assert first > second
