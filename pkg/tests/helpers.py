import json
import os
import shutil
import tempfile

INTEGRATION_TEST_JOBS = int(os.getenv("PHOTONBENCH_TEST_JOBS", "2"))


class IntegrationTestCaseBase(object):
    def write_config(self, name, experiments, **top):
        data = {"schema_version": "1.0", "suite": name, "experiments": experiments}
        data.update(top)
        path = os.path.join(self.workdir, "%s.json" % name)
        with open(path, "w") as handle:
            json.dump(data, handle, indent=2)
        return path

    def setup_method(self):
        self.workdir = tempfile.mkdtemp(prefix="photonbench-")
        self.jobs = max(2, INTEGRATION_TEST_JOBS)

    def teardown_method(self):
        shutil.rmtree(self.workdir, ignore_errors=True)
