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
Run the experiments of a configuration and collect their metrics in a
BenchmarkReport. Experiments may run in worker processes; every experiment
draws its randomness from a seed derived from the suite seed and its name, so
the report body does not depend on how the work was scheduled.
"""

import collections
import datetime
import multiprocessing
import platform
import time
import traceback

import numpy as np
import scipy

from photonbench import benchmarks, components, counting, detectors, spectral
from photonbench.errors import ExperimentError
from photonbench.helpers import derive_seed
from photonbench.logger import default_logger
from photonbench.report import BenchmarkReport, ReportRow, apply_targets, load_targets
from photonbench.version import VERSION

__all__ = ["EXPERIMENTS", "SourceDesign", "build_source", "run_experiment", "run_suite", "sweep_suite"]

POLL_INTERVAL = 0.05

SourceDesign = collections.namedtuple("SourceDesign", ["name", "build", "purity", "notes"])


def _noise(section):
    fields = benchmarks.NoiseConfig._fields
    return benchmarks.NoiseConfig(**dict((key, section[key]) for key in fields if key in section))


def _spam(section, mode, seed):
    result = benchmarks.spam_experiment(
        _noise(section), section["shots"], seed, mode, section["resamples"]
    )
    rows = [("average_fidelity", result.average, result.error)]
    rows += [("fidelity_%s" % label, value, None) for label, value in result.fidelities.items()]
    return rows, {}


def _chip_to_chip(section, mode, seed):
    channel = benchmarks.ChannelNoise(
        section["epsilon"], section["depolarization"], section["channel_transmission"]
    )
    result = benchmarks.chip_to_chip_experiment(
        channel, _noise(section), section["shots"], seed, mode, section["resamples"]
    )
    return [
        ("process_fidelity", result.process_fidelity, result.error),
        ("average_gate_fidelity", result.average_gate_fidelity, 2.0 * result.error / 3.0),
        ("choi_fidelity", result.choi_fidelity, None),
    ], {}


def _grid(section):
    return spectral.FrequencyGrid.for_linewidth(
        section["linewidth_ghz"], section["span_linewidths"], section["points"]
    )


def build_source(section, seed, design=None):
    """
    Design a pair source from a spectral section: a single ring with a given or
    optimized pump, an MZI-coupled ring or an optimized cascade. The returned
    ``build(delta_ghz)`` gives the JSA with every resonance shifted by delta.
    """

    design = design or section["design"]
    grid = _grid(section)
    ring = spectral.ResonatorParams(linewidth_ghz=section["linewidth_ghz"])

    if design == "single_ring":
        bandwidth = section.get("pump_bandwidth_ghz")
        if bandwidth:
            pump = spectral.PumpSpectrum(bandwidth)
            purity = spectral.build_single_ring_jsa(ring, pump, grid).purity()
        else:
            pump, purity = spectral.optimize_pump_bandwidth(
                lambda p: spectral.build_single_ring_jsa(ring, p, grid), ring.linewidth_ghz
            )
        return SourceDesign(
            design,
            lambda delta: spectral.build_single_ring_jsa(ring.shifted(delta), pump, grid),
            purity,
            {"pump_bandwidth_ghz": pump.bandwidth_ghz},
        )

    if design == "mzi":
        found = spectral.design_mzi_coupled(ring, grid, target=section.get("target", 0.99))
        return SourceDesign(
            design,
            lambda delta: spectral.build_mzi_coupled_jsa(found.params.shifted(delta), found.pump, grid),
            found.purity,
            {
                "pump_bandwidth_ghz": found.pump.bandwidth_ghz,
                "pump_linewidth_ghz": float(found.params.pump_linewidth),
                "target_met": bool(found.target_met),
            },
        )

    found = spectral.optimize_cascade(
        ring, grid, section["cascade_size"], section["restarts"], seed, section["rounds"]
    )
    return SourceDesign(
        "cascade",
        lambda delta: spectral.build_cascaded_jsa(
            [resonator.shifted(delta) for resonator in found.resonators], found.weights, found.pump, grid
        ),
        found.purity,
        {"pump_bandwidth_ghz": found.pump.bandwidth_ghz, "restart": int(found.restart)},
    )


def _hom(section, mode, seed):
    noise = _noise(section)
    delays = section["delays_ps"]

    notes = {}
    if section["source"]:
        source = build_source(section, seed, section["source"])
        state = spectral.heralded_state(source.build(0.0))
        result = benchmarks.hom_experiment(
            state, state, delays_ps=delays, noise=noise, shots=section["shots"], seed=seed, mode=mode
        )
        notes = {"source": source.name, "purity": float(source.purity)}
    else:
        overlap = section["indistinguishability"]
        result = benchmarks.hom_experiment(
            indistinguishability=1.0 if overlap is None else overlap,
            delays_ps=delays,
            noise=noise,
            shots=section["shots"],
            seed=seed,
            mode=mode,
        )

    rows = [
        ("visibility", result.best_visibility, result.error),
        ("indistinguishability", float(np.max(result.indistinguishability)), None),
    ]
    if len(delays) > 1:
        rows += [
            ("visibility_at_%gps" % delay, float(value), None)
            for delay, value in zip(result.delays_ps, result.visibility)
        ]
    return rows, notes


def _fusion(section, mode, seed):
    result = benchmarks.fusion_experiment(
        _noise(section),
        section["indistinguishability"],
        section["shots"],
        seed,
        mode,
        section["resamples"],
    )
    rows = [
        ("fidelity", result.fidelity, result.error),
        ("success_probability", result.success_probability, None),
    ]
    return rows, {"bell_map": dict(result.bell_map)}


def _hsps(section, mode, seed):
    herald_noise = section["herald_noise"]
    signal_noise = section["signal_noise"]
    if section["pump_photons_per_pulse"] is not None:
        leaked = counting.noise_from_suppression(
            section["pump_photons_per_pulse"], section["suppression_db"]
        )
        herald_noise += leaked
        signal_noise += leaked

    herald_detector = None
    if section["herald_detector"] == "pnrd":
        herald_detector = detectors.PnrdModel.equal_cells(section["pnrd_cells"])

    chain = counting.HspsChain(
        counting.TmsvSource(section["mu"]),
        herald_efficiency=section["herald_efficiency"],
        signal_efficiency=section["signal_efficiency"],
        herald_noise=herald_noise,
        signal_noise=signal_noise,
        repetition_rate=section["repetition_rate"],
        herald_detector=herald_detector,
    )

    notes = {}
    if mode == "exact":
        rates = counting.exact_rates(chain)
        rows = [
            ("car", rates.car, None),
            ("klyshko_signal", rates.klyshko_signal, None),
            ("klyshko_herald", rates.klyshko_herald, None),
            ("g2_heralded", rates.g2_heralded, None),
            ("herald_rate_hz", rates.herald * chain.repetition_rate, None),
        ]
    else:
        result = counting.simulate_hsps(chain, section["pulses"], seed)
        values = counting.metrics(result, chain)
        rows = [(name, estimate.value, estimate.error) for name, estimate in values.items()]
        rows.append(("herald_rate_hz", result.herald * chain.repetition_rate / result.pulses, None))
        if values["car_adjacent"].lower_bound:
            notes["car_adjacent"] = "lower bound, no accidentals observed"

    if 0.0 < chain.mu <= counting.ANALYTIC_MU_LIMIT:
        analytic = counting.analytic_small_mu(chain)
        rows += [
            ("analytic_car", analytic["car"], None),
            ("analytic_klyshko", analytic["klyshko"], None),
            ("analytic_g2", analytic["g2"], None),
        ]
    return rows, notes


def _source_purity(section, mode, seed):
    source = build_source(section, seed)
    notes = dict(source.notes)
    rows = [("purity_%s" % source.name, source.purity, None)]
    if source.name == "mzi":
        rows.append(
            ("pump_linewidth_ratio", notes["pump_linewidth_ghz"] / section["linewidth_ghz"], None)
        )
    return rows, notes


def _detuning(section, mode, seed):
    linewidth = section["linewidth_ghz"]
    deltas = np.linspace(-1.0, 1.0, section["steps"]) * section["max_shift_linewidths"] * linewidth
    step = float(deltas[1] - deltas[0])

    widths = collections.OrderedDict()
    for design in ("single_ring", "cascade"):
        source = build_source(section, seed, design)
        widths[design] = spectral.detuning_sweep(source.build, deltas).half_width

    notes = {}
    reference = widths["single_ring"]
    if reference == 0.0:
        # the single-ring window is below the sweep resolution
        reference = step
        notes["window_ratio"] = "lower bound, single-ring window below one step"

    rows = [
        ("single_ring_half_width_ghz", widths["single_ring"], None),
        ("cascade_half_width_ghz", widths["cascade"], None),
        ("window_ratio", widths["cascade"] / reference, None),
    ]
    return rows, notes


def _filter(section, mode, seed):
    bands = components.default_bands(
        section["separation_ghz"], section["pump_width_ghz"], section["photon_width_ghz"]
    )
    targets = components.FilterTargets(section["rejection_db"], section["insertion_loss_db"])

    if section["network"]:
        network = components.FilterNetwork(
            [
                (
                    components.make_element(stage["kind"], stage["params"]),
                    tuple(stage["route"]) if stage["route"] else None,
                )
                for stage in section["network"]
            ]
        )
        design = components.grade_filter(network, bands, targets)
    elif section["optimize"]:
        design = components.optimize_filter(
            bands,
            seed,
            tuple(section["topology"]),
            targets,
            section["separation_ghz"],
            section["restarts"],
            section["rounds"],
        )
    else:
        network = components.reference_filter(section["separation_ghz"], tuple(section["topology"]))
        design = components.grade_filter(network, bands, targets)

    stops = [metric for metric in design.metrics.values() if metric.kind == "stop"]
    passes = [metric for metric in design.metrics.values() if metric.kind == "pass"]
    rows = [
        ("pump_rejection_db", min(metric.rejection_db for metric in stops), None),
        ("max_insertion_loss_db", max(metric.insertion_loss_db for metric in passes), None),
        ("score", design.score, None),
    ]
    return rows, {"target_met": bool(design.target_met)}


def _pnrd(section, mode, seed):
    options = {"dark_rate": section["dark_rate"], "gate_window": section["gate_window"]}
    if section["profile"] == "equal":
        model = detectors.PnrdModel.equal_cells(
            section["cells"], total_absorption=section["total_efficiency"], **options
        )
    else:
        model = detectors.PnrdModel.with_exponential_profile(
            section["cells"], section["total_efficiency"], section["decay"], **options
        )

    levels = model.level_distribution(section["photons"])
    povm = detectors.pnrd_povm(model)
    rows = [("efficiency", detectors.pnrd_efficiency(model), None)]
    rows += [("p_level_%d" % level, float(p), None) for level, p in enumerate(levels)]
    rows.append(("povm_completeness_error", float(np.abs(povm.sum(axis=0) - 1.0).max()), None))
    return rows, {}


def _extinction(section, mode, seed):
    delta_r = section["delta_r"]
    return [
        ("extinction_db", components.mzi_extinction(delta_r), None),
        ("extinction_analytic_db", components.mzi_extinction_analytic(delta_r), None),
    ], {}


def _loss_budget(section, mode, seed):
    budget = components.loss_budget(section["items"])
    rows = [
        ("loss_%d_%s_db" % (index, item.kind), loss, None)
        for index, (item, loss) in enumerate(zip(budget.items, budget.item_losses_db))
    ]
    rows.append(("total_db", budget.total_db, None))
    return rows, {}


EXPERIMENTS = {
    "spam": _spam,
    "spam_bright": _spam,
    "chip_to_chip": _chip_to_chip,
    "hom": _hom,
    "fusion": _fusion,
    "hsps": _hsps,
    "source_purity": _source_purity,
    "detuning": _detuning,
    "filter": _filter,
    "pnrd": _pnrd,
    "extinction": _extinction,
    "loss_budget": _loss_budget,
}


def _execute(name, section, mode, suite_seed, config_hash):
    seed = derive_seed(suite_seed, name)
    values, notes = EXPERIMENTS[name](section, mode, seed)
    rows = [
        ReportRow(name, metric, value, error, config_hash=config_hash, seed=suite_seed)
        for metric, value, error in values
    ]
    return rows, notes


def run_experiment(name, section, mode="exact", seed=0, config_hash=""):
    """
    Run one configured experiment.

    :return: (list of ReportRow, dict of notes)
    :raises ExperimentError: naming the experiment and the original error
    """

    started = time.time()
    try:
        outcome = _execute(name, section, mode, seed, config_hash)
    except Exception as ex:
        raise ExperimentError(name, str(ex), type(ex).__name__)
    default_logger.debug("Experiment %s done in %.2f s" % (name, time.time() - started))
    return outcome


def _worker(name, section, mode, seed, config_hash, result_queue):
    started = time.time()
    try:
        rows, notes = _execute(name, section, mode, seed, config_hash)
        result_queue.put((name, (rows, notes, time.time() - started), None))
    except Exception as ex:
        # tracebacks do not pickle, send them as text
        result_queue.put((name, None, (type(ex).__name__, str(ex), traceback.format_exc())))


def _run_parallel(tasks, jobs):
    ctx = multiprocessing.get_context(multiprocessing.get_start_method())
    result_queue = ctx.SimpleQueue()
    pending = list(tasks)
    running = {}
    finished = {}
    results = {}
    errors = []

    def drain():
        while not result_queue.empty():
            name, outcome, error = result_queue.get()
            if error is None:
                results[name] = outcome
            else:
                errors.append((name, error))

    def reap():
        for name, process in list(running.items()):
            if not process.is_alive():
                process.join()
                finished[name] = process.exitcode
                del running[name]

    while running or pending:
        time.sleep(POLL_INTERVAL)
        reap()
        drain()
        if errors:
            # stop scheduling after the first failure
            pending = []

        while len(running) < jobs and pending:
            task = pending.pop(0)
            process = ctx.Process(target=_worker, args=task + (result_queue,))
            process.start()
            running[task[0]] = process
    drain()

    if errors:
        name, (cause, message, text) = errors[0]
        default_logger.debug("Worker traceback for %s:\n%s" % (name, text))
        raise ExperimentError(name, message, cause)

    # a worker killed before reporting leaves only its exit code behind
    for name in sorted(finished):
        if name not in results:
            raise ExperimentError(
                name, "worker exited with code %s without a result" % finished[name], "WorkerExit"
            )

    return results


def _run_sequential(tasks):
    results = {}
    for task in tasks:
        started = time.time()
        rows, notes = run_experiment(*task)
        results[task[0]] = (rows, notes, time.time() - started)
    return results


def run_suite(config, seed_override=None, jobs=1, targets=None):
    """
    Execute every experiment of ``config`` and grade the rows against the
    reference targets.

    :param config: ExperimentConfig
    :param seed_override: seed used instead of the configured one
    :param jobs: number of worker processes; 1 runs in this process
    :param targets: targets keyed by ``experiment.metric``, the packaged ones by default
    :return: BenchmarkReport
    """

    if seed_override is not None:
        config = config.with_seed(seed_override)
    jobs = max(1, int(jobs))
    digest = config.config_hash

    started_at = datetime.datetime.now(datetime.timezone.utc).replace(microsecond=0).isoformat()
    started = time.time()

    tasks = [
        (name, section, config.mode, config.seed, digest)
        for name, section in sorted(config.experiments.items())
    ]
    default_logger.info(
        "Running suite %s: %d experiment(s), seed %d, %d job(s)"
        % (config.suite, len(tasks), config.seed, jobs)
    )

    if jobs == 1 or len(tasks) == 1:
        results = _run_sequential(tasks)
    else:
        results = _run_parallel(tasks, min(jobs, len(tasks)))

    rows = []
    notes = collections.OrderedDict()
    timings = collections.OrderedDict()
    for name in sorted(results):
        experiment_rows, experiment_notes, elapsed = results[name]
        rows.extend(experiment_rows)
        if experiment_notes:
            notes[name] = experiment_notes
        timings[name] = round(elapsed, 3)

    rows = apply_targets(rows, load_targets() if targets is None else targets)

    metadata = collections.OrderedDict(
        [
            ("seed", config.seed),
            ("config_hash", digest),
            ("mode", config.mode),
            ("jobs", jobs),
            (
                "versions",
                collections.OrderedDict(
                    [
                        ("photonbench", VERSION),
                        ("numpy", np.__version__),
                        ("scipy", scipy.__version__),
                        ("python", platform.python_version()),
                    ]
                ),
            ),
            ("started", started_at),
            ("wall_time_s", round(time.time() - started, 3)),
            ("timings_s", timings),
        ]
    )
    return BenchmarkReport(config.suite, rows, metadata, notes)


def sweep_suite(config, field, values, seed_override=None, jobs=1, targets=None):
    """
    Rerun ``config`` once per value of the dotted ``field``. Rows keep their
    grading and are relabelled ``experiment[key=value]`` in sweep order.
    """

    key = field.split(".")[-1]
    rows = []
    notes = collections.OrderedDict()
    metadata = None
    for value in values:
        report = run_suite(config.replaced(field, value), seed_override, jobs, targets)
        label = "%s=%s" % (key, value)
        rows += [row._replace(experiment="%s[%s]" % (row.experiment, label)) for row in report.rows]
        for name, entry in report.notes.items():
            notes["%s[%s]" % (name, label)] = entry
        metadata = metadata or report.metadata
    metadata["sweep"] = collections.OrderedDict([("field", field), ("values", list(values))])
    return BenchmarkReport(config.suite, rows, metadata, notes)
