#!/usr/bin/env python3
"""
EpiKit
Runs ingest, metrics, staging, simulation and sweeps for one RunConfig
and writes their reports and plot-data files.
"""

import logging
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from models.anchors import load_reference_anchors
from models.base import CompartmentState
from models.end_time import EndTimeReport, india_calibration_setup, sir_end_time
from models.integrator import Trajectory, integrate
from models.si import si_closed_form_series
from models.sis import sis_equilibria
from utils.case_series import daily_counts
from utils.config import RunConfig
from utils.contact_graph import ContactGraph, build_contact_graph, graph_stats
from utils.empirical import (
    Scenario,
    ScenarioRun,
    SweepBase,
    SweepParameter,
    SweepResult,
    SweepSpec,
    fatality_recovery_scenarios,
    run_sweep,
)
from utils.errors import OutputError
from utils.file_utils import (
    ensure_output_directory,
    format_metadata,
    output_path,
    save_json_output,
    save_series,
    save_table,
    save_text,
)
from utils.metrics import daily_extremes, reference_check, table2_rows, table3_rows
from utils.record_parser import (
    ParseWarning,
    PatientRecord,
    parse_dataset,
    read_text_input,
    region_aliases,
    resolve_region,
    serialize_records,
    warnings_to_jsonl,
)
from utils.staging import StateAssignment, classify_states, daily_state_counts, state_summary

logger = logging.getLogger(__name__)

DEFAULT_SWEEP_VALUES = {
    SweepParameter.SUSCEPTIBLE_PCT: [25.0, 50.0, 75.0, 100.0],
    SweepParameter.INFECTIOUS_PCT: [10.0, 20.0, 30.0, 40.0],
    SweepParameter.R_C: [0.5, 1.0, 1.5, 2.0],
    SweepParameter.P_T: [0.1, 0.2, 0.3, 0.4, 0.5],
    SweepParameter.POPULATION: [250.0, 500.0, 750.0, 1000.0],
}


class EpiKit:
    def __init__(self, config: RunConfig):
        self.config = config
        self.output_dir = config.out_dir
        ensure_output_directory(self.output_dir)
        self._records: Optional[List[PatientRecord]] = None
        self._warnings: List[ParseWarning] = []
        self._graph: Optional[ContactGraph] = None

    def load_records(self) -> Tuple[List[PatientRecord], ContactGraph]:
        """Parse the input once and build its contact graph."""
        if self._records is None:
            text = read_text_input(self.config.input)
            self._records, self._warnings = parse_dataset(text, iso_dates=self.config.iso_dates)
            self._graph = build_contact_graph(self._records)
            if self.config.warnings_jsonl:
                _written(save_text(warnings_to_jsonl(self.warnings), self.config.warnings_jsonl),
                         self.config.warnings_jsonl)
        return self._records, self._graph

    @property
    def warnings(self) -> List[ParseWarning]:
        graph_warnings = self._graph.warnings if self._graph is not None else []
        return sorted(self._warnings + graph_warnings, key=lambda w: (w.line, w.field))

    def region(self) -> Optional[str]:
        if self.config.region is None:
            return None
        records, _ = self.load_records()
        return resolve_region(self.config.region, region_aliases(records))

    def metadata(self, command: str, **extra) -> Dict:
        return format_metadata(command, self.config.effective_parameters(),
                               include_timestamp=not self.config.no_timestamp, **extra)

    def _path(self, name: str, fmt: Optional[str] = None) -> str:
        return output_path(self.output_dir, name, fmt or self.config.format)

    def _save_table(self, name: str, rows: List[Dict], metadata: Dict) -> str:
        path = self._path(name)
        return _written(save_table(rows, path, self.config.format, metadata), path)

    def _save_series(self, name: str, frame: pd.DataFrame, metadata: Dict) -> str:
        path = self._path(name)
        return _written(save_series(frame, path, self.config.format, metadata), path)

    def _save_json(self, name: str, data: Dict) -> str:
        path = self._path(name, "json")
        return _written(save_json_output(data, path), path)

    def ingest(self) -> Dict:
        """Validation report: record count, warnings and graph statistics."""
        records, graph = self.load_records()
        report = {
            "records": len(records),
            "edges": graph.edge_count,
            "warning_count": len(self.warnings),
            "warnings": [w.as_dict() for w in self.warnings],
            "graph": graph_stats(graph),
        }
        region = self.region()
        if region is not None:
            series = daily_counts(records, region)
            report["region"] = {"id": region, "cases": int(series["new_cases"].sum())}
        self._save_json("ingest_report", {"metadata": self.metadata("ingest"), "report": report})
        if self.config.normalized_out:
            _written(save_text(serialize_records(records, iso_dates=self.config.iso_dates),
                               self.config.normalized_out), self.config.normalized_out)
        return report

    def metrics(self) -> Dict:
        """Contact-histogram and fatality tables plus the daily extreme series."""
        records, graph = self.load_records()
        region = self.region()
        regions = [region] if region is not None else None
        metadata = self.metadata("metrics")

        table2 = table2_rows(graph, regions, k_max=self.config.k_max, as_of=self.config.as_of)
        table3 = table3_rows(records, regions, as_of=self.config.as_of)
        paths = [
            self._save_table("table2_r0", table2, metadata),
            self._save_table("table3_cfr", table3, metadata),
            self._save_series("daily_cases", daily_counts(records, region), metadata),
        ]
        extremes = {}
        for figure, metric in (("fig3", "r0"), ("fig5", "cfr")):
            frame = daily_extremes(records, graph, metric)
            extremes[metric] = frame
            paths.append(self._save_series(f"{figure}_{metric}_extremes", frame, metadata))
            for column, label in (("min_region_value", "min"), ("max_region_value", "max"),
                                  ("national_value", "national")):
                series = frame[[column]].rename(columns={column: "value"})
                paths.append(self._save_series(f"{figure}_{metric}_{label}", series, metadata))
        reference = national_reference(table2, table3)
        paths.append(self._save_json("national_reference", {"metadata": metadata, "reference": reference}))
        return {"table2": table2, "table3": table3, "extremes": extremes,
                "reference": reference, "paths": paths}

    def stage(self) -> Dict:
        """Transmission-state table and the cumulative daily state series."""
        records, graph = self.load_records()
        region = self.region()
        if region is not None:
            records = [r for r in records if r.region == region]
        assignment: StateAssignment = classify_states(records, graph)
        summary = state_summary(assignment, records)
        reference = {"percent": load_reference_anchors("transmission_states_percent"),
                     "total": load_reference_anchors("transmission_states_total")}
        metadata = self.metadata("stage", reference=reference)
        paths = [
            self._save_table("table4_states", summary, metadata),
            self._save_series("fig6_states", daily_state_counts(records, assignment), metadata),
        ]
        return {"assignment": assignment, "summary": summary, "paths": paths}

    def simulate(self) -> Dict:
        """Integrate the selected model; SIR runs also get an end-time report."""
        config = self.config
        if config.calibrate_india:
            setup = india_calibration_setup(config.dt, config.foi_scaling)
            params, init = setup.params, setup.init
            eps_i, eps_deriv, horizon, model = setup.eps_i, setup.eps_deriv, setup.horizon, "sir"
            extra = {"calibration": load_reference_anchors("india_calibration")}
        else:
            params = config.model_params()
            init = CompartmentState.initial(m=config.population, i0=config.i0)
            eps_i, eps_deriv, horizon, model = config.eps_i, config.eps_deriv, config.horizon, config.model
            extra = {}

        trajectory: Trajectory = integrate(model, params, init, dt=config.dt, horizon=horizon)
        metadata = self.metadata("simulate", trajectory=trajectory.metadata(), **extra)
        paths = [self._save_table(f"trajectory_{model}", trajectory.to_rows(), metadata)]
        result = {"trajectory": trajectory, "paths": paths}

        if model == "sir":
            report: EndTimeReport = sir_end_time(params, init, eps_i=eps_i, eps_deriv=eps_deriv,
                                                 horizon=horizon, dt=config.dt)
            paths.append(self._save_json("end_time_report", {"metadata": metadata, "report": report.as_dict()}))
            result["end_time"] = report
        elif model == "si":
            closed = _si_closed_form_rows(init, params.tau, trajectory.times)
            paths.append(self._save_table("si_closed_form", closed, metadata))
        elif model == "sis" and params.tau > 0:
            equilibria = sis_equilibria(init.m, params.tau, params.alpha_sis)
            paths.append(self._save_json("sis_equilibria", {
                "metadata": metadata,
                "equilibria": [{"i": p, "stable": equilibria.stable[p]} for p in equilibria.points]}))
            result["equilibria"] = equilibria
        return result

    def sweep(self) -> Dict:
        """Parameter sweep of the total-infected estimate, or the ramp scenarios."""
        config = self.config
        params = config.model_params()
        anchors = load_reference_anchors("empirical")
        if config.sweep == "scenarios":
            init = CompartmentState.initial(m=config.population, i0=config.i0)
            runs: Dict[Scenario, ScenarioRun] = fatality_recovery_scenarios(
                params, init, horizon=config.horizon, dt=config.dt,
                recovery_slope=config.recovery_slope, fatality_slope=config.fatality_slope)
            paths = []
            for scenario, run in runs.items():
                metadata = self.metadata("sweep", scenario=run.metadata())
                frame = run.series().set_index("t")
                paths.append(self._save_series(f"scenario_{scenario.value}", frame, metadata))
            return {"scenarios": runs, "paths": paths}

        parameter = SweepParameter(config.sweep or SweepParameter.SUSCEPTIBLE_PCT.value)
        values = config.values or DEFAULT_SWEEP_VALUES[parameter]
        base = SweepBase(params=params, population=config.population, i0=config.i0,
                         infectious=config.infectious, susceptible=config.susceptible)
        result: SweepResult = run_sweep(SweepSpec(parameter, values, base), jobs=config.jobs)
        metadata = self.metadata("sweep", reference=anchors, **result.metadata())
        path = self._save_table(f"sweep_{parameter.value}", result.to_rows(), metadata)
        return {"sweep": result, "paths": [path]}


def _si_closed_form_rows(init: CompartmentState, tau: float, times: np.ndarray) -> List[Dict]:
    """SI closed form on the trajectory grid, scaled back to persons."""
    fraction = si_closed_form_series(init.i / init.m, tau, times)
    return [{"t": float(t), "I": float(init.m * f)} for t, f in zip(times, fraction)]


def _written(ok: bool, path: str) -> str:
    if not ok:
        raise OutputError(f"Failed to write {path}")
    return path


def national_reference(table2: List[Dict], table3: List[Dict]) -> Dict:
    """Pooled national R0 and CFR next to the published national values."""
    anchors = load_reference_anchors("national_metrics")
    tolerance = anchors["tolerance_fraction"]
    return {
        "r0": reference_check(table2[-1]["avg_r0"], anchors["r0"], tolerance),
        "cfr_percent": reference_check(table3[-1]["cfr_percent"], anchors["cfr_percent"], tolerance),
    }
