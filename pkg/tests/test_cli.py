#!/usr/bin/env python3
"""
Tests for the command-line entry point
"""

import json
import os
import sys

import pytest

sys.path.append(os.path.join(os.path.dirname(__file__), '..'))

import utils.file_utils as file_utils
from main import main
from tests.conftest import SAMPLE_CSV, csv_text

RUNS = {
    "ingest": ["ingest", "--input", SAMPLE_CSV],
    "metrics": ["metrics", "--input", SAMPLE_CSV],
    "stage": ["stage", "--input", SAMPLE_CSV],
    "simulate": ["simulate", "--horizon", "30"],
    "simulate_si": ["simulate", "--model", "si", "--horizon", "10"],
    "sweep": ["sweep", "--sweep", "p_t", "--values", "0.1,0.2,0.3"],
    "scenarios": ["sweep", "--sweep", "scenarios", "--horizon", "20"],
}


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch, tmp_path):
    for key in list(os.environ):
        if key.startswith("EPIKIT_"):
            monkeypatch.delenv(key)
    monkeypatch.chdir(tmp_path)


def read_json(path):
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)


def test_ingest(tmp_path):
    assert main(RUNS["ingest"] + ["--out-dir", str(tmp_path)]) == 0
    report = read_json(tmp_path / "ingest_report.json")["report"]
    assert report["records"] == 10
    assert report["edges"] == 4
    assert report["warning_count"] == 0


def test_ingest_empty_file(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    assert main(["ingest", "--input", str(empty), "--out-dir", str(tmp_path)]) == 2


def test_ingest_dangling_reference(tmp_path):
    data = tmp_path / "dangling.csv"
    data.write_text(csv_text(
        "1,,02/03/2020,,,,,Delhi,DL,,,,,Imported,",
        "2,,03/03/2020,,,,,Delhi,DL,,,P999,,Local,",
    ))
    jsonl = tmp_path / "warnings.jsonl"
    args = ["ingest", "--input", str(data), "--out-dir", str(tmp_path), "--warnings-jsonl", str(jsonl)]
    assert main(args) == 0
    assert read_json(tmp_path / "ingest_report.json")["report"]["warning_count"] == 1
    assert len(jsonl.read_text().splitlines()) == 1


def test_ingest_normalized_output(tmp_path):
    normalized = tmp_path / "normalized.csv"
    assert main(RUNS["ingest"] + ["--out-dir", str(tmp_path), "--normalized-out", str(normalized)]) == 0
    assert normalized.read_text().count("\n") == 11


def test_ingest_later_patient_reference(tmp_path):
    data = tmp_path / "later.csv"
    data.write_text(csv_text(
        "1,,02/03/2020,,,,,Delhi,DL,,,P2,,Local,",
        "2,,03/03/2020,,,,,Delhi,DL,,,,,Imported,",
    ))
    assert main(["ingest", "--input", str(data), "--out-dir", str(tmp_path)]) == 0
    report = read_json(tmp_path / "ingest_report.json")["report"]
    assert report["edges"] == 1
    assert report["warning_count"] == 1
    assert report["warnings"][0]["message"] == "P1 references later patient P2"
    assert report["graph"]["dangling_references"] == 0


def test_metrics_national_reference(tmp_path):
    assert main(RUNS["metrics"] + ["--out-dir", str(tmp_path)]) == 0
    reference = read_json(tmp_path / "national_reference.json")["reference"]
    assert reference["r0"]["value"] == 4.0
    assert reference["r0"]["reference"] == 1.79
    assert reference["r0"]["tolerance"] == 0.15
    assert reference["r0"]["within_tolerance"] is False
    assert reference["cfr_percent"]["value"] == 0.0
    assert reference["cfr_percent"]["relative_deviation"] == pytest.approx(-1.0)


def test_write_failure_exits_with_input_error(tmp_path, monkeypatch):
    def fail(*args, **kwargs):
        raise OSError("disk full")

    monkeypatch.setattr(file_utils, "open", fail, raising=False)
    out_dir = tmp_path / "out"
    assert main(RUNS["sweep"] + ["--out-dir", str(out_dir)]) == 2
    assert list(out_dir.iterdir()) == []


def test_metrics_json(tmp_path):
    assert main(RUNS["metrics"] + ["--out-dir", str(tmp_path), "--format", "json"]) == 0
    rows = read_json(tmp_path / "table2_r0.json")["rows"]
    assert rows[-1]["region"] == "national"
    assert rows[-1]["avg_r0"] == 4.0
    cfr = read_json(tmp_path / "table3_cfr.json")["rows"]
    assert all(row["cfr_percent"] == 0.0 for row in cfr)
    assert (tmp_path / "fig3_r0_extremes.json").exists()
    assert (tmp_path / "fig5_cfr_national.json").exists()


def test_unknown_region(tmp_path):
    assert main(RUNS["metrics"] + ["--out-dir", str(tmp_path), "--region", "Atlantis"]) == 1


def test_stage_outputs(tmp_path):
    assert main(RUNS["stage"] + ["--out-dir", str(tmp_path), "--format", "json"]) == 0
    national = read_json(tmp_path / "table4_states.json")["rows"][-1]
    assert national["state1"] == 6
    assert national["state2"] == 4


def test_india_calibration(tmp_path):
    assert main(["simulate", "--calibrate-india", "--out-dir", str(tmp_path)]) == 0
    report = read_json(tmp_path / "end_time_report.json")["report"]
    assert report["termination_reason"] == "disease_free"
    assert 40 <= report["t_end"] <= 120


def test_sweep_rejects_unordered_values(tmp_path):
    args = ["sweep", "--sweep", "p_t", "--values", "0.3,0.1,0.2", "--out-dir", str(tmp_path)]
    assert main(args) == 1


def test_invalid_parameter(tmp_path):
    assert main(["simulate", "--pt", "1.5", "--out-dir", str(tmp_path)]) == 1


@pytest.mark.parametrize("name", list(RUNS))
def test_reruns_are_byte_identical(tmp_path, name):
    outputs = []
    for run in ("first", "second"):
        out_dir = tmp_path / run
        assert main(RUNS[name] + ["--out-dir", str(out_dir), "--no-timestamp"]) == 0
        outputs.append({p.name: p.read_bytes() for p in sorted(out_dir.iterdir())})
    assert outputs[0]
    assert outputs[0] == outputs[1]


def test_timestamp_present_by_default(tmp_path):
    assert main(RUNS["sweep"] + ["--out-dir", str(tmp_path)]) == 0
    assert "generated_at" in (tmp_path / "sweep_p_t.csv").read_text()


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
