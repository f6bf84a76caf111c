import json

import pandas as pd
import pytest

from bounds.report import BoundReport
from dynamics.simulate import simulate_protocol
from engine.extremals import candidate_to_protocol
from output.writers import (
    BOUNDS_COLUMNS,
    ensure_dir,
    final_temperature,
    read_protocol,
    run_metadata,
    trajectory_frame,
    write_bounds_csv,
    write_candidate_table,
    write_json_lines,
    write_protocol,
    write_rows_csv,
    write_run_meta,
    write_trajectory_csv,
)
from settings.model import DEFAULT_SETTINGS


def test_protocol_json_round_trip(tmp_path, two_segment_protocol):
    path = write_protocol(two_segment_protocol, tmp_path / "protocol.json")
    assert read_protocol(path) == two_segment_protocol


def test_candidate_table(tmp_path, one_switch_candidate):
    path = write_candidate_table([one_switch_candidate], tmp_path / "candidates.json")
    data = json.loads(path.read_text(encoding="utf-8"))
    assert data[0]["branch"] == "+"
    assert data[0]["total_time"] == one_switch_candidate.total_time


def test_trajectory_csv_header_and_precision(tmp_path, two_segment_protocol, start_state):
    samples = simulate_protocol(two_segment_protocol, start_state, sample_dt=0.1)
    path = write_trajectory_csv(samples, tmp_path / "trajectory.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == "t,x1,x2,u"
    assert len(lines) == len(samples) + 1

    frame = pd.read_csv(path, float_precision="round_trip")
    assert frame["x1"].iloc[-1] == samples[-1].state.x1
    assert frame["x2"].tolist() == [s.state.x2 for s in samples]


def test_trajectory_physical_columns(two_segment_protocol, start_state, params_gamma2):
    samples = simulate_protocol(two_segment_protocol, start_state)
    frame = trajectory_frame(samples, params_gamma2)
    assert list(frame.columns) == ["t", "x1", "x2", "u", "t_phys", "omega", "energy"]
    assert frame["omega"].iloc[0] == pytest.approx(0.25)
    assert frame["t_phys"].iloc[-1] == pytest.approx(two_segment_protocol.total_time)


def test_final_temperature_on_target(one_switch_candidate, problem_gamma2, params_gamma2, start_state):
    samples = simulate_protocol(candidate_to_protocol(one_switch_candidate, problem_gamma2), start_state)
    assert final_temperature(samples, params_gamma2) == pytest.approx(
        params_gamma2.cold_temperature, rel=1e-6
    )


def test_writes_are_deterministic(tmp_path, two_segment_protocol, start_state):
    samples = simulate_protocol(two_segment_protocol, start_state)
    first = write_trajectory_csv(samples, tmp_path / "a.csv").read_bytes()
    second = write_trajectory_csv(samples, tmp_path / "b.csv").read_bytes()
    assert first == second


def test_rows_csv(tmp_path):
    rows = [{"gamma": 2.0, "n": 0, "total_time": 2.0575}, {"gamma": 4.0, "n": 0, "total_time": 4.1}]
    path = write_rows_csv(rows, tmp_path / "sweep.csv")
    assert path.read_text().splitlines()[0] == "gamma,n,total_time"


def test_bounds_csv(tmp_path):
    reports = [
        BoundReport(100.0, 4.15, 5.15, 5, limiting_time=24.0, exact_time=25.0, relative_gap=1 / 24),
        BoundReport(1.5, -1.45, -0.45, None),
    ]
    path = write_bounds_csv(reports, tmp_path / "bounds.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(BOUNDS_COLUMNS)
    assert lines[1].startswith("100,5,25,24,")
    assert lines[2] == "1.5,,,,"


def test_json_lines(tmp_path):
    path = write_json_lines([{"a": 1}, {"γ": 2.0}], tmp_path / "out.jsonl")
    lines = path.read_text(encoding="utf-8").splitlines()
    assert [json.loads(line) for line in lines] == [{"a": 1}, {"γ": 2.0}]


def test_run_meta_timestamp_optional(tmp_path):
    assert "timestamp" in run_metadata("solve", {}, DEFAULT_SETTINGS)
    assert "timestamp" not in run_metadata("solve", {}, DEFAULT_SETTINGS, timestamp=False)

    path = write_run_meta(tmp_path, "solve", {"gamma": 2.0}, DEFAULT_SETTINGS, timestamp=False)
    data = json.loads(path.read_text(encoding="utf-8"))
    assert data["command"] == "solve"
    assert data["settings"]["endpoint_atol"] == DEFAULT_SETTINGS.endpoint_atol


def test_ensure_dir(tmp_path):
    nested = ensure_dir(tmp_path / "a" / "b")
    assert nested.is_dir()
