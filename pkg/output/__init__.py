"""
File formats: protocol and candidate JSON, trajectory/sweep/bounds CSV,
JSON lines and run metadata.
"""

from .writers import (
    ensure_dir,
    read_protocol,
    trajectory_frame,
    write_bounds_csv,
    write_candidate_table,
    write_json,
    write_json_lines,
    write_protocol,
    write_rows_csv,
    write_run_meta,
    write_trajectory_csv,
)

__all__ = [
    "ensure_dir",
    "read_protocol",
    "trajectory_frame",
    "write_bounds_csv",
    "write_candidate_table",
    "write_json",
    "write_json_lines",
    "write_protocol",
    "write_rows_csv",
    "write_run_meta",
    "write_trajectory_csv",
]
