"""
Writers for everything the CLI emits.

Data files are deterministic: identical inputs give byte-identical files.
Only run_meta.json may carry a timestamp.
"""

import json
import logging
import math
from datetime import datetime, timezone
from pathlib import Path

import pandas as pd

from dynamics.errors import DomainError
from dynamics.model import PhysicalParams, Protocol, TrajectorySample
from dynamics.moments import average_energy, effective_temperature, z_from_x
from engine.extremals import ExtremalCandidate, candidate_to_dict
from settings.model import SolverSettings

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"  # shortest width that round-trips every double
BOUNDS_COLUMNS = ["gamma", "N", "exact_time", "limiting_time", "relative_gap"]


def ensure_dir(path: str | Path) -> Path:
    directory = Path(path)
    directory.mkdir(parents=True, exist_ok=True)
    return directory


def write_json(data: dict | list, filepath: str | Path) -> Path:
    path = Path(filepath)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, ensure_ascii=False)
        f.write("\n")
    logger.info(f"Wrote {path}")
    return path


def write_protocol(protocol: Protocol, filepath: str | Path) -> Path:
    return write_json(protocol.to_dict(), filepath)


def read_protocol(filepath: str | Path) -> Protocol:
    with open(filepath, encoding="utf-8") as f:
        return Protocol.from_dict(json.load(f))


def write_candidate_table(
    candidates: list[ExtremalCandidate], filepath: str | Path
) -> Path:
    """Every verified candidate, in the given order."""
    return write_json([candidate_to_dict(c) for c in candidates], filepath)


def _write_frame(frame: pd.DataFrame, filepath: str | Path) -> Path:
    path = Path(filepath)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path


def trajectory_frame(
    samples: list[TrajectorySample], params: PhysicalParams | None = None
) -> pd.DataFrame:
    """
    Columns t, x1, x2, u in normalized units.

    With ``params`` the physical time, frequency and mean energy are added.
    """
    frame = pd.DataFrame(
        {
            "t": [s.t for s in samples],
            "x1": [s.state.x1 for s in samples],
            "x2": [s.state.x2 for s in samples],
            "u": [s.u for s in samples],
        }
    )
    if params is not None:
        frame["t_phys"] = frame["t"] / params.omega_h
        frame["omega"] = [math.sqrt(s.u) * params.omega_h for s in samples]
        frame["energy"] = [
            average_energy(z_from_x(s.state, s.u, params), s.u, params) for s in samples
        ]
    return frame


def write_trajectory_csv(
    samples: list[TrajectorySample],
    filepath: str | Path,
    params: PhysicalParams | None = None,
) -> Path:
    return _write_frame(trajectory_frame(samples, params), filepath)


def final_temperature(samples: list[TrajectorySample], params: PhysicalParams) -> float | None:
    """Effective temperature of the endpoint with the trap at omega_c, None below the ground state."""
    last = samples[-1]
    u_cold = (params.omega_c / params.omega_h) ** 2
    energy = average_energy(z_from_x(last.state, u_cold, params), u_cold, params)
    try:
        return effective_temperature(energy, params)
    except DomainError as e:
        logger.warning(f"No effective temperature for the final state: {e}")
        return None


def write_rows_csv(
    rows: list[dict], filepath: str | Path, columns: list[str] | None = None
) -> Path:
    return _write_frame(pd.DataFrame(rows, columns=columns), filepath)


def bounds_frame(reports: list) -> pd.DataFrame:
    """The bounds table, one row per bound report."""
    frame = pd.DataFrame([r.to_dict() for r in reports])
    frame = frame.reindex(columns=BOUNDS_COLUMNS)
    return frame.astype({"N": "Int64"})


def write_bounds_csv(reports: list, filepath: str | Path) -> Path:
    return _write_frame(bounds_frame(reports), filepath)


def write_json_lines(records: list[dict], filepath: str | Path) -> Path:
    path = Path(filepath)
    with open(path, "w", encoding="utf-8") as f:
        for record in records:
            f.write(json.dumps(record, ensure_ascii=False) + "\n")
    logger.info(f"Wrote {len(records)} records to {path}")
    return path


def run_metadata(
    command: str,
    arguments: dict,
    settings: SolverSettings,
    timestamp: bool = True,
) -> dict:
    meta = {
        "command": command,
        "arguments": arguments,
        "settings": settings.to_dict(),
    }
    if timestamp:
        meta["timestamp"] = datetime.now(timezone.utc).isoformat()
    return meta


def write_run_meta(
    directory: str | Path,
    command: str,
    arguments: dict,
    settings: SolverSettings,
    timestamp: bool = True,
) -> Path:
    return write_json(
        run_metadata(command, arguments, settings, timestamp),
        Path(directory) / "run_meta.json",
    )
