"""
Writing and reading the CSV series and JSON reports.

Numbers are written with 17 significant digits so that repeated runs
produce byte-identical files.
"""
import csv
import dataclasses
import json
import logging
import os

logger = logging.getLogger(__name__)

FRAME_COLUMNS = ["t", "lyap", "Bhat", "BL", "B0", "I", "energy_total", "energy_mix",
                 "m_local", "n_local", "eps_sq_local", "sign_uniform"]


def fmt(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    return format(float(value), ".17g")


def _write_rows(path, header, rows):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(x) for x in row])
    logger.info(f"Wrote {len(rows)} rows to {path}")


def frame_header(n):
    header = list(FRAME_COLUMNS)
    for i in range(n):
        header += [f"rho_left_{i}", f"v_left_{i}", f"rho_right_{i}", f"v_right_{i}"]
    return header


def write_frames_csv(path, frames):
    n = len(frames[0].rho_left)
    rows = []
    for fr in frames:
        row = [getattr(fr, name) for name in FRAME_COLUMNS]
        for i in range(n):
            row += [fr.rho_left[i], fr.v_left[i], fr.rho_right[i], fr.v_right[i]]
        rows.append(row)
    _write_rows(path, frame_header(n), rows)


def read_frames_csv(path):
    """Columns of frames.csv as lists of floats, keyed by header name."""
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        columns = {name: [] for name in reader.fieldnames}
        for row in reader:
            for name, value in row.items():
                columns[name].append(float(value) if value != "" else None)
    return columns


def write_json(path, payload):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    if dataclasses.is_dataclass(payload):
        payload = dataclasses.asdict(payload)
    with open(path, "w") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")
    logger.info(f"Wrote {path}")


def read_json(path):
    with open(path) as f:
        return json.load(f)


def write_state_csv(path, state):
    header = ["x"]
    for i in range(state.n):
        header += [f"rho_{i}", f"v_{i}"]
    rows = []
    for k, x in enumerate(state.grid):
        row = [x]
        for i in range(state.n):
            row += [state.rho[i, k], state.v[i, k]]
        rows.append(row)
    _write_rows(path, header, rows)


def write_compare_csv(path, rows):
    _write_rows(path, ["t", "lyap_full", "S0", "field_distance"],
                [[r.t, r.lyap_full, r.S0, r.field_distance] for r in rows])
