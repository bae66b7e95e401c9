"""CSV / JSON writers for figure-ready tables, plus the tomography record format."""

from __future__ import annotations

import csv
import json
from pathlib import Path

from .tomography import TomographyRecord

RECORD_COLUMNS = ("projector", "counts", "duration_s")


def fmt(x):
    """12 significant digits for floats; other values unchanged."""
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, float):
        return float(f"{x:.12g}")
    return x


def _cell(x) -> str:
    if isinstance(x, float):
        return f"{x:.12g}"
    if isinstance(x, bool):
        return str(int(x))
    return str(x)


def write_table(path: Path, columns, rows, fmt_name: str = "csv") -> Path:
    """Write ``rows`` (sequences aligned with ``columns``) as CSV or a JSON record array."""
    path = Path(path)
    if fmt_name == "json":
        path = path.with_suffix(".json")
        records = [{c: fmt(v) for c, v in zip(columns, row)} for row in rows]
        path.write_text(json.dumps(records, indent=1) + "\n")
    else:
        path = path.with_suffix(".csv")
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(columns)
            for row in rows:
                w.writerow([_cell(v) for v in row])
    return path


def read_table(path: Path) -> list[dict]:
    path = Path(path)
    if path.suffix == ".json":
        return json.loads(path.read_text())
    with path.open(newline="") as fh:
        return list(csv.DictReader(fh))


def write_records(path: Path, records) -> Path:
    rows = [(r.projector, r.counts, float(r.duration)) for r in records]
    return write_table(path, RECORD_COLUMNS, rows, "csv")


def read_records(path: Path) -> list[TomographyRecord]:
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != RECORD_COLUMNS:
            raise ValueError(f"record file must have columns {','.join(RECORD_COLUMNS)}")
        return [
            TomographyRecord(row["projector"], int(row["counts"]), float(row["duration_s"]))
            for row in reader
        ]
