"""Deterministic CSV/JSON writers that embed the run configuration.

CSV files start with a single ``# config: {...}`` comment line, then an
RFC 4180 table.  JSON files carry the configuration under ``"config"``.
Floats are written with ``repr`` so re-running a configuration reproduces
the files byte for byte.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

CONFIG_PREFIX = "# config: "


def _clean(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if hasattr(value, "item"):  # numpy scalar
        return _clean(value.item())
    return value


def config_line(config: dict) -> str:
    return CONFIG_PREFIX + json.dumps(_clean(config), sort_keys=True, separators=(",", ":"))


def write_csv(path, columns, rows, config: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(config_line(config) + "\r\n")
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow(["" if v is None else _clean(v) for v in row])
    return path


def write_json(path, payload: dict, config: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = {"config": config, **payload}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_clean(doc), fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")
    return path


def write_records(path_stem, records: list[dict], config: dict, fmt: str, key: str = "rows",
                  extra: dict | None = None) -> Path:
    """Write a list of flat dicts as CSV or JSON (``path_stem`` without suffix)."""
    if fmt == "json":
        return write_json(f"{path_stem}.json", {key: records, **(extra or {})}, config)
    columns = list(records[0]) if records else []
    for rec in records[1:]:
        columns.extend(k for k in rec if k not in columns)
    rows = ([rec.get(c) for c in columns] for rec in records)
    return write_csv(f"{path_stem}.csv", columns, rows, config)


def read_config(path) -> dict:
    """Configuration embedded in a CSV or JSON output."""
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        if path.suffix == ".json":
            return json.load(fh)["config"]
        first = fh.readline().rstrip("\r\n")
    if not first.startswith(CONFIG_PREFIX):
        raise ValueError(f"{path} has no config header")
    return json.loads(first[len(CONFIG_PREFIX):])
