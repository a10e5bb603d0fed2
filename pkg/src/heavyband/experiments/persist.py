"""Study summaries on disk: ``summary.json`` plus a per-replica ``records.csv``.

Floats are written with ``repr`` (shortest round-trip decimal), list cells
are ``;``-joined, and the JSON holds the column types and a SHA-256 of the
CSV bytes.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
from pathlib import Path

import numpy as np

from ..errors import IntegrityError, SchemaVersionError
from .config import ExperimentConfig
from .studies import SCHEMA_VERSION, STUDIES, StudySummary, summarize

SUMMARY_FILE = "summary.json"
RECORDS_FILE = "records.csv"
REPLICA_DIR = "replicas"


def _encode(value, kind: str) -> str:
    if kind == "floats":
        return ";".join(repr(float(x)) for x in value)
    if kind == "float":
        return repr(float(value))
    if kind == "bool":
        return "1" if value else "0"
    return str(value)


def _decode(text: str, kind: str):
    if kind == "floats":
        return [float(x) for x in text.split(";")] if text else []
    if kind == "float":
        return float(text)
    if kind == "int":
        return int(text)
    if kind == "bool":
        return text == "1"
    return text


def records_to_csv(records, columns: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(columns))
    for rec in records:
        w.writerow([_encode(rec[k], t) for k, t in columns.items()])
    return buf.getvalue()


def records_from_csv(text: str, columns: dict) -> list[dict]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != list(columns):
        raise IntegrityError("record columns do not match the summary")
    return [{k: _decode(cell, t) for (k, t), cell in zip(columns.items(), row)} for row in rows[1:]]


def _json_default(x):
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    raise TypeError(f"cannot serialize {type(x).__name__}")


def histogram(values, bins: int = 30) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    v = v[np.isfinite(v)]
    if v.size == 0:
        return np.empty((0, 2))
    counts, edges = np.histogram(v, bins=bins)
    return np.column_stack([(edges[:-1] + edges[1:]) / 2, counts])


def write_histogram(path, values, bins: int = 30) -> None:
    """Two-column text: bin centre, count."""
    np.savetxt(path, histogram(values, bins), fmt=["%.17g", "%d"], header="center count")


def persist(summary: StudySummary, directory) -> Path:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    text = records_to_csv(summary.records, summary.columns)
    data = text.encode()
    (d / RECORDS_FILE).write_bytes(data)
    doc = {
        "schema_version": summary.schema_version,
        "kind": summary.config.kind,
        "config": summary.config.to_dict(),
        "columns": summary.columns,
        "records_sha256": hashlib.sha256(data).hexdigest(),
        "aggregate": summary.aggregate,
        "assertions": summary.assertions,
        "telemetry": summary.telemetry,
    }
    tmp = d / (SUMMARY_FILE + ".tmp")
    tmp.write_text(json.dumps(doc, indent=2, default=_json_default))
    os.replace(tmp, d / SUMMARY_FILE)
    field = STUDIES[summary.config.kind].histogram
    vals = []
    for rec in summary.records:
        x = rec.get(field)
        vals.extend(x if isinstance(x, list) else [x])
    write_histogram(d / f"{field}.dat", vals)
    return d


def load(directory) -> StudySummary:
    d = Path(directory)
    try:
        doc = json.loads((d / SUMMARY_FILE).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise IntegrityError(f"unreadable summary: {exc}") from None
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise SchemaVersionError(f"schema version {doc.get('schema_version')!r}, expected {SCHEMA_VERSION}")
    data = (d / RECORDS_FILE).read_bytes()
    if hashlib.sha256(data).hexdigest() != doc.get("records_sha256"):
        raise IntegrityError("records checksum mismatch")
    records = records_from_csv(data.decode(), doc["columns"])
    return StudySummary(
        ExperimentConfig.from_dict(doc["config"]),
        records,
        doc["columns"],
        doc["aggregate"],
        doc.get("assertions", {}),
        doc.get("telemetry", {}),
        doc["schema_version"],
    )


# -- per-replica files ---------------------------------------------------------------------


def write_replica(directory, index: int, record: dict, columns: dict) -> Path:
    """One replica as a one-row CSV; distinct indices never share a file."""
    d = Path(directory) / REPLICA_DIR
    d.mkdir(parents=True, exist_ok=True)
    path = d / f"replica_{index:07d}.csv"
    tmp = path.with_suffix(".tmp")
    tmp.write_text(records_to_csv([record], columns))
    os.replace(tmp, path)
    return path


def merge_replicas(directory, config: ExperimentConfig) -> StudySummary:
    """Collect replica files in index order and aggregate them."""
    columns = STUDIES[config.kind].columns
    files = sorted((Path(directory) / REPLICA_DIR).glob("replica_*.csv"))
    records = []
    for f in files:
        records.extend(records_from_csv(f.read_text(), columns))
    return summarize(config, records, {"merged_files": len(files)})


def records_equal(a, b) -> bool:
    """Exact equality of record lists, treating NaN as equal to NaN."""
    if len(a) != len(b):
        return False
    for x, y in zip(a, b):
        if x.keys() != y.keys():
            return False
        for k in x:
            u, v = x[k], y[k]
            if isinstance(u, list):
                if len(u) != len(v) or any(not _same(p, q) for p, q in zip(u, v)):
                    return False
            elif not _same(u, v):
                return False
    return True


def _same(u, v) -> bool:
    if isinstance(u, float) or isinstance(v, float):
        u, v = float(u), float(v)
        if math.isnan(u) or math.isnan(v):
            return math.isnan(u) and math.isnan(v)
        return u == v and math.copysign(1.0, u) == math.copysign(1.0, v)
    return u == v
