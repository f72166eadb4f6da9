"""CSV/JSON interchange used by the command-line interface.

The CSV schema is a header ``time,status,x1,...,xp`` followed by one row per
sample. Floats are written with ``repr``, which round-trips every double
exactly, so simulate-then-ingest reproduces the in-memory dataset bit for
bit. JSON output is canonical (sorted keys, fixed separators) so identical
configurations yield byte-identical files.
"""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path

import numpy as np

from .exceptions import SchemaError
from .survival import SurvivalDataset, dataset_from_arrays


def expected_header(p: int) -> list[str]:
    return ["time", "status"] + [f"x{j}" for j in range(1, p + 1)]


def write_survival_csv(path, dataset: SurvivalDataset) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(expected_header(dataset.p))
        for t, d, row in zip(dataset.times, dataset.status, dataset.covariates):
            writer.writerow([repr(float(t)), int(d)] + [repr(float(v)) for v in row])


def read_survival_csv(path) -> SurvivalDataset:
    """Parse the CSV schema, raising ``SchemaError`` on any violation."""
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        if len(header) < 3 or header[:2] != ["time", "status"]:
            raise SchemaError(
                f"{path}: header must start with time,status,x1,... "
                f"got {header[:3]}"
            )
        p = len(header) - 2
        if header != expected_header(p):
            raise SchemaError(f"{path}: covariate columns must be named x1..x{p} in order")
        times, status, rows = [], [], []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != p + 2:
                raise SchemaError(f"{path}:{lineno}: expected {p + 2} fields, got {len(row)}")
            try:
                times.append(float(row[0]))
                covs = [float(v) for v in row[2:]]
            except ValueError as exc:
                raise SchemaError(f"{path}:{lineno}: non-numeric value ({exc})") from None
            if row[1] not in ("0", "1"):
                raise SchemaError(f"{path}:{lineno}: status must be 0 or 1, got {row[1]!r}")
            status.append(int(row[1]))
            rows.append(covs)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return dataset_from_arrays(np.array(times), np.array(status), np.array(rows))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, (frozenset, set)):
        return sorted(obj)
    return obj


def canonical_json(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n"


def write_json(path, obj) -> None:
    with open(path, "w") as fh:
        fh.write(canonical_json(obj))


def config_hash(config: dict) -> str:
    """Stable fingerprint of a resolved configuration."""
    digest = hashlib.sha256(canonical_json(config).encode("utf-8"))
    return digest.hexdigest()[:16]
