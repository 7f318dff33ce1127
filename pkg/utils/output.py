"""
UTIL: Output
PURPOSE: Result emission for the CLI (CSV with 17 significant digits, or JSON checked
         against schemas/*.json) to stdout or --out, and loading of state / direction files.
"""

import csv
import dataclasses
import io
import json
import sys
from functools import lru_cache
from pathlib import Path

import jsonschema
import numpy as np

CSV_FLOAT = ".17g"
SCHEMA_DIR = Path(__file__).resolve().parent.parent / "schemas"


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format(float(value), CSV_FLOAT)
    return str(value)


def _plain(obj):
    """JSON-ready copy: dataclasses, numpy scalars and arrays become builtins."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return _plain(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def render_rows(rows: list[dict], columns: tuple[str, ...] | None, fmt: str) -> str:
    """Rows as CSV (header = columns) or a JSON array of records."""
    if fmt == "json":
        return json.dumps(_plain(rows), indent=2) + "\n"
    columns = columns or (tuple(rows[0].keys()) if rows else ())
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _cell(row.get(k)) for k in columns})
    return buf.getvalue()


def render_json(obj) -> str:
    return json.dumps(_plain(obj), indent=2) + "\n"


def emit(text: str, out: str | None = None) -> None:
    """Write to --out (parent directories created) or stdout."""
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def load_json(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def load_directions(path: str) -> np.ndarray:
    """A JSON list of 3-vectors (or {"directions": [...]}) normalized to unit length."""
    data = load_json(path)
    if isinstance(data, dict):
        data = data.get("directions", [])
    e = np.asarray(data, dtype=float)
    if e.ndim != 2 or e.shape[1] != 3 or len(e) == 0:
        raise ValueError(f"{path}: expected a non-empty list of 3-vectors")
    norms = np.linalg.norm(e, axis=1)
    if np.any(norms == 0):
        raise ValueError(f"{path}: zero direction vector")
    return e / norms[:, None]


# ── Schemas ─────────────────────────────────────────────────


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    """schemas/<name>.json, checked against its metaschema once."""
    schema = load_json(str(SCHEMA_DIR / f"{name}.json"))
    jsonschema.Draft202012Validator.check_schema(schema)
    return schema


def validate_report(obj, schema: str):
    """
    JSON-ready copy of obj, validated against schemas/<schema>.json.

    Raises:
        ValueError: the report does not match its schema.
    """
    data = _plain(obj)
    try:
        jsonschema.validate(instance=data, schema=load_schema(schema),
                            cls=jsonschema.Draft202012Validator)
    except jsonschema.ValidationError as e:
        path = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise ValueError(f"{schema} report invalid at {path}: {e.message}") from e
    return data
