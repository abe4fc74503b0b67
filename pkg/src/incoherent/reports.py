"""JSON/CSV report assembly shared by the command-line tools."""

from __future__ import annotations

import csv
import io
import json
import math
from datetime import datetime, timezone
from importlib import resources

from . import __version__
from .rng import GENERATOR_ID

SCHEMA_NAME = "report-v1"


def manifest(command_line: str, seed=None) -> dict:
    return {
        "command_line": command_line,
        "toolkit_version": __version__,
        "generator": GENERATOR_ID,
        "seed": seed,
        "timestamp": datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ"),
    }


def envelope(kind: str, body: dict, run: dict) -> dict:
    out = {"schema": SCHEMA_NAME, "kind": kind, "manifest": run}
    out.update(body)
    return out


def _check_finite(obj, path="$"):
    if isinstance(obj, float) and not math.isfinite(obj):
        raise ValueError(f"non-finite number at {path}")
    if isinstance(obj, dict):
        for k, v in obj.items():
            _check_finite(v, f"{path}.{k}")
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            _check_finite(v, f"{path}[{i}]")


def to_json(report: dict) -> str:
    _check_finite(report)
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def to_csv(report: dict) -> str:
    """One header line and one data line; nested dicts flatten to ``a_b`` keys."""
    flat = {}

    def walk(prefix, obj):
        for k, v in obj.items():
            key = f"{prefix}{k}"
            if isinstance(v, dict):
                walk(key + "_", v)
            elif isinstance(v, (list, tuple)):
                flat[key] = ";".join(str(x) for x in v)
            else:
                flat[key] = "" if v is None else v

    walk("", report)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(flat), lineterminator="\n")
    writer.writeheader()
    writer.writerow(flat)
    return buf.getvalue()


def load_schema() -> dict:
    text = resources.files("incoherent").joinpath("schemas", f"{SCHEMA_NAME}.schema").read_text()
    return json.loads(text)
