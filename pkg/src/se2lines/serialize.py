"""Bit-stable CSV/JSON emission: every float is printed with 17 significant digits."""

from __future__ import annotations

import enum
import json
import math
from typing import Any, Iterable, Sequence

import numpy as np

SCHEMA_VERSION = 1
GEODESIC_COLUMNS = ("t", "theta", "x", "y", "p_theta", "P_u", "P_v", "H", "kappa")


def format_float(v: float) -> str:
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(v, ".17g")


def _cell(v: Any) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format_float(float(v))
    if v is None:
        return ""
    return str(v)


def write_csv(fh, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    """Comma-separated, LF line endings, no quoting (values never contain commas)."""
    fh.write(",".join(header) + "\n")
    for row in rows:
        fh.write(",".join(_cell(v) for v in row) + "\n")


def to_plain(obj: Any) -> Any:
    """Convert numpy scalars/arrays, enums and tuples into JSON-ready Python objects."""
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def _encode(obj: Any, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj) if math.isfinite(obj) else "null")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(", ")
            out.append(json.dumps(k) + ": ")
            _encode(v, out)
        out.append("}")
    elif isinstance(obj, list):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(", ")
            _encode(v, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any) -> str:
    out: list[str] = []
    _encode(to_plain(obj), out)
    return "".join(out)


def envelope(command: str, params: dict, result: Any) -> dict:
    return {"version": SCHEMA_VERSION, "command": command, "params": params, "result": result}


def flatten(obj: Any, prefix: str = "") -> list[tuple[str, Any]]:
    """Flatten nested dicts/lists into dotted key/value pairs (for key,value CSV)."""
    obj = to_plain(obj)
    if isinstance(obj, dict):
        items = []
        for k, v in obj.items():
            items.extend(flatten(v, f"{prefix}.{k}" if prefix else str(k)))
        return items
    if isinstance(obj, list):
        items = []
        for i, v in enumerate(obj):
            items.extend(flatten(v, f"{prefix}.{i}" if prefix else str(i)))
        return items
    return [(prefix, obj)]
