"""
Textual codecs for the command line and the report writers.
"""
import json
from typing import Any, Dict, FrozenSet, Iterable, List

from app.exceptions import InputError
from app.models.schemas import TR, UN, BasisIndex, SerreWeight
from app.utils.vectors import Vector

SCHEMA_VERSION = "sw/1"


def parse_csv_ints(text: str, argument: str) -> Vector:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise InputError(f"--{argument} expects comma-separated integers, got {text!r}", argument)


def parse_class_tokens(text: str) -> FrozenSet[BasisIndex]:
    """"m:k", "un" and "tr" tokens, comma-separated; empty text is the zero class"""
    support = set()
    for token in filter(None, (t.strip() for t in text.split(","))):
        lowered = token.lower()
        if lowered == "un":
            support.add(UN)
        elif lowered == "tr":
            support.add(TR)
        else:
            try:
                m, k = (int(v) for v in token.split(":"))
                support.add(BasisIndex.ca(m, k))
            except ValueError:
                raise InputError(f"malformed class token {token!r}, expected m:k, un or tr", "class")
    return frozenset(support)


def weight_labels(weights: Iterable[SerreWeight]) -> List[str]:
    return [s.label for s in sorted(weights, key=SerreWeight.sort_key)]


def indices_json(indices: Iterable[BasisIndex]) -> List:
    return [a.to_json() for a in sorted(indices, key=BasisIndex.sort_key)]


def with_schema(payload: Dict[str, Any]) -> Dict[str, Any]:
    return {"schema": SCHEMA_VERSION, **payload}


def dump_json(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def render_pretty(payload: Dict[str, Any], indent: int = 0) -> str:
    """Indented key: value listing of a JSON payload"""
    lines = []
    pad = "  " * indent
    for key, value in payload.items():
        if key == "schema":
            continue
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.append(render_pretty(value, indent + 1).rstrip("\n"))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for item in value:
                lines.append(f"{pad}  - " + ", ".join(f"{k}={v}" for k, v in item.items()))
        else:
            lines.append(f"{pad}{key}: {value}")
    return "\n".join(line for line in lines if line) + "\n"
