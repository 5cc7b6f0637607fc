"""JSON schemas for the machine-readable outputs, bundled as package data.

Each schema's ``$id`` is ``osrlab:<name>``; cross-references use those ids.
"""

from __future__ import annotations

import json
from importlib import resources

NAMES = ("mapping", "transform", "feasibility", "endangered", "history")


def load_schema(name: str) -> dict:
    if name not in NAMES:
        raise KeyError(name)
    path = resources.files("osrlab") / "data" / "schemas" / f"{name}.json"
    return json.loads(path.read_text(encoding="utf-8"))


def all_schemas() -> dict[str, dict]:
    return {name: load_schema(name) for name in NAMES}


__all__ = ["NAMES", "load_schema", "all_schemas"]
