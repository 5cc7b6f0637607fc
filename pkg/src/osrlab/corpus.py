"""The bundled program corpus and random input stores."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .ir.ast import Program
from .ir.interp import Store
from .ir.text import parse_program

DEFAULT_RANGE = (-5, 10)
MANIFEST = "manifest.json"


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    program: Program
    shape: str
    pipelines: tuple[str, ...]
    input_ranges: dict[str, tuple[int, int]]

    def __hash__(self):
        return hash(self.name)

    def random_store(self, rng: random.Random) -> Store:
        return random_store(self.program, rng, self.input_ranges)

    def random_stores(self, count: int, seed: int = 0) -> list[Store]:
        rng = random.Random(f"{self.name}:{seed}")
        return [self.random_store(rng) for _ in range(count)]


def corpus_dir() -> Path:
    return Path(str(resources.files("osrlab") / "data" / "corpus"))


def load_corpus(directory: str | Path | None = None) -> list[CorpusEntry]:
    """Entries listed in ``manifest.json``, in manifest order.

    A directory without a manifest yields every ``*.osr`` file with no pipelines.
    """
    root = Path(directory) if directory is not None else corpus_dir()
    manifest_path = root / MANIFEST
    if manifest_path.exists():
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    else:
        manifest = {"programs": [{"file": p.name} for p in sorted(root.glob("*.osr"))]}
    default = tuple(manifest.get("default_inputs", DEFAULT_RANGE))
    entries = []
    for item in manifest["programs"]:
        program = parse_program((root / item["file"]).read_text(encoding="utf-8"))
        ranges = {x: tuple(item.get("inputs", {}).get(x, default)) for x in program.in_vars}
        entries.append(CorpusEntry(
            name=Path(item["file"]).stem,
            program=program,
            shape=item.get("shape", "unknown"),
            pipelines=tuple(item.get("pipelines", ())),
            input_ranges=ranges,
        ))
    return entries


def entry(name: str, directory=None) -> CorpusEntry:
    for e in load_corpus(directory):
        if e.name == name:
            return e
    raise KeyError(name)


def random_store(p: Program, rng: random.Random,
                 ranges: dict[str, tuple[int, int]] | None = None) -> Store:
    """Uniform integers for each In variable of ``p``."""
    ranges = ranges or {}
    return Store({x: rng.randint(*ranges.get(x, DEFAULT_RANGE)) for x in p.in_vars})


__all__ = ["CorpusEntry", "corpus_dir", "load_corpus", "entry", "random_store", "DEFAULT_RANGE"]
