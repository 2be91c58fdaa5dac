"""Bundled embedding registry.

The package ships a small synthetic 50-d corpus with a planted gender,
royalty, and occupation structure (see scripts/make_bundled_embedding.py in
the repository) registered under the name ``glove50-default``.  A registry
file maps names to embedding files; its path can be overridden with the
``DEBIASKIT_REGISTRY`` environment variable or per call.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from .store import EmbeddingSnapshot, load_embedding

DATA_DIR = Path(__file__).parent / "data"
DEFAULT_REGISTRY = DATA_DIR / "registry.json"
REGISTRY_ENV = "DEBIASKIT_REGISTRY"
DEFAULT_NAME = "glove50-default"


@dataclass(frozen=True)
class RegistryEntry:
    name: str
    path: Path
    format: str
    limit: int | None


def registry_path() -> Path:
    override = os.environ.get(REGISTRY_ENV)
    return Path(override) if override else DEFAULT_REGISTRY


def load_registry(path: Path | None = None) -> dict[str, RegistryEntry]:
    """Parse the registry file; relative embedding paths resolve beside it."""
    path = Path(path) if path is not None else registry_path()
    entries = {}
    for item in json.loads(path.read_text(encoding="utf-8")):
        p = Path(item["path"])
        if not p.is_absolute():
            p = path.parent / p
        entry = RegistryEntry(
            name=item["name"],
            path=p,
            format=item.get("format", "glove_text"),
            limit=item.get("limit"),
        )
        entries[entry.name] = entry
    return entries


def load_by_name(name: str, registry: dict[str, RegistryEntry] | None = None) -> EmbeddingSnapshot:
    reg = registry if registry is not None else load_registry()
    if name not in reg:
        raise KeyError(name)
    entry = reg[name]
    with open(entry.path, "rb") as fh:
        return load_embedding(fh, entry.format, entry.limit)


def load_default() -> EmbeddingSnapshot:
    """The bundled demo embedding."""
    return load_by_name(DEFAULT_NAME)
