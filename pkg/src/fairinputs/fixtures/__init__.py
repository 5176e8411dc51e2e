"""Bundled example datasets and their expected outputs."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from ..dataset import Dataset, IngestConfig, load_csv, read_manifest

NAMES = ("table1", "xor")


def path(name: str) -> Path:
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(NAMES)}")
    return Path(str(resources.files(__name__) / f"{name}.csv"))


def load(name: str) -> Dataset:
    return load_csv(path(name), IngestConfig(label_column="label"))


def expected() -> dict[str, str]:
    return read_manifest(Path(str(resources.files(__name__) / "expected.txt")))
