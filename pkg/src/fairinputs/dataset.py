"""Categorical datasets: CSV ingestion, value interning and feature masking.

Every cell is an opaque token. Tokens are interned per feature in order of
first occurrence, so a dataset is stored as an ``n x d`` matrix of small
integer codes plus one label code per row.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

log = logging.getLogger(__name__)

FeatureSet = frozenset  # frozenset[int] of feature indices


class DatasetError(ValueError):
    """Raised for malformed or unusable input data."""


@dataclass(frozen=True)
class IngestConfig:
    label_column: str | None = None
    label_index: int | None = None
    drop_missing_rows: bool = False
    missing_tokens: tuple[str, ...] = ("",)
    delimiter: str = ","

    def __post_init__(self) -> None:
        if (self.label_column is None) == (self.label_index is None):
            raise DatasetError("exactly one of label_column / label_index is required")


@dataclass(frozen=True)
class MaskedVector:
    """Point ``source`` with only the features in ``revealed`` visible."""

    source: int
    revealed: frozenset[int]


@dataclass(frozen=True, eq=False)
class Dataset:
    feature_names: tuple[str, ...]
    label_names: tuple[str, ...]
    value_names: tuple[tuple[str, ...], ...]
    codes: np.ndarray  # (n, d) int64, read-only
    labels: np.ndarray  # (n,) int64, read-only
    rows_dropped: int = 0
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        codes = np.asarray(self.codes, dtype=np.int64).reshape(len(self.labels), len(self.feature_names))
        labels = np.asarray(self.labels, dtype=np.int64)
        codes.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "codes", codes)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_index", {name: k for k, name in enumerate(self.feature_names)})

        if len(labels) < 1:
            raise DatasetError("empty dataset")
        if len(self._index) != len(self.feature_names):
            raise DatasetError("duplicate feature names")
        if len(set(self.label_names)) != len(self.label_names):
            raise DatasetError("duplicate label names")
        if len(self.value_names) != self.d:
            raise DatasetError("one value dictionary per feature is required")
        if labels.min() < 0 or labels.max() >= len(self.label_names):
            raise DatasetError("label id out of range")
        for k, names in enumerate(self.value_names):
            col = codes[:, k]
            if col.min() < 0 or col.max() >= len(names):
                raise DatasetError(f"value id out of range for feature {self.feature_names[k]!r}")

    @classmethod
    def from_rows(
        cls,
        rows: Sequence[Sequence[object]],
        labels: Sequence[object],
        feature_names: Sequence[str] | None = None,
    ) -> "Dataset":
        """Build a dataset from in-memory rows; values are stringified and interned."""
        if len(rows) != len(labels):
            raise DatasetError("rows and labels differ in length")
        if not rows:
            raise DatasetError("empty dataset")
        d = len(rows[0])
        if feature_names is None:
            feature_names = [f"f{k + 1}" for k in range(d)]
        if len(feature_names) != d:
            raise DatasetError("feature_names length does not match row width")
        str_rows = []
        for r, row in enumerate(rows):
            if len(row) != d:
                raise DatasetError(f"row {r}: expected {d} values, got {len(row)}")
            str_rows.append([str(v) for v in row])
        return _intern(list(feature_names), str_rows, [str(y) for y in labels])

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def d(self) -> int:
        return len(self.feature_names)

    @property
    def label_count(self) -> int:
        return len(self.label_names)

    @property
    def all_features(self) -> frozenset[int]:
        return frozenset(range(self.d))

    def feature_index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise DatasetError(f"unknown feature {name!r}") from None

    def feature_set(self, names: Iterable[str]) -> frozenset[int]:
        return frozenset(self.feature_index(name) for name in names)

    def set_names(self, s: Iterable[int]) -> list[str]:
        return [self.feature_names[k] for k in sorted(s)]

    def point(self, i: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self.codes[i])

    def token(self, feature: int, i: int) -> str:
        return self.value_names[feature][self.codes[i, feature]]

    def label_of(self, i: int) -> str:
        return self.label_names[self.labels[i]]

    def revealed_values(self, mv: MaskedVector) -> dict[int, int]:
        """Value ids of the visible features of ``mv``; nothing else is exposed."""
        return {k: int(self.codes[mv.source, k]) for k in sorted(mv.revealed)}

    def revealed_tokens(self, mv: MaskedVector) -> dict[str, str]:
        return {self.feature_names[k]: self.token(k, mv.source) for k in sorted(mv.revealed)}

    def select_features(self, keep: Sequence[int]) -> "Dataset":
        keep = list(keep)
        return Dataset(
            feature_names=tuple(self.feature_names[k] for k in keep),
            label_names=self.label_names,
            value_names=tuple(self.value_names[k] for k in keep),
            codes=self.codes[:, keep],
            labels=self.labels,
            rows_dropped=self.rows_dropped,
        )


def _intern(feature_names: list[str], rows: list[list[str]], labels: list[str], rows_dropped: int = 0) -> Dataset:
    d = len(feature_names)
    dicts: list[dict[str, int]] = [{} for _ in range(d)]
    label_dict: dict[str, int] = {}
    codes = np.empty((len(rows), d), dtype=np.int64)
    label_codes = np.empty(len(rows), dtype=np.int64)
    for r, row in enumerate(rows):
        for k, tok in enumerate(row):
            codes[r, k] = dicts[k].setdefault(tok, len(dicts[k]))
        label_codes[r] = label_dict.setdefault(labels[r], len(label_dict))
    return Dataset(
        feature_names=tuple(feature_names),
        label_names=tuple(label_dict),
        value_names=tuple(tuple(dct) for dct in dicts),
        codes=codes,
        labels=label_codes,
        rows_dropped=rows_dropped,
    )


def load_csv(path: str | Path, config: IngestConfig) -> Dataset:
    """Read a headed CSV file; the label column is chosen by name or position."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=config.delimiter)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DatasetError(f"{path}: empty file") from None
        body = [row for row in reader if row]

    if not header or any(h == "" for h in header):
        raise DatasetError(f"{path}: missing header name")
    if len(set(header)) != len(header):
        raise DatasetError(f"{path}: duplicate header name")

    if config.label_column is not None:
        if config.label_column not in header:
            raise DatasetError(f"{path}: label column {config.label_column!r} not in header")
        label_at = header.index(config.label_column)
    else:
        label_at = config.label_index
        if not -len(header) <= label_at < len(header):
            raise DatasetError(f"{path}: label index {label_at} out of range")
        label_at %= len(header)

    missing = set(config.missing_tokens)
    rows: list[list[str]] = []
    labels: list[str] = []
    dropped = 0
    for lineno, raw in enumerate(body, start=2):
        if len(raw) != len(header):
            raise DatasetError(f"{path}:{lineno}: row length mismatch ({len(raw)} cells, {len(header)} headers)")
        cells = [c.strip() for c in raw]
        if any(c in missing for c in cells):
            if config.drop_missing_rows:
                dropped += 1
                continue
            raise DatasetError(f"{path}:{lineno}: missing value")
        labels.append(cells[label_at])
        rows.append(cells[:label_at] + cells[label_at + 1:])

    if dropped:
        log.info("%s: dropped %d rows with missing values", path, dropped)
    if not rows:
        raise DatasetError(f"{path}: empty dataset")
    names = header[:label_at] + header[label_at + 1:]
    return _intern(names, rows, labels, rows_dropped=dropped)


def constant_features(ds: Dataset) -> list[int]:
    if ds.d == 0:
        return []
    return [k for k in range(ds.d) if (ds.codes[:, k] == ds.codes[0, k]).all()]


def remove_constant_features(ds: Dataset) -> tuple[Dataset, list[str]]:
    """Drop features that take a single value over every point."""
    const = set(constant_features(ds))
    if not const:
        return ds, []
    keep = [k for k in range(ds.d) if k not in const]
    return ds.select_features(keep), [ds.feature_names[k] for k in sorted(const)]


def project(ds: Dataset, i: int, s: Iterable[int]) -> MaskedVector:
    if not 0 <= i < ds.n:
        raise IndexError(f"point index {i} out of range for n={ds.n}")
    s = frozenset(s)
    if any(not 0 <= k < ds.d for k in s):
        raise IndexError(f"feature set {sorted(s)} not within [0, {ds.d})")
    return MaskedVector(i, s)


def write_manifest(path: str | Path, entries: dict[str, object]) -> None:
    """Write a ``key=value`` sidecar describing preprocessing actions."""
    lines = []
    for key, value in entries.items():
        if isinstance(value, (list, tuple)):
            value = ",".join(str(v) for v in value)
        lines.append(f"{key}={value}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_manifest(path: str | Path) -> dict[str, str]:
    out = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out
