"""Empirical label distributions and predictive power of feature sets.

Predictive power of ``S`` at point ``i`` is the frequency of the most common
label among all points that agree with point ``i`` on every feature of ``S``.
Values are kept as integer numerator/denominator arrays (majority count over
group size) and compared by cross-multiplication, so no floating point is
involved anywhere.
"""

from __future__ import annotations

import threading
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .dataset import Dataset

# products of group ids and cardinalities must stay below this before re-densifying
_KEY_LIMIT = 1 << 62


@dataclass(frozen=True)
class LabelDistribution:
    counts: tuple[int, ...]
    total: int

    def __post_init__(self) -> None:
        if self.total < 1 or sum(self.counts) != self.total:
            raise ValueError("counts must be nonnegative and sum to a positive total")

    def prob(self, label: int) -> Fraction:
        return Fraction(self.counts[label], self.total)

    def probs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.total) for c in self.counts)

    def mode(self) -> int:
        """Most frequent label; ties go to the smallest label id."""
        return max(range(len(self.counts)), key=lambda c: (self.counts[c], -c))

    def max_prob(self) -> Fraction:
        return Fraction(max(self.counts), self.total)


@dataclass(frozen=True, eq=False)
class PowerTable:
    """Predictive power of one feature set for every point of a dataset."""

    set: frozenset[int]
    num: np.ndarray  # majority count of each point's group
    den: np.ndarray  # size of each point's group
    groups: np.ndarray = field(repr=False)  # dense group id per point

    @property
    def phi(self) -> list[Fraction]:
        return [Fraction(int(a), int(b)) for a, b in zip(self.num, self.den)]

    def at(self, i: int) -> Fraction:
        return Fraction(int(self.num[i]), int(self.den[i]))

    @property
    def distinguishable(self) -> np.ndarray:
        return self.num == self.den

    @property
    def any_distinguishable(self) -> bool:
        return bool(self.distinguishable.any())

    @property
    def is_constant(self) -> bool:
        """True when every point has the same predictive power."""
        return bool((self.num * self.den[0] == self.num[0] * self.den).all())

    def unequal_pair(self) -> tuple[int, int] | None:
        diff = np.flatnonzero(self.num * self.den[0] != self.num[0] * self.den)
        return (0, int(diff[0])) if diff.size else None

    def dominated_by(self, other: "PowerTable") -> np.ndarray:
        """Mask of points where ``other`` reaches at least this table's power."""
        return other.num * self.den >= self.num * other.den


def _densify(keys: np.ndarray) -> tuple[np.ndarray, int]:
    uniq, inv = np.unique(keys, return_inverse=True)
    return inv.reshape(-1).astype(np.int64), len(uniq)


def refine(ds: Dataset, groups: np.ndarray, ngroups: int, features: Iterable[int]) -> tuple[np.ndarray, int]:
    """Split an existing partition further by the given features."""
    keys = groups
    bound = ngroups
    for k in sorted(features):
        card = len(ds.value_names[k])
        if bound * card >= _KEY_LIMIT:
            keys, bound = _densify(keys)
        keys = keys * card + ds.codes[:, k]
        bound *= card
    return _densify(keys)


def group_ids(ds: Dataset, s: Iterable[int]) -> tuple[np.ndarray, int]:
    """Dense group id per point for the equivalence 'agrees on every feature of s'."""
    return refine(ds, np.zeros(ds.n, dtype=np.int64), 1, s)


def group_by_projection(ds: Dataset, s: Iterable[int]) -> list[list[int]]:
    ids, g = group_ids(ds, s)
    groups: list[list[int]] = [[] for _ in range(g)]
    for i, gid in enumerate(ids):
        groups[gid].append(i)
    # order groups by first member, matching dataset order
    return sorted(groups, key=lambda grp: grp[0])


def conditional_distribution(ds: Dataset, group: Sequence[int]) -> LabelDistribution:
    if len(group) == 0:
        raise ValueError("empty group")
    counts = np.bincount(ds.labels[list(group)], minlength=ds.label_count)
    return LabelDistribution(tuple(int(c) for c in counts), len(group))


def distribution_of(ds: Dataset, s: Iterable[int], i: int) -> LabelDistribution:
    """Label distribution among points agreeing with point ``i`` on ``s``."""
    s = list(s)
    row = ds.codes[i, s]
    members = np.flatnonzero((ds.codes[:, s] == row).all(axis=1))
    return conditional_distribution(ds, members)


def predictive_power(ds: Dataset, s: Iterable[int], i: int) -> Fraction:
    """Predictive power of ``s`` for a single point, straight from the definition."""
    return distribution_of(ds, s, i).max_prob()


def _table_from_groups(ds: Dataset, s: frozenset[int], ids: np.ndarray, g: int) -> PowerTable:
    L = ds.label_count
    counts = np.bincount(ids * L + ds.labels, minlength=g * L).reshape(g, L)
    best = counts.max(axis=1)
    size = counts.sum(axis=1)
    num, den = best[ids], size[ids]
    for arr in (num, den, ids):
        arr.setflags(write=False)
    return PowerTable(s, num, den, ids)


class PowerCache:
    """Memo of power tables keyed by feature set.

    With ``cap`` set, the largest cached sets are evicted first once the cap
    is exceeded. Inserts are insert-if-absent; concurrent callers may compute
    the same table twice, which is harmless since results are identical.
    """

    def __init__(self, ds: Dataset, cap: int | None = None):
        if cap is not None and cap < 1:
            raise ValueError("cache cap must be >= 1")
        self.ds = ds
        self.cap = cap
        self._tables: dict[frozenset[int], PowerTable] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def __len__(self) -> int:
        return len(self._tables)

    def __contains__(self, s: object) -> bool:
        return s in self._tables

    def get(self, s: Iterable[int]) -> PowerTable:
        s = frozenset(s)
        table = self._tables.get(s)
        if table is not None:
            self.hits += 1
            return table
        self.misses += 1
        table = self._compute(s)
        with self._lock:
            table = self._tables.setdefault(s, table)
            if self.cap is not None and len(self._tables) > self.cap:
                self._evict()
        return table

    def _compute(self, s: frozenset[int]) -> PowerTable:
        # reuse the partition of s minus its largest feature when available
        if s:
            parent = self._tables.get(s - {max(s)})
            if parent is not None:
                ids, g = refine(self.ds, parent.groups, int(parent.groups.max()) + 1, [max(s)])
                return _table_from_groups(self.ds, s, ids, g)
        ids, g = group_ids(self.ds, s)
        return _table_from_groups(self.ds, s, ids, g)

    def _evict(self) -> None:
        # evict in batches so sorting is amortised over many inserts
        excess = max(len(self._tables) - self.cap, self.cap // 8)
        victims = sorted(self._tables, key=len, reverse=True)[:excess]
        for s in victims:
            self._tables.pop(s, None)


def power_table(ds: Dataset, s: Iterable[int], cache: PowerCache | None = None) -> PowerTable:
    if cache is None:
        ids, g = group_ids(ds, s)
        return _table_from_groups(ds, frozenset(s), ids, g)
    if cache.ds is not ds:
        raise ValueError("cache belongs to a different dataset")
    return cache.get(s)


def naive_phi(ds: Dataset, s: Iterable[int]) -> list[Fraction]:
    """Plain-Python predictive power of ``s`` for every point.

    Independent of the vectorised grouping above; used as a cross-check.
    """
    s = sorted(s)
    keys = [tuple(int(ds.codes[i, k]) for k in s) for i in range(ds.n)]
    per_key: dict[tuple[int, ...], Counter] = {}
    for key, y in zip(keys, ds.labels.tolist()):
        per_key.setdefault(key, Counter())[y] += 1
    out = []
    for key in keys:
        cnt = per_key[key]
        out.append(Fraction(max(cnt.values()), sum(cnt.values())))
    return out
