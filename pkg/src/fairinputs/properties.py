"""Fair accuracy, need-to-know and fair privacy checks, plus the dataset-level
condition under which an optimal classifier can satisfy all three.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Any, Iterable, Iterator, Sequence

from .classifier import Classifier, prediction_accuracy
from .dataset import Dataset, MaskedVector
from .power import PowerCache, power_table

FEATURE_COUNT = "feature-count"
FEATURE_MATCH = "feature-match"
CUSTOM = "custom"


@dataclass(frozen=True)
class CostVector:
    costs: tuple[Fraction, ...]
    regime: str = CUSTOM

    def __post_init__(self) -> None:
        costs = tuple(Fraction(c) for c in self.costs)
        object.__setattr__(self, "costs", costs)
        if any(c < 0 for c in costs):
            raise ValueError("privacy costs must be nonnegative")
        if self.regime == FEATURE_COUNT and (len(set(costs)) > 1 or any(c <= 0 for c in costs)):
            raise ValueError("feature-count costs must be equal and positive")
        if self.regime == FEATURE_MATCH and costs != tuple(Fraction(2**k) for k in range(len(costs))):
            raise ValueError("feature-match costs must be successive powers of two")
        if self.regime not in (FEATURE_COUNT, FEATURE_MATCH, CUSTOM):
            raise ValueError(f"unknown cost regime {self.regime!r}")

    @classmethod
    def feature_count(cls, d: int, unit: Fraction | int = 1) -> "CostVector":
        return cls(tuple([Fraction(unit)] * d), FEATURE_COUNT)

    @classmethod
    def feature_match(cls, d: int) -> "CostVector":
        # powers of two make every subset sum distinct
        return cls(tuple(Fraction(2**k) for k in range(d)), FEATURE_MATCH)

    @classmethod
    def for_regime(cls, regime: str, d: int, costs: Sequence[Fraction] | None = None) -> "CostVector":
        if regime == FEATURE_COUNT:
            return cls.feature_count(d)
        if regime == FEATURE_MATCH:
            return cls.feature_match(d)
        if costs is None:
            raise ValueError("custom regime needs explicit costs")
        return cls(tuple(costs), CUSTOM)

    def total(self, s: Iterable[int]) -> Fraction:
        return sum((self.costs[k] for k in s), Fraction(0))


@dataclass(frozen=True)
class FeatureAssignment:
    """``sets[i]`` is the feature set used for point ``i``."""

    sets: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "sets", tuple(frozenset(s) for s in self.sets))

    @classmethod
    def uniform(cls, n: int, s: Iterable[int]) -> "FeatureAssignment":
        return cls(tuple([frozenset(s)] * n))

    def __len__(self) -> int:
        return len(self.sets)

    def validate(self, ds: Dataset) -> None:
        if len(self.sets) != ds.n:
            raise ValueError(f"assignment covers {len(self.sets)} points, dataset has {ds.n}")
        for i, s in enumerate(self.sets):
            if any(not 0 <= k < ds.d for k in s):
                raise ValueError(f"assignment for point {i} uses unknown features {sorted(s)}")


@dataclass(frozen=True)
class PropertyVerdict:
    holds: bool
    witness: dict[str, Any]

    def __bool__(self) -> bool:
        return self.holds


def proper_subsets(s: Iterable[int]) -> Iterator[frozenset[int]]:
    """Proper subsets of ``s`` by increasing size, starting with the empty set."""
    items = sorted(s)
    for r in range(len(items)):
        for combo in combinations(items, r):
            yield frozenset(combo)


def check_fair_accuracy(ds: Dataset, clf: Classifier, fa: FeatureAssignment) -> PropertyVerdict:
    fa.validate(ds)
    accs = [prediction_accuracy(ds, clf, MaskedVector(i, s)) for i, s in enumerate(fa.sets)]
    for j, a in enumerate(accs):
        if a != accs[0]:
            return PropertyVerdict(False, {"points": [0, j], "accuracies": [accs[0], a]})
    if accs[0] == 0:
        # equal, but the common accuracy has to lie in (0, 1]
        return PropertyVerdict(False, {"gamma": accs[0], "reason": "common accuracy is 0"})
    return PropertyVerdict(True, {"gamma": accs[0]})


def check_need_to_know(ds: Dataset, clf: Classifier, fa: FeatureAssignment) -> PropertyVerdict:
    fa.validate(ds)
    for i, s in enumerate(fa.sets):
        full = prediction_accuracy(ds, clf, MaskedVector(i, s))
        for sub in proper_subsets(s):
            acc = prediction_accuracy(ds, clf, MaskedVector(i, sub))
            if acc >= full:
                return PropertyVerdict(
                    False, {"point": i, "subset": sorted(sub), "subset_accuracy": acc, "accuracy": full}
                )
    return PropertyVerdict(True, {})


def check_fair_privacy(fa: FeatureAssignment, c: CostVector) -> PropertyVerdict:
    d = len(c.costs)
    for i, s in enumerate(fa.sets):
        if any(not 0 <= k < d for k in s):
            raise ValueError(f"assignment for point {i} uses features outside the cost vector")
    totals = [c.total(s) for s in fa.sets]
    for j, t in enumerate(totals):
        if t != totals[0]:
            return PropertyVerdict(False, {"points": [0, j], "costs": [totals[0], t]})
    witness: dict[str, Any] = {"cost": totals[0] if totals else Fraction(0)}
    if c.regime == FEATURE_COUNT and fa.sets:
        witness["size"] = len(fa.sets[0])
    if c.regime == FEATURE_MATCH and fa.sets:
        witness["set"] = sorted(fa.sets[0])
    return PropertyVerdict(True, witness)


def _nonempty(s: Iterable[int]) -> frozenset[int]:
    s = frozenset(s)
    if not s:
        raise ValueError("feature set must be nonempty")
    return s


def clause1_unequal_power(ds: Dataset, s: Iterable[int], cache: PowerCache | None = None) -> bool:
    """Some two points have different predictive power under ``s``."""
    return not power_table(ds, _nonempty(s), cache).is_constant


def clause2_witness(ds: Dataset, s: Iterable[int], cache: PowerCache | None = None) -> tuple[int, frozenset[int]] | None:
    """First ``(point, proper subset)`` whose power reaches that of ``s``, if any."""
    s = _nonempty(s)
    full = power_table(ds, s, cache)
    for sub in proper_subsets(s):
        hit = full.dominated_by(power_table(ds, sub, cache))
        if hit.any():
            return int(hit.argmax()), sub
    return None


def clause2_ntk_violation(ds: Dataset, s: Iterable[int], cache: PowerCache | None = None) -> bool:
    """Some point loses nothing by dropping to a proper subset of ``s``."""
    return clause2_witness(ds, s, cache) is not None


def check_condition7(ds: Dataset, s: Iterable[int], cache: PowerCache | None = None) -> bool:
    """``s`` has one common power for all points and every proper subset is strictly weaker."""
    s = _nonempty(s)
    return not clause1_unequal_power(ds, s, cache) and not clause2_ntk_violation(ds, s, cache)
