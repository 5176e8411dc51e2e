"""Classifiers over partially revealed inputs and their exact accuracy.

A classifier is described by the label distribution it outputs for a masked
input. Because that output may only depend on the revealed values, it is the
same for every point in the masked input's group, and accuracy reduces to
``sum_c predicted[c] * empirical[c]`` over the group.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Protocol, Sequence

from .dataset import Dataset, DatasetError, MaskedVector
from .power import distribution_of


class PredictionError(ValueError):
    pass


@dataclass(frozen=True)
class StochasticPrediction:
    """Output distribution of a classifier, one probability per label id."""

    probs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        probs = tuple(Fraction(p) for p in self.probs)
        object.__setattr__(self, "probs", probs)
        if any(p < 0 or p > 1 for p in probs):
            raise PredictionError(f"probabilities outside [0, 1]: {probs}")
        if sum(probs) != 1:
            raise PredictionError(f"probabilities sum to {sum(probs)}, not 1")

    @classmethod
    def certain(cls, label: int, label_count: int) -> "StochasticPrediction":
        return cls(tuple(Fraction(int(c == label)) for c in range(label_count)))


class Classifier(Protocol):
    """Anything with ``predict(ds, mv)``; must read only ``ds.revealed_values(mv)``."""

    thread_safe: bool

    def predict(self, ds: Dataset, mv: MaskedVector) -> StochasticPrediction: ...


def optimal_predict(ds: Dataset, mv: MaskedVector) -> int:
    """Majority label among points sharing ``mv``'s revealed values."""
    return distribution_of(ds, mv.revealed, mv.source).mode()


class OptimalClassifier:
    thread_safe = True

    def predict(self, ds: Dataset, mv: MaskedVector) -> StochasticPrediction:
        return StochasticPrediction.certain(optimal_predict(ds, mv), ds.label_count)


def prediction_accuracy(ds: Dataset, clf: Classifier, mv: MaskedVector) -> Fraction:
    """Probability that ``clf`` predicts the true label, given ``mv``'s revealed values."""
    pred = clf.predict(ds, mv)
    if not isinstance(pred, StochasticPrediction):
        pred = StochasticPrediction(tuple(pred))
    if len(pred.probs) != ds.label_count:
        raise PredictionError("prediction has wrong number of labels")
    truth = distribution_of(ds, mv.revealed, mv.source)
    return sum((p * Fraction(c, truth.total) for p, c in zip(pred.probs, truth.counts)), Fraction(0))


class Serialized:
    """Wrap a classifier that is not safe to call from several threads."""

    thread_safe = True

    def __init__(self, inner: Classifier):
        self.inner = inner
        self._lock = threading.Lock()

    def predict(self, ds: Dataset, mv: MaskedVector) -> StochasticPrediction:
        with self._lock:
            return self.inner.predict(ds, mv)


def thread_safe(clf: Classifier) -> Classifier:
    return clf if getattr(clf, "thread_safe", False) else Serialized(clf)


def sample_label(pred: StochasticPrediction, rng: random.Random) -> int:
    """Draw one label from a prediction. For demos only; accuracy is computed in closed form."""
    u = Fraction(rng.random())
    acc = Fraction(0)
    for label, p in enumerate(pred.probs):
        acc += p
        if u < acc:
            return label
    return max(c for c, p in enumerate(pred.probs) if p > 0)


class RandomizedLinearClassifier:
    """Non-optimal randomized classifier for the two-feature illustrative dataset.

    Chooses a rule by which features are visible, then emits the chosen label
    with a fixed confidence:

    ========  =====================  ==========
    visible   predicts ``+`` when    confidence
    ========  =====================  ==========
    f1, f2    f2 - f1 >= 2           4/5
    f1        f1 < 1                 3/4
    f2        f2 >= 2                3/4
    none      (coin flip)            1/2
    ========  =====================  ==========

    Feature tokens are read as integers here and nowhere else. Some write-ups
    of this rule test ``f1 >= 2`` when only ``f2`` is visible; that reads a
    hidden value and breaks the premise that outputs depend only on revealed
    features, so the visible feature ``f2`` is used. Both readings yield the
    same accuracy table on the illustrative data.
    """

    thread_safe = True

    def __init__(self, positive: str = "+", negative: str = "-"):
        self.positive = positive
        self.negative = negative

    def _check(self, ds: Dataset) -> None:
        if ds.feature_names != ("f1", "f2") or set(ds.label_names) != {self.positive, self.negative}:
            raise DatasetError("classifier only applies to the two-feature (f1, f2) fixture with labels +/-")

    def predict(self, ds: Dataset, mv: MaskedVector) -> StochasticPrediction:
        self._check(ds)
        seen = {name: int(tok) for name, tok in ds.revealed_tokens(mv).items()}
        if seen.keys() == {"f1", "f2"}:
            plus, conf = seen["f2"] - seen["f1"] >= 2, Fraction(4, 5)
        elif seen.keys() == {"f1"}:
            plus, conf = seen["f1"] < 1, Fraction(3, 4)
        elif seen.keys() == {"f2"}:
            plus, conf = seen["f2"] >= 2, Fraction(3, 4)
        else:
            plus, conf = True, Fraction(1, 2)
        p_plus = conf if plus else 1 - conf
        probs = [Fraction(0)] * ds.label_count
        probs[ds.label_names.index(self.positive)] = p_plus
        probs[ds.label_names.index(self.negative)] = 1 - p_plus
        return StochasticPrediction(tuple(probs))


def accuracy_table(ds: Dataset, clf: Classifier, sets: Sequence[frozenset[int]]) -> list[list[Fraction]]:
    """``table[i][j]`` = accuracy of ``clf`` on point ``i`` using ``sets[j]``."""
    return [[prediction_accuracy(ds, clf, MaskedVector(i, s)) for s in sets] for i in range(ds.n)]
