"""Decide whether a dataset forces the fairness/privacy/need-to-know trade-off.

The dataset exhibits the trade-off when no nonempty feature set both gives
every point the same predictive power and is strictly stronger, at every
point, than each of its proper subsets.

:func:`verify_tradeoff` enumerates candidate sets breadth-first, extending a
set only with features of larger index and only while no point is
distinguishable (power 1) under it; constant features are dropped up front.
Any skipped set contains a constant feature or a set under which some point
already has power 1, so it loses nothing to a proper subset. Each candidate
is then accepted if powers differ between points, or else if some proper
subset matches it somewhere. :func:`brute_force_verify` checks every
nonempty subset directly and serves as the oracle.
"""

from __future__ import annotations

import logging
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .dataset import Dataset, remove_constant_features
from .power import PowerCache, naive_phi
from .properties import clause1_unequal_power, clause2_ntk_violation, proper_subsets

log = logging.getLogger(__name__)

BRUTE_FORCE_LIMIT = 20


@dataclass(frozen=True)
class VerifierOptions:
    max_candidate_size: int | None = None
    threads: int = 1
    cache_cap: int | None = None

    def __post_init__(self) -> None:
        if self.max_candidate_size is not None and self.max_candidate_size < 1:
            raise ValueError("max_candidate_size must be >= 1")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.cache_cap is not None and self.cache_cap < 1:
            raise ValueError("cache_cap must be >= 1")

    @property
    def parallel(self) -> bool:
        return self.threads > 1


@dataclass
class VerificationReport:
    tradeoff: bool
    counterexample: frozenset[int] | None  # original feature indices
    candidates_examined: int
    largest_candidate_size: int
    clause2_used: bool
    constant_features_removed: list[str]
    elapsed: float
    n: int
    d: int
    label_count: int
    verdict_bounded: bool = False
    method: str = "pruned-bfs"
    feature_names: tuple[str, ...] = ()
    # candidates in generation order, original feature indices
    candidates: list[frozenset[int]] = field(default_factory=list, repr=False)
    notes: list[str] = field(default_factory=list)

    @property
    def all_candidates_clause1(self) -> bool:
        return self.tradeoff and not self.clause2_used

    def counterexample_names(self) -> list[str] | None:
        if self.counterexample is None:
            return None
        return [self.feature_names[k] for k in sorted(self.counterexample)]


def generate_candidates(
    ds: Dataset, cache: PowerCache, max_size: int | None = None
) -> tuple[list[frozenset[int]], bool]:
    """Breadth-first candidate generation over ``ds``'s features.

    Returns the nonempty candidates in generation order and whether
    ``max_size`` cut off an extension that would otherwise have happened.
    """
    candidates: list[frozenset[int]] = []
    truncated = False
    queue: deque[tuple[int, ...]] = deque([()])
    while queue:
        s = queue.popleft()
        if s:
            candidates.append(frozenset(s))
        if cache.get(s).any_distinguishable:
            continue
        start = s[-1] + 1 if s else 0
        if start >= ds.d:
            continue
        if max_size is not None and len(s) >= max_size:
            truncated = True
            continue
        for f in range(start, ds.d):
            queue.append(s + (f,))
    return candidates, truncated


def _classify(ds: Dataset, s: frozenset[int], cache: PowerCache) -> int:
    """1 or 2 for the first clause that ``s`` satisfies, 0 if neither."""
    if clause1_unequal_power(ds, s, cache):
        return 1
    if clause2_ntk_violation(ds, s, cache):
        return 2
    return 0


def verify_tradeoff(ds: Dataset, opts: VerifierOptions | None = None) -> VerificationReport:
    opts = opts or VerifierOptions()
    t0 = time.perf_counter()
    reduced, removed = remove_constant_features(ds)
    to_original = [ds.feature_index(name) for name in reduced.feature_names]
    cache = PowerCache(reduced, cap=opts.cache_cap)

    candidates, truncated = generate_candidates(reduced, cache, opts.max_candidate_size)
    log.debug("generated %d candidates over %d features", len(candidates), reduced.d)

    counterexample = None
    clause2_used = False
    if opts.parallel:
        with ThreadPoolExecutor(max_workers=opts.threads) as pool:
            # one BFS level at a time; results come back in candidate order
            for level in _levels(candidates):
                outcomes = list(pool.map(lambda s: _classify(reduced, s, cache), level))
                if 0 in outcomes:
                    cut = outcomes.index(0)
                    counterexample = level[cut]
                    outcomes = outcomes[:cut]
                clause2_used |= 2 in outcomes
                if counterexample is not None:
                    break
    else:
        for s in candidates:
            outcome = _classify(reduced, s, cache)
            if outcome == 0:
                counterexample = s
                break
            clause2_used |= outcome == 2

    notes = []
    if reduced.d == 0:
        notes.append("no non-constant features; no candidates, trade-off holds vacuously")
    if truncated and counterexample is None:
        notes.append(f"search capped at candidate size {opts.max_candidate_size}; verdict covers examined candidates only")

    mapped = [frozenset(to_original[k] for k in s) for s in candidates]
    return VerificationReport(
        tradeoff=counterexample is None,
        counterexample=None if counterexample is None else frozenset(to_original[k] for k in counterexample),
        candidates_examined=len(candidates),
        largest_candidate_size=max((len(s) for s in candidates), default=0),
        clause2_used=clause2_used,
        constant_features_removed=removed,
        elapsed=time.perf_counter() - t0,
        n=ds.n,
        d=ds.d,
        label_count=ds.label_count,
        verdict_bounded=truncated and counterexample is None,
        feature_names=ds.feature_names,
        candidates=mapped,
        notes=notes,
    )


def _levels(candidates: list[frozenset[int]]) -> list[list[frozenset[int]]]:
    levels: list[list[frozenset[int]]] = []
    for s in candidates:
        if not levels or len(levels[-1][0]) != len(s):
            levels.append([])
        levels[-1].append(s)
    return levels


def condition7_naive(phis: dict[frozenset[int], list[Fraction]], s: frozenset[int]) -> bool:
    phi = phis[s]
    if any(p != phi[0] for p in phi):
        return False
    for sub in proper_subsets(s):
        if any(q >= p for q, p in zip(phis[sub], phi)):
            return False
    return True


def brute_force_verify(ds: Dataset, limit: int = BRUTE_FORCE_LIMIT) -> tuple[bool, frozenset[int] | None]:
    """Evaluate the condition on every nonempty feature subset; exponential in ``d``."""
    if ds.d > limit:
        raise ValueError(f"brute force refused: {ds.d} features exceeds limit {limit}")
    subsets = [frozenset(c) for r in range(ds.d + 1) for c in combinations(range(ds.d), r)]
    phis = {s: naive_phi(ds, s) for s in subsets}
    for s in subsets[1:]:
        if condition7_naive(phis, s):
            return False, s
    return True, None


def brute_force_report(ds: Dataset, limit: int = BRUTE_FORCE_LIMIT) -> VerificationReport:
    t0 = time.perf_counter()
    tradeoff, cex = brute_force_verify(ds, limit)
    return VerificationReport(
        tradeoff=tradeoff,
        counterexample=cex,
        candidates_examined=2**ds.d - 1,
        largest_candidate_size=ds.d,
        clause2_used=False,
        constant_features_removed=[],
        elapsed=time.perf_counter() - t0,
        n=ds.n,
        d=ds.d,
        label_count=ds.label_count,
        method="brute-force",
        feature_names=ds.feature_names,
        notes=["exhaustive check of every nonempty subset; clause usage not tracked"],
    )
