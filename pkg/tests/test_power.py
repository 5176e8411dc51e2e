from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings

from fairinputs.dataset import Dataset
from fairinputs.power import (
    LabelDistribution,
    PowerCache,
    conditional_distribution,
    group_by_projection,
    naive_phi,
    power_table,
    predictive_power,
)

from conftest import all_subsets, datasets, oracle_phi

EXPECTED_POWER = {
    frozenset(): [F(3, 4)] * 4,
    frozenset({0}): [F(2, 3), F(2, 3), F(2, 3), F(1)],
    frozenset({1}): [F(1), F(1), F(1, 2), F(1, 2)],
    frozenset({0, 1}): [F(1)] * 4,
}


def test_group_by_projection(table1):
    assert group_by_projection(table1, {0}) == [[0, 1, 2], [3]]
    assert group_by_projection(table1, set()) == [[0, 1, 2, 3]]
    assert group_by_projection(table1, {0, 1}) == [[0], [1], [2], [3]]
    assert group_by_projection(table1, {1}) == [[0], [1], [2, 3]]


def test_conditional_distribution(table1):
    minus, plus = table1.label_names.index("-"), table1.label_names.index("+")
    dist = conditional_distribution(table1, [0, 1, 2])
    assert (dist.counts[minus], dist.counts[plus], dist.total) == (2, 1, 3)
    dist = conditional_distribution(table1, range(4))
    assert (dist.counts[minus], dist.counts[plus], dist.total) == (3, 1, 4)
    dist = conditional_distribution(table1, [2])
    assert dist.total == 1 and sorted(dist.counts) == [0, 1]
    with pytest.raises(ValueError):
        conditional_distribution(table1, [])


def test_label_distribution_mode_ties_to_smallest():
    assert LabelDistribution((2, 2, 1), 5).mode() == 0
    assert LabelDistribution((1, 3, 3), 7).mode() == 1
    with pytest.raises(ValueError):
        LabelDistribution((1, 1), 3)


def test_predictive_power_examples(table1):
    assert predictive_power(table1, {0}, 0) == F(2, 3)
    assert predictive_power(table1, {1}, 2) == F(1, 2)
    assert all(predictive_power(table1, set(), i) == F(3, 4) for i in range(4))


def test_power_of_illustrative_dataset(table1):
    cache = PowerCache(table1)
    for s, expected in EXPECTED_POWER.items():
        assert power_table(table1, s, cache).phi == expected
        assert [predictive_power(table1, s, i) for i in range(4)] == expected
        assert [oracle_phi(table1, s, i) for i in range(4)] == expected
    assert power_table(table1, {0, 1}, cache).any_distinguishable
    assert power_table(table1, {0}, cache).any_distinguishable
    assert not power_table(table1, set(), cache).any_distinguishable


def test_cache_memoizes(table1):
    cache = PowerCache(table1)
    a = power_table(table1, {0}, cache)
    b = power_table(table1, frozenset({0}), cache)
    assert a is b
    assert cache.hits == 1 and cache.misses == 1
    with pytest.raises(ValueError):
        power_table(Dataset.from_rows([[0]], ["a"]), {0}, cache)


def test_cache_cap_evicts_largest_first(table1):
    cache = PowerCache(table1, cap=2)
    for s in [set(), {0}, {0, 1}]:
        cache.get(s)
    assert len(cache) <= 2
    assert frozenset({0, 1}) not in cache
    assert frozenset() in cache
    with pytest.raises(ValueError):
        PowerCache(table1, cap=0)


def test_incremental_refinement_matches_fresh():
    rng = np.random.default_rng(3)
    ds = Dataset.from_rows(rng.integers(0, 4, size=(200, 5)).tolist(), rng.integers(0, 3, size=200).tolist())
    cache = PowerCache(ds)
    cache.get({0})
    cache.get({0, 2})
    refined = cache.get({0, 2, 4})
    fresh = power_table(ds, {0, 2, 4})
    assert refined.phi == fresh.phi


def test_wide_keys_do_not_overflow():
    # 40 features with 8 values each: the naive mixed-radix key would need 120 bits
    rng = np.random.default_rng(0)
    rows = rng.integers(0, 8, size=(300, 40))
    ds = Dataset.from_rows(rows.tolist(), rng.integers(0, 2, size=300).tolist())
    s = frozenset(range(40))
    assert power_table(ds, s).phi == naive_phi(ds, s)


@settings(max_examples=60, deadline=None)
@given(datasets(max_d=4))
def test_vectorised_matches_oracle(ds):
    cache = PowerCache(ds)
    for s in all_subsets(ds.d):
        expected = [oracle_phi(ds, s, i) for i in range(ds.n)]
        assert cache.get(s).phi == expected
        assert naive_phi(ds, s) == expected


@settings(max_examples=60, deadline=None)
@given(datasets(max_d=4))
def test_power_invariants(ds):
    subsets = all_subsets(ds.d)
    cache = PowerCache(ds)
    top = max(np.bincount(ds.labels)) / F(ds.n)
    assert cache.get(set()).phi == [top] * ds.n
    for s in subsets:
        table = cache.get(s)
        phi = table.phi
        assert table.any_distinguishable == any(p == 1 for p in phi)
        assert all(F(1, ds.n) <= p <= 1 and p >= F(1, ds.label_count) for p in phi)
        for t in subsets:
            if s <= t:
                sup = cache.get(t).phi
                assert all(sup[i] == 1 for i in range(ds.n) if phi[i] == 1)


@given(datasets(max_d=3))
def test_constant_feature_does_not_change_power(ds):
    rows = [list(ds.point(i)) + [0] for i in range(ds.n)]
    wider = Dataset.from_rows(rows, ds.labels.tolist())
    for s in all_subsets(ds.d):
        assert power_table(wider, s | {ds.d}).phi == power_table(ds, s).phi
