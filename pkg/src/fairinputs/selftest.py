"""End-to-end check of the bundled fixtures against their expected outputs."""

from __future__ import annotations

from itertools import combinations

from . import fixtures
from .classifier import RandomizedLinearClassifier, accuracy_table
from .power import PowerCache
from .properties import CostVector, FeatureAssignment, check_fair_accuracy, check_fair_privacy, check_need_to_know
from .report import set_label
from .verifier import brute_force_verify, verify_tradeoff


def _fmt(values) -> str:
    return ",".join(str(v) for v in values)


def run_selftest(out=print) -> int:
    expected = fixtures.expected()
    results: list[tuple[str, bool]] = []

    ds = fixtures.load("table1")
    sets = [frozenset(c) for r in range(ds.d + 1) for c in combinations(range(ds.d), r)]
    cache = PowerCache(ds)
    for s in sets:
        key = set_label(ds, s)
        results.append((f"table1 phi {key}", _fmt(cache.get(s).phi) == expected[f"table1.phi.{key}"]))

    acc = accuracy_table(ds, RandomizedLinearClassifier(), sets)
    for j, s in enumerate(sets):
        key = set_label(ds, s)
        got = _fmt(row[j] for row in acc)
        results.append((f"table1 randomized accuracy {key}", got == expected[f"table1.randomized.{key}"]))

    fa = FeatureAssignment.uniform(ds.n, ds.all_features)
    clf = RandomizedLinearClassifier()
    results.append(("randomized classifier: fair accuracy", check_fair_accuracy(ds, clf, fa).holds))
    results.append(("randomized classifier: fair privacy", check_fair_privacy(fa, CostVector.feature_match(ds.d)).holds))
    results.append(("randomized classifier: need-to-know", check_need_to_know(ds, clf, fa).holds))

    rep = verify_tradeoff(ds)
    cands = ";".join(set_label(ds, s) for s in rep.candidates)
    results.append(("table1 verify", ("YES" if rep.tradeoff else "NO") == expected["table1.tradeoff"]))
    results.append(("table1 candidates", cands == expected["table1.candidates"]))
    results.append(("table1 brute force", brute_force_verify(ds)[0] == rep.tradeoff))

    xor = fixtures.load("xor")
    rep = verify_tradeoff(xor)
    results.append(("xor verify", ("YES" if rep.tradeoff else "NO") == expected["xor.tradeoff"]))
    results.append(("xor counterexample", rep.counterexample is not None
                    and set_label(xor, rep.counterexample) == expected["xor.counterexample"]))
    results.append(("xor brute force", brute_force_verify(xor) == (False, frozenset({0, 1}))))

    for name, ok in results:
        out(f"{'PASS' if ok else 'FAIL'}  {name}")
    failed = sum(not ok for _, ok in results)
    out(f"{len(results) - failed}/{len(results)} checks passed")
    return 1 if failed else 0
