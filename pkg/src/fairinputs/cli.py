"""Command-line entry point.

Exit codes for ``verify``: 0 trade-off holds, 10 it does not, 3 the search
was capped before a verdict could be certified, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Sequence

from . import fixtures
from .classifier import OptimalClassifier, RandomizedLinearClassifier, accuracy_table
from .dataset import Dataset, DatasetError, IngestConfig, load_csv, remove_constant_features, write_manifest
from .power import PowerCache
from .properties import (
    CostVector,
    FeatureAssignment,
    check_fair_accuracy,
    check_fair_privacy,
    check_need_to_know,
)
from .report import (
    dumps,
    grid_text,
    power_tables_text,
    power_tables_to_dict,
    rational,
    report_text,
    report_to_dict,
    set_label,
    verdict_text,
    verdict_to_dict,
)
from .verifier import VerifierOptions, brute_force_report, verify_tradeoff

log = logging.getLogger("fairinputs")

EXIT_YES, EXIT_NO, EXIT_ERROR, EXIT_BOUNDED = 0, 10, 2, 3


class UsageError(Exception):
    pass


def _add_dataset_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("dataset", type=Path, help="CSV file with a header row")
    sel = p.add_mutually_exclusive_group()
    sel.add_argument("--label-column", metavar="NAME", help="label column by header name (default: last column)")
    sel.add_argument("--label-index", metavar="K", type=int, help="label column by position (negative counts from the end)")
    p.add_argument("--drop-missing-rows", action="store_true", help="drop rows with missing cells instead of failing")
    p.add_argument(
        "--missing-token", action="append", default=[], metavar="TOK",
        help="extra token treated as missing, e.g. '?' (repeatable)",
    )
    p.add_argument("--manifest", type=Path, metavar="FILE", help="write a key=value preprocessing manifest")
    p.add_argument("--output", choices=("text", "json"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fairinputs",
        description="Audit datasets for the trade-off between fair accuracy, fair privacy and need-to-know.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="decide whether the dataset exhibits the trade-off")
    _add_dataset_args(p)
    p.add_argument("--brute-force", action="store_true", help="check every subset directly instead of pruned search")
    p.add_argument("--max-candidate-size", type=int, metavar="K", help="stop the search at sets of size K (exit 3 if no counterexample)")
    p.add_argument("--threads", type=int, default=1, help="worker threads per search level")
    p.add_argument("--cache-cap", type=int, metavar="N", help="keep at most N power tables in memory")

    p = sub.add_parser("pp", help="print predictive power of feature sets")
    _add_dataset_args(p)
    what = p.add_mutually_exclusive_group()
    what.add_argument("--all-subsets", action="store_true")
    what.add_argument("--max-size", type=int, metavar="K", help="all subsets with at most K features")
    what.add_argument("--set", action="append", default=[], metavar="F1,F2", help="one feature set (repeatable; '' = empty set)")

    p = sub.add_parser("properties", help="check the three properties for a classifier and feature assignment")
    _add_dataset_args(p)
    p.add_argument("--assignment", type=Path, required=True, help='JSON object: point index (or "*") -> feature names')
    p.add_argument("--cost-regime", choices=("feature-count", "feature-match", "custom"), default="feature-match")
    p.add_argument("--costs", metavar="C1,C2,...", help="per-feature costs for the custom regime (rationals allowed)")
    p.add_argument("--classifier", choices=("optimal", "appendix-b"), default="optimal")

    p = sub.add_parser("demo", help="built-in demonstrations")
    p.add_argument("name", choices=("appendix-b",))
    p.add_argument("--output", choices=("text", "json"), default="text")

    sub.add_parser("selftest", help="run the bundled fixtures end to end")
    return parser


def _load(args: argparse.Namespace) -> Dataset:
    if args.label_column is None and args.label_index is None:
        cfg = IngestConfig(label_index=-1, drop_missing_rows=args.drop_missing_rows)
    else:
        cfg = IngestConfig(
            label_column=args.label_column, label_index=args.label_index, drop_missing_rows=args.drop_missing_rows
        )
    if args.missing_token:
        cfg = IngestConfig(
            label_column=cfg.label_column, label_index=cfg.label_index,
            drop_missing_rows=cfg.drop_missing_rows, missing_tokens=("", *args.missing_token),
        )
    ds = load_csv(args.dataset, cfg)
    if args.manifest:
        _, removed = remove_constant_features(ds)
        write_manifest(args.manifest, {
            "source": args.dataset,
            "rows": ds.n,
            "rows_dropped": ds.rows_dropped,
            "missing_tokens": list(cfg.missing_tokens),
            "label_column": cfg.label_column if cfg.label_column is not None else f"#{cfg.label_index}",
            "features": ds.d,
            "constant_features_removed": removed,
        })
    return ds


def cmd_verify(args: argparse.Namespace) -> int:
    ds = _load(args)
    if args.brute_force:
        report = brute_force_report(ds)
    else:
        opts = VerifierOptions(max_candidate_size=args.max_candidate_size, threads=args.threads, cache_cap=args.cache_cap)
        report = verify_tradeoff(ds, opts)
    if args.output == "json":
        print(dumps(report_to_dict(report)))
    else:
        print(report_text(report, args.dataset.name))
    if not report.tradeoff:
        return EXIT_NO
    return EXIT_BOUNDED if report.verdict_bounded else EXIT_YES


def _parse_set(ds: Dataset, spec: str) -> frozenset[int]:
    names = [x.strip() for x in spec.strip().strip("{}").split(",") if x.strip()]
    return ds.feature_set(names)


def cmd_pp(args: argparse.Namespace) -> int:
    ds = _load(args)
    if args.set:
        sets = [_parse_set(ds, s) for s in args.set]
    else:
        k = ds.d if args.all_subsets or args.max_size is None else args.max_size
        sets = [frozenset(c) for r in range(min(k, ds.d) + 1) for c in combinations(range(ds.d), r)]
    cache = PowerCache(ds)
    tables = [cache.get(s) for s in sets]
    if args.output == "json":
        print(dumps(power_tables_to_dict(ds, tables)))
    else:
        print(power_tables_text(ds, tables))
    return 0


def _read_assignment(ds: Dataset, path: Path) -> FeatureAssignment:
    raw = json.loads(path.read_text(encoding="utf-8"))
    if not isinstance(raw, dict):
        raise UsageError("assignment must be a JSON object")
    default = raw.pop("*", None)
    sets = []
    for i in range(ds.n):
        names = raw.get(str(i), default)
        if names is None:
            raise UsageError(f"assignment has no entry for point {i}")
        sets.append(ds.feature_set(names))
    extra = set(raw) - {str(i) for i in range(ds.n)}
    if extra:
        raise UsageError(f"assignment names unknown points: {sorted(extra)}")
    return FeatureAssignment(tuple(sets))


def _verdicts(ds, clf, fa, costs):
    return {
        "fair_accuracy": check_fair_accuracy(ds, clf, fa),
        "fair_privacy": check_fair_privacy(fa, costs),
        "need_to_know": check_need_to_know(ds, clf, fa),
    }


def _named(ds: Dataset, verdict_dict: dict) -> dict:
    witness = verdict_dict["witness"]
    for key in ("set", "subset"):
        if key in witness:
            witness[key] = ds.set_names(witness[key])
    return verdict_dict


def cmd_properties(args: argparse.Namespace) -> int:
    ds = _load(args)
    fa = _read_assignment(ds, args.assignment)
    costs_arg = [Fraction(c) for c in args.costs.split(",")] if args.costs else None
    costs = CostVector.for_regime(args.cost_regime, ds.d, costs_arg)
    if len(costs.costs) != ds.d:
        raise UsageError(f"expected {ds.d} costs, got {len(costs.costs)}")
    clf = OptimalClassifier() if args.classifier == "optimal" else RandomizedLinearClassifier()
    verdicts = _verdicts(ds, clf, fa, costs)
    if args.output == "json":
        print(dumps({k: _named(ds, verdict_to_dict(v)) for k, v in verdicts.items()}))
    else:
        for k, v in verdicts.items():
            print(verdict_text(k.replace("_", " "), v, ds))
    return 0


def _randomized_demo() -> tuple[Dataset, list[frozenset[int]], list[list[Fraction]], dict, list[list[Fraction]]]:
    ds = fixtures.load("table1")
    sets = [frozenset(c) for r in range(ds.d + 1) for c in combinations(range(ds.d), r)]
    acc = accuracy_table(ds, RandomizedLinearClassifier(), sets)
    fa = FeatureAssignment.uniform(ds.n, ds.all_features)
    verdicts = _verdicts(ds, RandomizedLinearClassifier(), fa, CostVector.feature_match(ds.d))
    cache = PowerCache(ds)
    optimal = [[cache.get(s).at(i) for s in sets] for i in range(ds.n)]
    return ds, sets, acc, verdicts, optimal


def cmd_demo(args: argparse.Namespace) -> int:
    ds, sets, acc, verdicts, optimal = _randomized_demo()
    full = len(sets) - 1
    non_optimal = [i for i in range(ds.n) if acc[i][full] < optimal[i][full]]
    if args.output == "json":
        print(dumps({
            "sets": [ds.set_names(s) for s in sets],
            "accuracy": [[rational(q) for q in row] for row in acc],
            "properties": {k: _named(ds, verdict_to_dict(v)) for k, v in verdicts.items()},
            "optimal_accuracy_full_set": [rational(optimal[i][full]) for i in range(ds.n)],
            "non_optimal": bool(non_optimal),
        }))
        return 0
    print("Accuracy of the randomized classifier on the illustrative dataset")
    print(grid_text([f"x{i + 1}" for i in range(ds.n)], [set_label(ds, s) for s in sets], acc))
    print()
    print("Using {f1,f2} for every point:")
    for k, v in verdicts.items():
        print("  " + verdict_text(k.replace("_", " "), v, ds))
    print(
        f"  non-optimal: accuracy {acc[0][full]} < {optimal[0][full]} = optimal accuracy with {set_label(ds, sets[full])}"
        if non_optimal else "  classifier matches the optimal accuracy"
    )
    return 0


def cmd_selftest(args: argparse.Namespace) -> int:
    from .selftest import run_selftest

    return run_selftest()


COMMANDS = {
    "verify": cmd_verify,
    "pp": cmd_pp,
    "properties": cmd_properties,
    "demo": cmd_demo,
    "selftest": cmd_selftest,
}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else 0
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return COMMANDS[args.command](args)
    except (DatasetError, UsageError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
