"""Text and JSON rendering for power tables, verdicts and verification reports.

Rationals are written as ``"num/den"`` strings. A float rendering is added
next to each one under an ``*_approx`` key for human readers only.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Sequence

from .dataset import Dataset
from .power import PowerTable
from .properties import PropertyVerdict
from .verifier import VerificationReport


def rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    num, _, den = text.partition("/")
    return Fraction(int(num), int(den or 1))


def approx(q: Fraction) -> float:
    return float(f"{float(q):.15g}")


def short(q: Fraction) -> str:
    """Compact form for tables: ``1`` rather than ``1/1``."""
    return str(q)


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)


def set_label(ds: Dataset, s: frozenset[int]) -> str:
    return "{" + ",".join(ds.set_names(s)) + "}"


def report_to_dict(report: VerificationReport) -> dict[str, Any]:
    names = report.feature_names
    return {
        "tradeoff": "YES" if report.tradeoff else "NO",
        "verdict_bounded": report.verdict_bounded,
        "method": report.method,
        "counterexample": report.counterexample_names(),
        "candidates_examined": report.candidates_examined,
        "largest_candidate_size": report.largest_candidate_size,
        "clause2_used": report.clause2_used,
        "all_candidates_satisfy_clause1": report.all_candidates_clause1,
        "constant_features_removed": list(report.constant_features_removed),
        "n": report.n,
        "d": report.d,
        "label_count": report.label_count,
        "elapsed_seconds": round(report.elapsed, 6),
        "notes": list(report.notes),
        "feature_names": list(names),
    }


def report_text(report: VerificationReport, name: str = "dataset") -> str:
    cols = [
        ("dataset", name),
        ("size", str(report.n)),
        ("# features", str(report.d)),
        ("# labels", str(report.label_count)),
        ("largest candidate size", str(report.largest_candidate_size)),
        ("all candidates satisfy 1st clause", _mark(report.all_candidates_clause1)),
        ("2nd clause needed", _mark(report.clause2_used)),
        ("trade-off", ("YES" if report.tradeoff else "NO") + (" (bounded)" if report.verdict_bounded else "")),
    ]
    widths = [max(len(h), len(v)) for h, v in cols]
    lines = [
        " | ".join(h.ljust(w) for (h, _), w in zip(cols, widths)),
        "-+-".join("-" * w for w in widths),
        " | ".join(v.ljust(w) for (_, v), w in zip(cols, widths)),
        "",
        f"method: {report.method}",
        f"candidates examined: {report.candidates_examined}",
        f"constant features removed: {', '.join(report.constant_features_removed) or 'none'}",
    ]
    if report.counterexample is not None:
        lines.append("counterexample: {" + ",".join(report.counterexample_names()) + "}")
    lines.append(f"elapsed: {report.elapsed:.3f}s")
    lines.extend(f"note: {note}" for note in report.notes)
    return "\n".join(lines)


def _mark(flag: bool) -> str:
    return "yes" if flag else "no"


def power_tables_to_dict(ds: Dataset, tables: Sequence[PowerTable]) -> dict[str, Any]:
    return {
        "points": [f"x{i + 1}" for i in range(ds.n)],
        "sets": [
            {
                "features": ds.set_names(t.set),
                "phi": [rational(q) for q in t.phi],
                "phi_approx": [approx(q) for q in t.phi],
                "any_distinguishable": t.any_distinguishable,
            }
            for t in tables
        ],
    }


def grid_text(row_labels: Sequence[str], col_labels: Sequence[str], cells: Sequence[Sequence[Fraction]]) -> str:
    body = [[short(q) for q in row] for row in cells]
    widths = [max([len(col_labels[j])] + [len(r[j]) for r in body]) for j in range(len(col_labels))]
    first = max([len(x) for x in row_labels] + [len("point")])
    lines = ["point".ljust(first) + "  " + "  ".join(c.rjust(w) for c, w in zip(col_labels, widths))]
    for label, row in zip(row_labels, body):
        lines.append(label.ljust(first) + "  " + "  ".join(v.rjust(w) for v, w in zip(row, widths)))
    return "\n".join(lines)


def power_tables_text(ds: Dataset, tables: Sequence[PowerTable]) -> str:
    cols = ["phi" + set_label(ds, t.set) for t in tables]
    cells = [[t.at(i) for t in tables] for i in range(ds.n)]
    return grid_text([f"x{i + 1}" for i in range(ds.n)], cols, cells)


def _jsonable(value: Any) -> Any:
    if isinstance(value, Fraction):
        return rational(value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        out = {}
        for k, v in value.items():
            out[k] = _jsonable(v)
            if isinstance(v, Fraction):
                out[f"{k}_approx"] = approx(v)
        return out
    return value


def verdict_to_dict(v: PropertyVerdict) -> dict[str, Any]:
    return {"holds": v.holds, "witness": _jsonable(v.witness)}


def verdict_text(name: str, v: PropertyVerdict, ds: Dataset | None = None) -> str:
    witness = dict(v.witness)
    if ds is not None:
        for key in ("set", "subset"):
            if key in witness:
                witness[key] = "{" + ",".join(ds.set_names(witness[key])) + "}"
    detail = ", ".join(f"{k}={_plain(val)}" for k, val in witness.items())
    return f"{name}: {'holds' if v.holds else 'fails'}" + (f" ({detail})" if detail else "")


def _plain(value: Any) -> str:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_plain(v) for v in value) + "]"
    return str(value)
