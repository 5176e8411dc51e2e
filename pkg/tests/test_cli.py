import json

import pytest

from fairinputs import fixtures
from fairinputs.cli import EXIT_BOUNDED, EXIT_ERROR, EXIT_NO, EXIT_YES, run
from fairinputs.dataset import read_manifest
from fairinputs.report import dumps, parse_rational

TABLE1 = str(fixtures.path("table1"))
XOR = str(fixtures.path("xor"))


def test_verify_text(capsys):
    assert run(["verify", TABLE1, "--label-column", "label"]) == EXIT_YES
    out = capsys.readouterr().out
    assert "YES" in out and "largest candidate size" in out


def test_verify_json_no(capsys):
    assert run(["verify", XOR, "--output", "json"]) == EXIT_NO
    report = json.loads(capsys.readouterr().out)
    assert report["tradeoff"] == "NO"
    assert report["counterexample"] == ["f1", "f2"]


def test_verify_brute_force(capsys):
    assert run(["verify", XOR, "--brute-force"]) == EXIT_NO
    assert run(["verify", TABLE1, "--brute-force", "--output", "json"]) == EXIT_YES
    assert "brute-force" in capsys.readouterr().out


def test_verify_bounded(tmp_path, capsys):
    rows = ["a,b,label"] + [f"{a},{b},{y}" for y in (0, 1) for a in (0, 1) for b in (0, 1)]
    p = tmp_path / "flat.csv"
    p.write_text("\n".join(rows) + "\n")
    assert run(["verify", str(p), "--max-candidate-size", "1"]) == EXIT_BOUNDED
    assert run(["verify", str(p)]) == EXIT_YES
    assert run(["verify", str(p), "--threads", "3", "--cache-cap", "2"]) == EXIT_YES


def test_json_round_trip(capsys):
    run(["verify", TABLE1, "--output", "json"])
    text = capsys.readouterr().out.rstrip("\n")
    assert dumps(json.loads(text)) == text
    run(["pp", TABLE1, "--all-subsets", "--output", "json"])
    text = capsys.readouterr().out.rstrip("\n")
    assert dumps(json.loads(text)) == text


def test_pp_all_subsets(capsys):
    assert run(["pp", TABLE1, "--all-subsets"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split() == ["point", "phi{}", "phi{f1}", "phi{f2}", "phi{f1,f2}"]
    assert [ln.split()[1:] for ln in lines[1:]] == [
        ["3/4", "2/3", "1", "1"],
        ["3/4", "2/3", "1", "1"],
        ["3/4", "2/3", "1/2", "1"],
        ["3/4", "1", "1/2", "1"],
    ]


def test_pp_json_sets(capsys):
    assert run(["pp", TABLE1, "--set", "f1", "--set", "", "--output", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["sets"][0]["features"] == ["f1"]
    assert data["sets"][0]["phi"] == ["2/3", "2/3", "2/3", "1/1"]
    assert data["sets"][1]["phi_approx"] == [0.75] * 4
    assert [parse_rational(x) for x in data["sets"][1]["phi"]] == [parse_rational("3/4")] * 4


def test_pp_max_size(capsys):
    run(["pp", TABLE1, "--max-size", "1", "--output", "json"])
    assert len(json.loads(capsys.readouterr().out)["sets"]) == 3


def test_properties(tmp_path, capsys):
    a = tmp_path / "a.json"
    a.write_text(json.dumps({str(i): ["f1", "f2"] for i in range(4)}))
    assert run(["properties", TABLE1, "--assignment", str(a), "--classifier", "appendix-b", "--output", "json"]) == 0
    v = json.loads(capsys.readouterr().out)
    assert v["fair_accuracy"] == {"holds": True, "witness": {"gamma": "4/5", "gamma_approx": 0.8}}
    assert v["fair_privacy"]["holds"] and v["fair_privacy"]["witness"]["set"] == ["f1", "f2"]
    assert v["need_to_know"]["holds"]

    assert run(["properties", TABLE1, "--assignment", str(a)]) == 0
    out = capsys.readouterr().out
    assert "need to know: fails" in out and "subset={f2}" in out


def test_properties_feature_count_and_custom(tmp_path, capsys):
    a = tmp_path / "a.json"
    a.write_text(json.dumps({"0": ["f1"], "1": ["f2"], "2": ["f1"], "3": ["f2"]}))
    run(["properties", TABLE1, "--assignment", str(a), "--cost-regime", "feature-count", "--output", "json"])
    assert json.loads(capsys.readouterr().out)["fair_privacy"]["holds"]
    run(["properties", TABLE1, "--assignment", str(a), "--cost-regime", "custom", "--costs", "1/2,1/2", "--output", "json"])
    assert json.loads(capsys.readouterr().out)["fair_privacy"]["holds"]
    assert run(["properties", TABLE1, "--assignment", str(a), "--cost-regime", "custom", "--costs", "1"]) == EXIT_ERROR


def test_properties_bad_assignment(tmp_path, capsys):
    a = tmp_path / "a.json"
    a.write_text(json.dumps({"0": ["f1"]}))
    assert run(["properties", TABLE1, "--assignment", str(a)]) == EXIT_ERROR
    a.write_text(json.dumps({"*": ["nope"]}))
    assert run(["properties", TABLE1, "--assignment", str(a)]) == EXIT_ERROR
    assert "error" in capsys.readouterr().err


def test_demo(capsys):
    assert run(["demo", "appendix-b"]) == 0
    out = capsys.readouterr().out
    assert "5/12" in out and "4/5" in out
    assert "fair accuracy: holds" in out and "need to know: holds" in out and "fair privacy: holds" in out
    assert "non-optimal" in out
    assert run(["demo", "appendix-b", "--output", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["non_optimal"] and data["accuracy"][3] == ["1/2", "3/4", "1/2", "4/5"]


def test_selftest(capsys):
    assert run(["selftest"]) == 0
    assert "FAIL" not in capsys.readouterr().out


def test_usage_errors(capsys):
    assert run([]) == EXIT_ERROR
    assert run(["verify"]) == EXIT_ERROR
    assert run(["verify", "/nonexistent.csv"]) == EXIT_ERROR
    assert run(["verify", TABLE1, "--max-candidate-size", "0"]) == EXIT_ERROR
    assert run(["verify", TABLE1, "--label-column", "zzz"]) == EXIT_ERROR
    assert run(["--help"]) == 0


def test_missing_values_and_manifest(tmp_path, capsys):
    p = tmp_path / "m.csv"
    p.write_text("a,b,c,label\n1,?,k,+\n2,3,k,-\n4,5,k,+\n")
    assert run(["verify", str(p), "--missing-token", "?"]) == EXIT_ERROR
    m = tmp_path / "manifest.txt"
    code = run(["verify", str(p), "--missing-token", "?", "--drop-missing-rows", "--manifest", str(m)])
    assert code in (EXIT_YES, EXIT_NO)
    meta = read_manifest(m)
    assert meta["rows_dropped"] == "1" and meta["rows"] == "2"
    assert meta["constant_features_removed"] == "c"
