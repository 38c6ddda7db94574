import json

import pytest

from conftest import A4_TEXT, GENUS2_TEXT, HIGMAN_TEXT
from corpus import MALFORMED
from fpgroups.cli import EXIT, main


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, text in {
        "higman": HIGMAN_TEXT,
        "z": "<a | >",
        "t": "<t | >",
        "a4": A4_TEXT,
        "g2": GENUS2_TEXT,
        "trivial": "<a | a>",
        "zz": "<a,b | [a,b]>",
    }.items():
        path = tmp_path / f"{name}.txt"
        path.write_text(text + "\n")
        out[name] = str(path)
    m = tmp_path / "m.json"
    m.write_text(json.dumps({"rows": 2, "cols": 2, "entries": ["2", "4", "6", "8"]}))
    out["matrix"] = str(m)
    return out


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    report = json.loads(out)
    assert EXIT[report["status"]] == code
    return code, report


def test_h1_higman(files, capsys):
    code, out, _ = run(capsys, "h1", files["higman"])
    assert (code, out.strip()) == (0, "trivial")


def test_parse_round_trip(files, capsys, tmp_path):
    code, out, _ = run(capsys, "parse", files["higman"])
    assert code == 0
    again = tmp_path / "again.txt"
    again.write_text(out)
    code2, out2, _ = run(capsys, "parse", str(again))
    assert code2 == 0 and out2 == out
    code3, report = run_json(capsys, "parse", files["higman"])
    js = tmp_path / "p.json"
    js.write_text(json.dumps(report))
    assert run(capsys, "parse", str(js))[1] == out


@pytest.mark.parametrize("text", MALFORMED)
def test_malformed_exit_3_with_position(text, tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text(text)
    code, _, err = run(capsys, "parse", str(path))
    assert code == 3
    assert "line" in err and "column" in err


def test_malformed_json_report(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("<a | a^>")
    code, out, _ = run(capsys, "parse", str(path), "--json")
    report = json.loads(out)
    assert code == 3 and report["status"] == "error"
    assert (report["line"], report["column"]) == (1, 8)


def test_missing_file_and_bad_usage(capsys):
    assert run(capsys, "h1", "/nonexistent/file")[0] == 3
    assert run(capsys, "nosuchcommand")[0] == 3
    assert run(capsys, "certify")[0] == 3


def test_snf(files, capsys):
    code, out, _ = run(capsys, "snf", files["matrix"])
    assert (code, out.strip()) == (0, "2 4")
    code, report = run_json(capsys, "snf", files["matrix"], "--transforms")
    assert report["diagonal"] == ["2", "4"] and "left" in report


def test_tc(files, capsys):
    code, report = run_json(capsys, "tc", files["a4"])
    assert code == 0 and report["index"] == 12 and report["check"] == "passed"
    code, report = run_json(capsys, "tc", files["a4"], "--subgroup", "a", "--strategy", "felsch")
    assert report["index"] == 6
    code, report = run_json(capsys, "tc", files["a4"], "--subgroup", "a,[a,b]")
    assert report["index"] == 3 and len(report["table"]["subgroup"]) == 2
    code, report = run_json(capsys, "tc", files["zz"], "--subgroup", "a", "--max-cosets", "200")
    assert code == 2 and report["status"] == "unknown"


def test_env_limits(files, capsys, monkeypatch):
    monkeypatch.setenv("FPGROUPS_MAX_COSETS", "50")
    assert run(capsys, "tc", files["zz"])[0] == 2
    assert run(capsys, "tc", files["zz"], "--max-cosets", "40")[0] == 2
    monkeypatch.setenv("FPGROUPS_MAX_COSETS", "lots")
    assert run(capsys, "tc", files["a4"])[0] == 3


def test_lowindex(files, capsys):
    code, report = run_json(capsys, "lowindex", files["a4"], "--max-index", "4")
    assert code == 0 and report["count"] == 5


def test_certify_exit_codes(files, capsys, tmp_path):
    code, report = run_json(capsys, "certify", files["z"], "--bound", "2")
    assert code == 1 and report["certificate"]["evidence"]["witness"]["index"] == 2
    out = tmp_path / "cert.json"
    code, _, _ = run(capsys, "certify", files["higman"], "--bound", "6", "--out", out)
    assert code == 0 and json.loads(out.read_text())["certificate"]["status"] == "certified"
    code, _ = run_json(capsys, "certify", files["higman"], "--bound", "6", "--max-nodes", "5")
    assert code == 2


def test_sc_check(files, capsys):
    code, out, _ = run(capsys, "sc-check", files["g2"])
    assert code == 0 and "1/8" in out
    code, report = run_json(capsys, "sc-check", files["a4"])
    assert code == 1 and report["report"]["lambda"] == "5/6"
    code, _, _ = run(capsys, "sc-check", files["g2"], "--lambda", "1/8")
    assert code == 1
    assert run(capsys, "sc-check", files["g2"], "--lambda", "7")[0] == 3


def test_dehn(files, capsys):
    code, out, _ = run(capsys, "dehn", files["g2"], "--word", "[a,b]*[c,d]")
    assert (code, out.strip()) == (0, "1")
    code, report = run_json(capsys, "dehn", files["g2"], "--word", "a*b")
    assert report["reduced"] == "a*b" and not report["trivial"]
    assert run(capsys, "dehn", files["a4"], "--word", "a")[0] == 1
    assert run(capsys, "dehn", files["g2"], "--word", "a*z")[0] == 3


@pytest.fixture(scope="module")
def rips_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("rips") / "higman.txt"
    path.write_text(HIGMAN_TEXT)
    out = path.parent / "rips.json"
    assert main(["rips", str(path), "--out", str(out)]) == 0
    return out


def test_rips_deterministic(rips_file, capsys, tmp_path):
    out2 = tmp_path / "again.json"
    code, _, _ = run(capsys, "rips", rips_file.parent / "higman.txt", "--out", out2)
    assert code == 0
    assert out2.read_bytes() == rips_file.read_bytes()
    report = json.loads(rips_file.read_text())
    assert len(report["gamma"]["generators"]) == 7 and len(report["gamma"]["relators"]) == 28


def test_rips_budget_exhausted(files, capsys):
    assert run(capsys, "rips", files["trivial"], "--max-rounds", "1")[0] == 2


def test_dehn_on_rips_json(rips_file, capsys):
    code, out, _ = run(capsys, "dehn", rips_file, "--word", "a*nu1*a^-1")
    assert code == 0 and out.strip() == "a*nu1*a^-1"


def test_fibre_and_ns(rips_file, capsys):
    code, report = run_json(capsys, "fibre", "--gamma", rips_file)
    assert code == 0 and len(report["a"]["generators"]) == 10
    code, report = run_json(capsys, "ns", "--gamma", rips_file, "--word", "a")
    assert code == 0 and report["a"]["generators"] == ["nu1", "nu2", "nu3", "a"]
    code, report = run_json(capsys, "ns", "--gamma", rips_file, "--word", "nu1")
    assert code == 1


def test_pipeline(files, capsys):
    code, report = run_json(capsys, "pipeline", "theorem-main", "--q", files["z"], "--bound", "2")
    assert code == 1 and "no-finite-quotients" in report["hypotheses"]
    code, report = run_json(capsys, "pipeline", "theorem-main", "--q", files["higman"], "--bound", "6")
    assert code == 0 and len(report["g"]["generators"]) == 7
    assert all(c["status"] != "certified" for c in report["profinite_claims"])


def test_pair_and_family(files, capsys):
    code, report = run_json(capsys, "pair", "gg", "--q", files["higman"], "--b", files["t"])
    assert code == 0 and len(report["g"]["relators"]) == 35
    code, report = run_json(capsys, "family", "gn", "--seed", "trivial", "--n", "1")
    assert code == 0 and report["direct_factor"] == "yes"
    code, report = run_json(capsys, "family", "gn", "--seed", "higman", "--n", "1", "--no-oracle")
    assert report["direct_factor"] == "unknown"
