import json

import pytest

from spinstab.cli import main
from spinstab.report import VerificationReport


def test_report_json_roundtrip():
    rep = VerificationReport("demo", 3, {"a": 1})
    rep.add("c1", "x = y", 1.25e-11, 1e-10, 0.5, note="hi")
    rep.add("c2", "z = w", 2.0, 1e-10, 0.1)
    text = rep.to_json()
    back = VerificationReport.from_json(text)
    assert back.suite == "demo"
    assert back.records[0].value == 1.25e-11
    assert back.records[0].passed
    assert not back.records[1].passed
    assert not back.passed
    assert back.to_json() == text


def test_report_pass_logic():
    rep = VerificationReport("demo", 0, {})
    rep.add("ok", "trivial", 0.0, 0.0, passed=True)
    assert rep.passed
    rep.add("bad", "trivial", 5.0, 1.0)
    assert not rep.passed
    assert [r.check_id for r in rep.failures()] == ["bad"]


def test_strip_timings_removes_wall_time():
    rep = VerificationReport("demo", 0, {})
    rep.add("ok", "trivial", 0.0, 0.0, wall_time=1.23, passed=True)
    obj = rep.strip_timings()
    assert "wall_time" not in obj["records"][0]


def test_verify_unknown_suite_exits_2():
    with pytest.raises(SystemExit):
        main(["verify", "nonsense"])  # argparse rejects the choice


def test_verify_bad_cutoff_exits_2():
    assert main(["verify", "torus", "--cutoff", "99"]) == 2


def test_verify_clifford_writes_report(tmp_path, capsys):
    out = tmp_path / "rep.json"
    code = main(["verify", "clifford", "--seed", "7", "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["passed"] is True
    assert payload["seed"] == 7
    assert payload["reports"][0]["suite"] == "clifford"
    text = capsys.readouterr().out
    assert "PASS" in text


def test_verify_tolerance_scale_flag(tmp_path):
    out = tmp_path / "rep.json"
    code = main(["verify", "clifford", "--tolerance-scale", "10.0",
                 "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["config"]["tolerance_scale"] == 10.0


def test_warped_scan_product(tmp_path):
    fam = tmp_path / "family.json"
    fam.write_text(json.dumps({
        "fiber": {"kind": "sphere", "radius": 1.0},
        "profile": {"kind": "zero"},
        "frozen_s": 0.0,
        "scan": {"points": 200},
    }))
    out = tmp_path / "scan.csv"
    code = main(["warped", "scan", "--family", str(fam), "--out", str(out)])
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "r,q_index,scalar,lower_bound"
    values = [float(line.split(",")[2]) for line in lines[1:]]
    assert max(abs(v - 2.0) for v in values) <= 1e-12  # S == S_M == 2


def test_warped_build_reports_mass(tmp_path):
    fam = tmp_path / "family.json"
    fam.write_text(json.dumps({
        "fiber": {"kind": "torus", "k": 2},
        "profile": {"kind": "tail", "m_inf": -2.0, "c": 5.0},
    }))
    out = tmp_path / "build.json"
    code = main(["warped", "build", "--family", str(fam), "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["mass"] == -2.0
    assert abs(payload["asymptotic_order"] - 1.0) < 0.05


def test_warped_bad_descriptor_exits_2(tmp_path):
    fam = tmp_path / "family.json"
    fam.write_text(json.dumps({"fiber": {"kind": "klein_bottle"}}))
    assert main(["warped", "build", "--family", str(fam)]) == 2


def test_warped_missing_file_exits_2(tmp_path):
    assert main(["warped", "build", "--family",
                 str(tmp_path / "none.json")]) == 2


def test_spectrum_flat_t4(tmp_path):
    desc = tmp_path / "desc.json"
    desc.write_text(json.dumps({"dim": 4, "cutoff": 1, "grid": 12}))
    out = tmp_path / "spec.csv"
    code = main(["spectrum", "--descriptor", str(desc), "--count", "3",
                 "--out", str(out)])
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "kind,index,value,multiplicity,residual"
    first = lines[1].split(",")
    assert first[0] == "tt_rayleigh"
    assert float(first[2]) == 0.0
    assert int(first[3]) == 9  # constant traceless tensors in dimension 4
    second = lines[2].split(",")
    assert abs(float(second[2]) - 1.0) < 1e-10
    ground = lines[-1].split(",")
    assert ground[0] == "conformal_ground"
    assert abs(float(ground[2])) < 1e-10
    assert float(ground[4] or 0.0) <= 1e-8


def test_spectrum_count_zero_header_only(tmp_path):
    desc = tmp_path / "desc.json"
    desc.write_text(json.dumps({"dim": 3, "cutoff": 1, "grid": 12}))
    out = tmp_path / "spec.csv"
    assert main(["spectrum", "--descriptor", str(desc), "--count", "0",
                 "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines == ["kind,index,value,multiplicity,residual"]


def test_spectrum_bad_cutoff_exits_2(tmp_path):
    desc = tmp_path / "desc.json"
    desc.write_text(json.dumps({"dim": 4, "cutoff": 99}))
    assert main(["spectrum", "--descriptor", str(desc)]) == 2


def test_spectrum_perturbed_metric(tmp_path):
    desc = tmp_path / "desc.json"
    desc.write_text(json.dumps({
        "dim": 3, "cutoff": 1, "grid": 16,
        "perturbation": {"seed": 3, "amplitude": 0.02, "count": 2},
    }))
    out = tmp_path / "spec.csv"
    assert main(["spectrum", "--descriptor", str(desc), "--count", "4",
                 "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    ground = lines[-1].split(",")
    assert ground[0] == "conformal_ground"
    assert float(ground[4]) <= 1e-8
