import json

import pytest

from twistlab import cli
from twistlab.factorization import MAP_2, FactorTuple, gen


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out else None), out.err


def test_build_writes_tuple(tmp_path, capsys):
    p = tmp_path / "x2.json"
    code, rep, _ = run(capsys, "build", "x2", "--out", str(p))
    assert code == 0 and rep["factors"] == 196 and rep["artifacts"] == [str(p)]
    assert len(FactorTuple.loads(p.read_text())) == 196


def test_build_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "build", "genus2-x1-twisted", "--out", str(a))
    run(capsys, "build", "genus2-x1-twisted", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".")]


def test_build_into_missing_directory_is_io_error(tmp_path, capsys):
    code, _, err = run(capsys, "build", "x1", "--out", str(tmp_path / "no" / "x.json"))
    assert code == 2 and "cannot write" in err


def test_verify_genus2_all_levels(capsys):
    code, rep, _ = run(capsys, "--no-timings", "verify", "genus2-x1")
    assert code == 0
    assert [c["level"] for c in rep["checks"]] == ["permutation", "homology", "base-exact"]
    assert rep["perm_group_order"] == 720


def test_homology_pass_is_never_an_identity_claim(capsys):
    _, rep, _ = run(capsys, "verify", "genus2-x2", "--level", "homology")
    (check,) = rep["checks"]
    assert "identity" not in check["name"] and "not sufficient" in check["name"]


def test_verify_failing_tuple_exits_1(tmp_path, capsys):
    p = tmp_path / "t.json"
    p.write_text(FactorTuple(MAP_2, (gen(1), gen(1))).dumps())
    code, rep, _ = run(capsys, "verify", str(p), "--level", "base")
    assert code == 1 and rep["verdict"] is False


def test_verify_corrupted_file_exits_2(tmp_path, capsys):
    p = tmp_path / "t.json"
    p.write_text("{not json")
    code, rep, err = run(capsys, "verify", str(p))
    assert code == 2 and rep is None and "not a factor tuple" in err


def test_verify_moishezon_tuple_skips_homology_by_default(tmp_path, capsys):
    from twistlab.factorization import moishezon_tuples

    p = tmp_path / "m.json"
    p.write_text(moishezon_tuples()[0].dumps())
    code, rep, _ = run(capsys, "verify", str(p))
    assert code == 0 and {c["level"] for c in rep["checks"]} == {"permutation", "base-exact"}


def test_usage_error_exit_code(capsys):
    assert cli.main(["scan"]) == 2
    assert cli.main(["build", "x3"]) == 2


def test_scan_budget_0(tmp_path, capsys):
    p = tmp_path / "scan.json"
    code, rep, _ = run(capsys, "scan", "x2", "--budget", "0", "--out", str(p))
    assert code == 0 and rep["kinds"] == {"repeat": 1740}
    assert len(json.loads(p.read_text())["pairs"]) == 1740


def test_scan_negative_budget(capsys):
    assert cli.main(["scan", "x2", "--budget", "-1"]) == 2


def test_fixture_flag_and_env_validation(monkeypatch, tmp_path, capsys):
    assert cli.main(["--fixtures", str(tmp_path / "missing"), "verify", "x2", "--level", "perm"]) == 2
    monkeypatch.setenv(cli.FIXTURES_ENV, str(tmp_path / "missing"))
    assert cli.main(["verify", "x2", "--level", "perm"]) == 2


def test_report_is_deterministic(capsys):
    _, a, _ = run(capsys, "--no-timings", "verify", "genus2-x2")
    _, b, _ = run(capsys, "--no-timings", "verify", "genus2-x2")
    assert a == b


@pytest.mark.slow
def test_certify_phi_reports_the_obstruction(capsys):
    code, rep, _ = run(capsys, "certify", "phi")
    assert code == 1
    assert "gap profiles" in rep["error"]
