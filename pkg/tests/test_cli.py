import csv
import io
import json

import numpy as np
import pytest

from lieiso.cli import main
from lieiso.reports import SCAN_COLUMNS, TABLE_COLUMNS


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_classify_text_report(capsys):
    code, out, err = run_cli(
        capsys, "classify", "--family", "c", "--c", "0", "--mu", "1", "--nu", "1"
    )
    assert code == 0 and err == ""
    assert "Product_SO2" in out
    assert "index of symmetry" in out.lower()


def test_classify_json_report(capsys):
    code, out, _ = run_cli(
        capsys,
        "classify", "--family", "c", "--c", "0", "--mu", "1", "--nu", "1", "--json",
    )
    assert code == 0
    report = json.loads(out)
    assert report["schema_version"] == "1.0"
    assert report["input"]["family"] == "c"
    assert report["input"]["metric"] == "g_mu_nu"
    assert report["isometry"]["group_tag"] == "Product_SO2"
    assert report["isometry"]["total_dim"] == 4
    assert report["symmetry"]["index"] == 1
    np.testing.assert_allclose(report["symmetry"]["generator"], [1.0, -0.5, 0.0], atol=1e-9)
    assert report["curvature"]["scalar"] == pytest.approx(-8.5)
    assert report["killing"]["basis_labels"] == ["r0", "r1", "r2", "A1"]
    for entry in report["residuals"].values():
        assert entry["value"] <= entry["tol"]


def test_classify_family_I(capsys):
    code, out, _ = run_cli(capsys, "classify", "--family", "I", "--nu", "2", "--json")
    assert code == 0
    report = json.loads(out)
    assert report["isometry"]["group_tag"] == "SO31"
    assert report["curvature"]["sectional_constant"] == pytest.approx(-0.5)
    assert report["curvature"]["parallel_curvature"] is True
    assert report["symmetry"]["index"] == 3


def test_classify_with_gram_matrix(capsys):
    code, out, _ = run_cli(
        capsys,
        "classify", "--family", "c", "--c", "0",
        "--gram", "1", "0", "0", "0", "1", "0", "0", "0", "1",
        "--json",
    )
    assert code == 0
    report = json.loads(out)
    assert report["input"]["metric"] == "gram"
    assert report["curvature"]["scalar"] == pytest.approx(-8.5)


def test_classify_gram_conflicts_with_parameters(capsys):
    code, _, err = run_cli(
        capsys,
        "classify", "--family", "c", "--c", "0", "--mu", "1", "--nu", "1",
        "--gram", "1", "0", "0", "0", "1", "0", "0", "0", "1",
    )
    assert code == 2
    assert "error:" in err


def test_exit_code_for_out_of_range_parameter(capsys):
    code, _, err = run_cli(
        capsys, "classify", "--family", "c", "--c", "-2", "--mu", "5", "--nu", "1"
    )
    assert code == 2
    assert "violates the catalog constraint" in err


def test_exit_code_for_missing_c(capsys):
    code, _, err = run_cli(capsys, "classify", "--family", "c", "--mu", "1", "--nu", "1")
    assert code == 2
    assert "requires --c" in err


def test_exit_code_for_bad_gram(capsys):
    code, _, err = run_cli(
        capsys,
        "classify", "--family", "c", "--c", "0",
        "--gram", "1", "0", "0", "0", "-1", "0", "0", "0", "1",
    )
    assert code == 3
    assert "positive definite" in err


def test_exit_code_for_unwritable_output(capsys):
    code, _, err = run_cli(
        capsys,
        "classify", "--family", "I", "--nu", "1",
        "--out", "/nonexistent-dir/report.json",
    )
    assert code == 4
    assert "error:" in err


def test_usage_error_exits_2(capsys):
    assert main(["classify"]) == 2  # --family is required
    capsys.readouterr()
    assert main(["no-such-command"]) == 2
    capsys.readouterr()


def test_table_csv_covers_all_strata(capsys):
    code, out, _ = run_cli(capsys, "table")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 14
    assert list(rows[0].keys()) == TABLE_COLUMNS
    by_key = {(r["family"], r["c"], r["metric"], r["constraint"]): r for r in rows}
    assert len(by_key) == 14
    indices = sorted(int(r["index"]) for r in rows)
    assert indices.count(0) == 5 and indices.count(1) == 6 and indices.count(3) == 3
    for r in rows:
        if r["index"] == "3":
            assert r["generator"] == "all"
        elif r["index"] == "0":
            assert r["generator"] == ""
        else:
            assert len(r["generator"].split()) == 3


def test_table_single_group(capsys):
    code, out, _ = run_cli(capsys, "table", "--family", "c", "--c", "0.25")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 3
    assert {r["constraint"] for r in rows} == {
        "mu = 0",
        "0 < mu < 1, mu != sqrt(c)",
        "mu = sqrt(c)",
    }


def test_table_json_format(capsys):
    code, out, _ = run_cli(capsys, "table", "--family", "I", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == 1
    assert rows[0]["index"] == "3"


def test_scan_json_and_csv(capsys, tmp_path):
    code, out, _ = run_cli(
        capsys, "scan", "--family", "c", "--c", "0.25", "--grid", "5"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["summary"]["containment_ok"] is True
    assert payload["summary"]["max_index"] == 1
    assert {"params", "group_tag", "singular"} <= set(payload["points"][0].keys())

    target = tmp_path / "scan.csv"
    code = main(
        ["scan", "--family", "c", "--c", "0.25", "--grid", "5",
         "--format", "csv", "--out", str(target)]
    )
    capsys.readouterr()
    assert code == 0
    rows = list(csv.DictReader(target.open()))
    assert list(rows[0].keys()) == SCAN_COLUMNS
    assert len(rows) == len(payload["points"])


def test_scan_grid_flags(capsys):
    code, out, _ = run_cli(
        capsys,
        "scan", "--family", "I", "--grid-mu", "4", "--grid-nu", "2", "--format", "csv",
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 4  # family I has a single parameter line


def test_verify_passes(capsys):
    code, out, _ = run_cli(capsys, "verify", "--points", "4")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[-1] == "PASS"
    assert all(line.startswith("ok") for line in lines[:-1])


def test_verify_subsets(capsys):
    code, out, _ = run_cli(capsys, "verify", "--which", "symmetry")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 7  # six groups + verdict
    assert lines[-1] == "PASS"


def test_outputs_are_deterministic(capsys):
    _, first, _ = run_cli(capsys, "classify", "--family", "c", "--c", "0.25",
                          "--mu", "0.3", "--nu", "1.0", "--json")
    _, second, _ = run_cli(capsys, "classify", "--family", "c", "--c", "0.25",
                           "--mu", "0.3", "--nu", "1.0", "--json")
    assert first == second
    _, t1, _ = run_cli(capsys, "table")
    _, t2, _ = run_cli(capsys, "table")
    assert t1 == t2
    _, v1, _ = run_cli(capsys, "verify", "--points", "3", "--seed", "5")
    _, v2, _ = run_cli(capsys, "verify", "--points", "3", "--seed", "5")
    assert v1 == v2


def test_tol_rank_env_override(capsys, monkeypatch):
    monkeypatch.setenv("LIEISO_TOL_RANK", "1e-5")
    _, out, _ = run_cli(capsys, "classify", "--family", "I", "--nu", "1", "--json")
    assert json.loads(out)["input"]["tolerances"]["tol_rank"] == pytest.approx(1e-5)
    # an explicit flag wins over the environment
    _, out, _ = run_cli(capsys, "classify", "--family", "I", "--nu", "1",
                        "--tol-rank", "1e-7", "--json")
    assert json.loads(out)["input"]["tolerances"]["tol_rank"] == pytest.approx(1e-7)


def test_out_writes_file(capsys, tmp_path):
    target = tmp_path / "report.json"
    code = main(["classify", "--family", "I", "--nu", "1", "--json",
                 "--out", str(target)])
    capsys.readouterr()
    assert code == 0
    report = json.loads(target.read_text())
    assert report["isometry"]["group_tag"] == "SO31"


def test_boundary_snap_is_reported(capsys):
    _, out, _ = run_cli(
        capsys,
        "classify", "--family", "c", "--c", "4",
        "--mu", "3.99999999", "--nu", "1", "--json",
    )
    report = json.loads(out)
    assert report["input"]["boundary_snapped"] is True
    assert report["isometry"]["group_tag"] == "SO31"
