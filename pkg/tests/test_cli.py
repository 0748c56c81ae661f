import json

import pytest
from click.testing import CliRunner

from ddca.cli import ConfigError, SuiteConfig, main, parse_tindex, run_suite
from ddca.cherednik import TIndex


def run(*args):
    return CliRunner().invoke(main, list(args))


def test_parse_tindex():
    assert parse_tindex("(1,0)^2,(0,1)") == TIndex.of({(1, 0): 2, (0, 1): 1})
    assert parse_tindex(" (2, 1) ") == TIndex.of({(2, 1): 1})
    assert parse_tindex("(1,0),(1,0)") == TIndex.of({(1, 0): 2})
    for bad in ("(1,0", "x", "(0,0)"):
        with pytest.raises(ConfigError):
            parse_tindex(bad)


def test_config_validation():
    with pytest.raises(ConfigError):
        SuiteConfig("nope").validate()
    with pytest.raises(ConfigError):
        SuiteConfig("galois", rank=0).validate()
    with pytest.raises(ConfigError):
        SuiteConfig("galois", k="1/x").validate()
    SuiteConfig("galois", k="symbolic", lam="-3/2").validate()


def test_verify_galois_text():
    result = run("verify", "--suite", "galois")
    assert result.exit_code == 0
    assert result.output.startswith("== galois: PASS")
    assert "✓" in result.output


def test_verify_json_is_stable():
    a = run("--format", "json", "--seed", "7", "verify", "--suite", "weyl-model")
    b = run("--format", "json", "--seed", "7", "verify", "--suite", "weyl-model")
    da, db = json.loads(a.output), json.loads(b.output)
    assert a.exit_code == 0
    assert da["digest"] == db["digest"]
    da.pop("elapsed_ms"), db.pop("elapsed_ms")
    for c in da["checks"] + db["checks"]:
        c.pop("elapsed_ms")
    assert da == db
    assert da["params"]["seed"] == "7"
    assert {c["status"] for c in da["checks"]} == {"pass"}


def test_verify_failure_exit_code():
    result = run("verify", "--suite", "typeB-beta", "--rank", "2")
    assert result.exit_code == 1
    assert "residual" in result.output


def test_resource_errors_become_skipped():
    report = run_suite(SuiteConfig("typeA-beta-symbolic", budget=2))
    assert report.passed or report.skipped()
    result = run("--strict", "verify", "--suite", "deligne", "--max-degree", "2")
    assert result.exit_code == 0


def test_structure_constants_command(tmp_path):
    out = tmp_path / "sc.json"
    result = run("--format", "json", "structure-constants", "--m1", "(1,0)", "--m2", "(1,0)", "--out", str(out))
    assert result.exit_code == 0
    data = json.loads(out.read_text())
    assert data["coords"] == [{"m": [[1, 0, 2]], "poly": "1"}]


def test_structure_constants_cache_dir(tmp_path):
    result = run("--cache-dir", str(tmp_path), "--format", "text", "structure-constants",
                 "--m1", "(0,1)", "--m2", "(1,0)")
    assert result.exit_code == 0
    assert "n*t" in result.output
    assert any(tmp_path.iterdir())


def test_rank_table_csv_header():
    result = run("--format", "csv", "rank-table", "--models", "weyl,upo", "--max-length", "2")
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[0] == "length,weyl,upo"
    assert lines[1:] == ["1,3,3", "2,11,11"]


def test_rank_table_rejects_unknown_model():
    result = run("rank-table", "--models", "bogus")
    assert result.exit_code != 0


def test_unknown_suite_rejected():
    assert run("verify", "--suite", "bogus").exit_code != 0


def test_report_all_with_skips(tmp_path):
    out = tmp_path / "all.json"
    skip = ["--skip", "rank-table", "--skip", "oracle-equivalence", "--skip", "typeB-beta"]
    result = run("--format", "json", "report", "--all", *skip, "--out", str(out))
    data = json.loads(out.read_text())
    assert result.exit_code == 0, data
    assert data["status"] == "pass"
    assert "galois" in data["params"]["suites"]


def test_cache_dir_written_after_in_memory_hit(tmp_path):
    assert run("structure-constants", "--m1", "(1,1)", "--m2", "(2,0)").exit_code == 0
    result = run("--cache-dir", str(tmp_path), "structure-constants", "--m1", "(1,1)", "--m2", "(2,0)")
    assert result.exit_code == 0
    assert len(list(tmp_path.glob("*.json"))) == 1
