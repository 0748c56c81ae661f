import json

from ddca.report import VerificationReport, timed


def _report():
    r = VerificationReport("demo", topic="demo topic")
    with timed(r):
        r.add("ok", True)
        r.add("bad", False, "residual 2*e", residual="2*e")
        r.skip("slow", "budget")
    r.params["n"] = 3
    return r


def test_status_values():
    r = _report()
    assert [c.status for c in r.checks] == ["pass", "fail", "skipped"]
    assert not r.passed and len(r.failures()) == 1


def test_skipped_does_not_fail_unless_strict():
    r = VerificationReport("x")
    r.add("ok", True)
    r.skip("later", "resource limit")
    assert r.passed and not r.strict_passed()


def test_empty_report_does_not_pass():
    assert not VerificationReport("x").passed


def test_json_is_sorted_and_digest_ignores_timing():
    a, b = _report(), _report()
    b.seconds += 5
    b.checks[0].elapsed_ms = 99
    da, db = json.loads(a.to_json()), json.loads(b.to_json())
    assert da["digest"] == db["digest"]
    assert da["checks"][1]["data"] == {"residual": "2*e"}
    assert list(da) == sorted(da)
    assert all(c["topic"] for c in da["checks"])


def test_digest_tracks_content():
    a, b = _report(), _report()
    b.checks[0].detail = "changed"
    assert a.digest() != b.digest()


def test_text_and_csv():
    r = _report()
    text = r.to_text().splitlines()
    assert text[0].startswith("== demo: FAIL")
    assert "✓ [PASS] ok" in text[1] and "✗ [FAIL] bad" in text[2]
    rows = r.to_csv().splitlines()
    assert rows[0] == "suite,check,status,detail"
    assert rows[3].startswith("demo,slow,skipped")


def test_extend_with_prefix():
    outer = VerificationReport("outer")
    outer.extend(_report(), prefix="inner")
    assert outer.checks[0].name == "inner: ok"
    assert outer.checks[0].topic == "demo topic"
