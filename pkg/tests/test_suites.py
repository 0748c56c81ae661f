from fractions import Fraction

from ddca.suites import flatness_table, oracle_equivalence, parse_rational, verify_gl_lambda, verify_weyl_model


def test_weyl_model_report():
    report = verify_weyl_model()
    assert report.passed
    assert sum(c.name.startswith("relation: ") for c in report.checks) >= 4


def test_gl_lambda_report():
    report = verify_gl_lambda()
    assert report.passed
    assert "s3 = 0" in report.notes


def test_oracle_small():
    report = oracle_equivalence(max_weight=3, ranks=(2,), ks=(Fraction(1, 2),))
    assert report.passed


def test_flatness_small():
    table, report = flatness_table(3, ("weyl", "broken", "upo"))
    assert table.columns["upo"] == [3, 11, 31]
    assert report.checks[0].passed
    assert not report.checks[-1].passed  # the control needs length 4 to diverge


def test_parse_rational():
    assert parse_rational("symbolic") is None
    assert parse_rational("4/2") == 2 and isinstance(parse_rational("4/2"), int)
    assert parse_rational("-3/6") == Fraction(-1, 2)
