"""End-to-end acceptance checks, one per criterion, at exact equality.

Each test records its verdict; the terminal summary prints one PASS/FAIL line
per criterion. Criteria 3 and 8 fail on the computed evidence and are marked
as strict expected failures."""

import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

from conftest import record
from ddca.admissible import verify_beta_symbolic
from ddca.arith import P
from ddca.cherednik import expected_s_values, verify_beta_finite
from ddca.deligne import run_all as deligne_all
from ddca.freealg import appendixB_verify, verify_presentations
from ddca.galois import run_all as galois_all
from ddca.suites import flatness_table, oracle_equivalence, verify_gl_lambda, verify_weyl_model


def _summary(report):
    bad = report.failures()
    return f"{len(report.checks)} checks, {report.seconds:.1f}s" + (f"; failing: {bad[0].name}" if bad else "")


def test_criterion_01_weyl_model():
    report = verify_weyl_model()
    names = [c.name for c in report.checks]
    ok = report.passed and report.seconds < 1 and any("d^3" in n for n in names) and any("-1/2" in n for n in names)
    record(1, ok, _summary(report))
    assert ok


def test_criterion_02_type_a():
    k = P("k")
    reports = [verify_beta_finite("A", n) for n in (2, 3, 4)]
    for n, rep in zip((2, 3, 4), reports):
        s = expected_s_values("A", n, k)
        assert s["s1"] == 1 + k * (k + 1) * (1 - n) and s["s2"] == k * (k + 1)
    symbolic = verify_beta_symbolic("full")
    ok = all(r.passed for r in reports) and symbolic.strict_passed()
    record(2, ok, "n = 2, 3, 4 and symbolic n: " + _summary(symbolic))
    assert ok


@pytest.fixture(scope="module")
def type_b_reports():
    return {n: verify_beta_finite("B", n) for n in (2, 3)}


def test_type_b_all_but_one_relation(type_b_reports):
    for report in type_b_reports.values():
        failing = [c.name for c in report.failures()]
        assert failing == ["psi2'"]
        assert any(c.name == "s1 - s2 = 5(s3 + 1)" and c.passed for c in report.checks)


@pytest.mark.xfail(strict=True, reason="degree-6 type-B relation leaves an s3 residual at n = 2, 3")
def test_criterion_03_type_b(type_b_reports):
    ok = all(r.passed for r in type_b_reports.values())
    detail = "; ".join(f"n = {n}: {c.detail}" for n, r in type_b_reports.items() for c in r.failures())
    record(3, ok, detail)
    assert ok


def test_criterion_04_gl_lambda():
    start = time.perf_counter()
    report = verify_gl_lambda()
    ok = report.passed and time.perf_counter() - start < 60
    record(4, ok, _summary(report))
    assert ok


def test_criterion_05_presentations():
    report = verify_presentations(8, 5)
    ok = report.passed and report.seconds < 300
    record(5, ok, _summary(report))
    assert ok


def test_criterion_06_minor_roots():
    report = appendixB_verify()
    roots = [c for c in report.checks if c.name.startswith("common integer roots")]
    ok = report.passed and report.seconds < 60 and roots and roots[0].detail == "common roots [-2, -1, 5]"
    record(6, bool(ok), _summary(report))
    assert ok


def test_criterion_07_oracle():
    report = oracle_equivalence(6, (2, 3, 4), (0, Fraction(1, 2), 1))
    ok = report.passed and len(report.checks) == 9 and report.seconds < 600
    record(7, ok, _summary(report))
    assert ok


@pytest.fixture(scope="module")
def flatness():
    start = time.perf_counter()
    table, report = flatness_table(8)
    return table, report, time.perf_counter() - start


def test_flatness_weyl_and_control(flatness):
    table, report, seconds = flatness
    assert table.columns["weyl"] == table.columns["upo"]
    assert table.columns["upo"][:6] == [3, 11, 31, 76, 169, 355]
    assert table.first_difference("upo", "broken") == 4
    assert seconds < 900


@pytest.mark.xfail(strict=True, reason="the DDCA column at (n, k) = (3, 1/2) drops at length 5")
def test_criterion_08_flatness(flatness):
    table, report, seconds = flatness
    ok = report.passed
    record(8, ok, "; ".join(f"{name} {col}" for name, col in table.columns.items()) + f"; {seconds:.0f}s")
    assert ok


def test_criterion_09_galois():
    report = galois_all()
    cubic = [c for c in report.checks if "cubic" in c.name.lower() or "ζ³" in c.name]
    notes = " ".join(report.notes)
    ok = report.passed and report.seconds < 10 and cubic and "flipped" in notes and "s2*" in notes
    record(9, bool(ok), _summary(report))
    assert ok


def test_criterion_10_deligne():
    report = deligne_all(4)
    names = " ".join(c.name for c in report.checks)
    ok = report.passed and report.seconds < 120 and "P(2,2)" in names
    record(10, ok, _summary(report))
    assert ok


PROPERTY_TESTS = [
    "tests/test_liealg.py::test_pbw_counts_for_sl2_words",
    "tests/test_cherednik.py::test_associativity",
    "tests/test_liealg.py::test_weyl_associative",
    "tests/test_liealg.py::test_uenv_associative",
    "tests/test_admissible.py::test_tvector_associative",
    "tests/test_deligne.py::test_associativity_random",
    "tests/test_deligne.py::test_full_associativity_and_reports",
    "tests/test_liealg.py::test_po_jacobi",
    "tests/test_sl2rep.py::test_sl2_commutation_on_words",
    "tests/test_sl2rep.py::test_highest_weight_orbits",
    "tests/test_sl2rep.py::test_clebsch_gordan",
    "tests/test_liealg.py::test_gr_compatibility",
]


def test_criterion_11_property_suites():
    root = Path(__file__).resolve().parent.parent
    start = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", *PROPERTY_TESTS],
                          cwd=root, capture_output=True, text=True)
    seconds = time.perf_counter() - start
    last = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr[-200:]
    ok = proc.returncode == 0 and seconds < 600
    record(11, ok, f"{last} ({seconds:.0f}s)")
    assert ok, proc.stdout[-2000:]
