from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from ddca.arith import (ArithError, InconsistentSamplesError, P, ParamPoly, RatFunc, SparseEchelon,
                        determinant, fit_polynomial, integer_roots, matrix_rank, parse_poly,
                        poly_gcd, solve_linear_exact)

VARS = ("n", "k", "t")
SYMS = sympy.symbols(VARS)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def polys(draw, max_terms=4, max_exp=3):
    out = ParamPoly()
    for _ in range(draw(st.integers(0, max_terms))):
        term = ParamPoly.const(draw(rationals))
        for v in VARS:
            term = term * P(v) ** draw(st.integers(0, max_exp))
        out = out + term
    return out


def to_sympy(p: ParamPoly):
    return sympy.sympify(str(p).replace("^", "**"), locals=dict(zip(VARS, SYMS))) if p else sympy.Integer(0)


@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a - a == ParamPoly()


@given(polys(), polys())
def test_product_matches_sympy(a, b):
    assert sympy.expand(to_sympy(a * b) - to_sympy(a) * to_sympy(b)) == 0


@given(polys())
def test_printed_form_round_trips(a):
    assert parse_poly(str(a)) == a


@given(polys(), st.fractions(min_value=-3, max_value=3, max_denominator=3))
def test_evaluate_matches_substitution(a, x):
    point = {"n": x, "k": 2, "t": Fraction(1, 2)}
    assert a.evaluate(point) == a.substitute(point).constant_value()


def test_gcd_against_sympy():
    n, k = P("n"), P("k")
    a = (n - k) * (n + 2) * (k + 1)
    b = (n + 2) * (k + 1) * (n + k)
    g = poly_gcd(a, b)
    ratio = sympy.cancel(to_sympy(g) / ((SYMS[0] + 2) * (SYMS[1] + 1)))
    assert ratio.is_number and ratio != 0


def test_ratfunc_reduces():
    n, k = P("n"), P("k")
    r = RatFunc((n - 1) * (n + k), (n - 1) * k)
    assert r == RatFunc(n + k, k)
    assert (r * RatFunc(k, n + k)) == RatFunc(1)
    assert (r - r).is_zero()


def test_ratfunc_zero_denominator():
    with pytest.raises((ArithError, ZeroDivisionError)):
        RatFunc(P("n"), 0)


@given(st.lists(rationals, min_size=1, max_size=5))
def test_fit_recovers_polynomial(coeffs):
    poly = sum((ParamPoly.const(c) * P("n") ** i for i, c in enumerate(coeffs)), ParamPoly())
    samples = [(x, poly.evaluate({"n": x})) for x in range(2, 2 + len(coeffs) + 2)]
    assert fit_polynomial(samples, len(coeffs) - 1, "n") == poly


def test_fit_detects_inconsistent_samples():
    with pytest.raises(InconsistentSamplesError):
        fit_polynomial([(0, 0), (1, 1), (2, 5)], 1, "n")
    with pytest.raises(ArithError):
        fit_polynomial([(0, 0)], 2, "n")


def test_integer_roots():
    l = P("l")
    assert integer_roots((l + 1) * (l + 2) * (l - 5) * (2 * l - 1), "l") == [-2, -1, 5]
    assert integer_roots(l * l * (l - 3), "l") == [0, 3]
    with pytest.raises(ArithError):
        integer_roots(ParamPoly(), "l")


@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=5))
def test_rank_matches_sympy(rows):
    assert matrix_rank(rows) == sympy.Matrix(rows).rank()
    ech = SparseEchelon()
    for row in rows:
        ech.add(dict(enumerate(row)))
    assert ech.rank == sympy.Matrix(rows).rank()


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3))
def test_determinant_matches_sympy(rows):
    assert determinant(rows) == ParamPoly.const(int(sympy.Matrix(rows).det()))


def test_symbolic_determinant():
    n, k = P("n"), P("k")
    assert determinant([[n, k], [k, n]]) == n * n - k * k


def test_solve_linear_exact():
    sol = solve_linear_exact([[1, 2], [2, 4]], [3, 6])
    assert sol.consistent and sol.rank == 1 and len(sol.nullspace) == 1
    x = sol.particular
    assert x[0] + 2 * x[1] == 3
    assert not solve_linear_exact([[1, 2], [2, 4]], [3, 7]).consistent
