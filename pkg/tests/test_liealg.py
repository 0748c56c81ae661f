from fractions import Fraction
from math import comb

import sympy
from hypothesis import given, strategies as st

from ddca.arith import P
from ddca.freealg import word_rank_column
from ddca.liealg import (PO_CARRIER, PO_E, PO_F, PO_H, WEYL_LIE_CARRIER, GlLambdaElement, PoElement,
                         UEnvElement, WeylElement, casimir_element, default_casimir, po_bracket,
                         po_bracket_symbolic, SymbolicPoMonomial, upo_images, weyl_leading_symbol)

exps = st.integers(0, 4)
coefs = st.integers(-3, 3).filter(bool)


@st.composite
def po_elements(draw, max_terms=3):
    out = PoElement()
    for _ in range(draw(st.integers(1, max_terms))):
        out = out + PoElement.monomial(draw(exps), draw(exps), draw(coefs))
    return out


@st.composite
def weyl_elements(draw, max_terms=3):
    out = WeylElement()
    for _ in range(draw(st.integers(1, max_terms))):
        out = out + WeylElement.monomial(draw(exps), draw(exps), draw(coefs))
    return out


X = sympy.Symbol("x")


def apply_weyl(element: WeylElement, poly):
    """Act on a polynomial in x: x^a d^b means differentiate b times, then multiply by x^a."""
    out = 0
    for (a, b), c in element.terms.items():
        out += sympy.Rational(str(c)) * X ** a * sympy.diff(poly, X, b)
    return sympy.expand(out)


@given(po_elements(), po_elements(), po_elements())
def test_po_jacobi(a, b, c):
    total = po_bracket(a, po_bracket(b, c)) + po_bracket(b, po_bracket(c, a)) + po_bracket(c, po_bracket(a, b))
    assert total.is_zero()


@given(po_elements(), po_elements())
def test_po_antisymmetry(a, b):
    assert (po_bracket(a, b) + po_bracket(b, a)).is_zero()


def test_po_sl2_triple():
    assert PO_H == PoElement.monomial(1, 1)
    assert po_bracket(PO_H, PO_E) == PO_E.scale(2)
    assert po_bracket(PO_H, PO_F) == PO_F.scale(-2)


@given(exps, exps, exps, exps)
def test_even_part_closed(a, b, c, d):
    x = PoElement.monomial(2 * a, 2 * b) + PoElement.monomial(2 * b + 1, 1)
    y = PoElement.monomial(2 * c, 2 * d)
    assert x.is_even() and y.is_even()
    assert po_bracket(x, y).is_even()


def test_symbolic_bracket_specializes():
    l = P("l")
    x = SymbolicPoMonomial(l, 0, l + 1)
    y = SymbolicPoMonomial(1, 2)
    for value in range(1, 5):
        symbolic = sum((m.specialize(value) for m in po_bracket_symbolic(x, y)), PoElement())
        direct = po_bracket(PoElement.monomial(value, 0, value + 1), PoElement.monomial(1, 2))
        assert symbolic == direct


@given(weyl_elements(), weyl_elements(), weyl_elements())
def test_weyl_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(weyl_elements(), weyl_elements(), st.integers(0, 6))
def test_weyl_product_acts_as_composition(a, b, j):
    poly = X ** j + 3 * X ** 2 + 1
    assert apply_weyl(a * b, poly) == apply_weyl(a, apply_weyl(b, poly))


@given(exps, exps, exps, exps)
def test_gr_compatibility(a, b, c, d):
    x, y = WeylElement.monomial(a, b), WeylElement.monomial(c, d)
    rhs = po_bracket(weyl_leading_symbol(x), weyl_leading_symbol(y))
    if not rhs.is_zero():
        assert weyl_leading_symbol(x * y - y * x) == rhs


@st.composite
def uenv_monomials(draw, carrier):
    out = UEnvElement.one(carrier)
    for _ in range(draw(st.integers(1, 3))):
        out = out * UEnvElement.generator(carrier, (draw(st.integers(0, 3)), draw(st.integers(0, 3))))
    return out


@given(st.data(), st.sampled_from([PO_CARRIER, WEYL_LIE_CARRIER]))
def test_uenv_associative(data, carrier):
    a, b, c = (data.draw(uenv_monomials(carrier)) for _ in range(3))
    assert (a * b) * c == a * (b * c)


@given(st.sampled_from([PO_CARRIER, WEYL_LIE_CARRIER]), exps, exps, exps, exps)
def test_uenv_commutator_is_bracket(carrier, a, b, c, d):
    x = UEnvElement.generator(carrier, (a, b))
    y = UEnvElement.generator(carrier, (c, d))
    bracket = UEnvElement.from_lie(carrier, _lie(carrier, (a, b), (c, d)))
    assert x * y - y * x == bracket


def _lie(carrier, a, b):
    return PoElement({k: v for k, v in carrier.bracket(a, b).items()})


def test_pbw_counts_for_sl2_words():
    im = upo_images()
    sl2 = {"e": im["e"], "f": im["f"], "h": im["e"] * im["f"] - im["f"] * im["e"]}
    ranks = word_rank_column(sl2, UEnvElement.one(PO_CARRIER), 4, generators=("e", "f", "h"), weights=None)
    assert ranks == [comb(L + 3, 3) - 1 for L in range(1, 5)]


def test_gl_lambda_casimir_is_scalar():
    assert casimir_element() == GlLambdaElement.one().scale(default_casimir())
    e, f, h = (GlLambdaElement.generator(g) for g in "efh")
    assert e * f - f * e == h
    assert h * e - e * h == e.scale(2)
    assert h * f - f * h == f.scale(-2)


words = st.lists(st.sampled_from("efh"), min_size=1, max_size=4)


def _gl_word(word):
    out = GlLambdaElement.one()
    for g in word:
        out = out * GlLambdaElement.generator(g)
    return out


@given(words, words, words)
def test_gl_lambda_associative(a, b, c):
    x, y, z = _gl_word(a), _gl_word(b), _gl_word(c)
    assert (x * y) * z == x * (y * z)


def test_gl_lambda_numeric_casimir():
    lam = Fraction(5)
    cas = (lam * lam - 1) / 2
    assert casimir_element(GlLambdaElement.one(cas)) == GlLambdaElement.one(cas).scale(cas)
