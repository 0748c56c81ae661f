import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from ddca.arith import P, ParamPoly
from ddca.cherednik import (CherAlgebra, CherednikError, DegreeExceedsRankError, GroupElem, TIndex,
                            build_T, build_Tm, decompose_T_basis, expected_s_values, indices_of_weight,
                            omega_checks, power_sum_product, recompose, symmetrizer, verify_beta_finite)

K_VAL, T_VAL = sympy.Rational(1, 3), sympy.Rational(2, 1)


def dunkl_action(n, key, coef, f, xs):
    """x^A y^B g acting on f: apply g, then the Dunkl operators, then multiply."""
    A, B, g = key
    sub = {xs[i]: g.signs[i] * xs[g.perm[i]] for i in range(n)}
    out = f.xreplace(sub)
    for i, b in enumerate(B):
        for _ in range(b):
            out = dunkl(n, i, out, xs)
    for i, a in enumerate(A):
        out = out * xs[i] ** a
    return sympy.Rational(str(coef)) * out


def dunkl(n, i, f, xs):
    out = T_VAL * sympy.diff(f, xs[i])
    for j in range(n):
        if j != i:
            swapped = f.xreplace({xs[i]: xs[j], xs[j]: xs[i]})
            out -= K_VAL * sympy.cancel((f - swapped) / (xs[i] - xs[j]))
    return sympy.expand(out)


def act(element, f, xs):
    n = element.algebra.n
    return sympy.expand(sum((dunkl_action(n, key, c.constant_value(), f, xs) for key, c in element.terms.items()),
                            sympy.Integer(0)))


def _letter_strategy(n):
    letters = [("x", i) for i in range(1, n + 1)] + [("y", i) for i in range(1, n + 1)]
    letters += [("s", i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    return st.lists(st.sampled_from(letters), min_size=1, max_size=4)


@pytest.mark.parametrize("n", [2, 3])
@given(data=st.data())
def test_normal_form_agrees_with_dunkl_representation(n, data):
    alg = CherAlgebra(n, "A", t=2, k=Fraction(1, 3))
    xs = sympy.symbols(f"x1:{n + 1}")
    word = data.draw(_letter_strategy(n))
    f = xs[0] ** 2 * xs[-1] + 3 * xs[0] + 1
    expected = f
    for letter in reversed(word):
        one = alg.normal_form([letter])
        expected = act(one, expected, xs)
    assert act(alg.normal_form(word), f, xs) == expected


@pytest.mark.parametrize("kind,n", [("A", 2), ("A", 3), ("B", 2)])
@given(data=st.data())
def test_associativity(kind, n, data):
    alg = CherAlgebra(n, kind, t=1, k=P("k"), c=P("c") if kind == "B" else None)
    letters = _letter_strategy(n)
    if kind == "B":
        letters = st.lists(st.sampled_from([("x", 1), ("y", 1), ("x", n), ("y", n), ("s", 1, n), ("g", 1)]),
                           min_size=1, max_size=3)
    a, b, c = (alg.normal_form(data.draw(letters)) for _ in range(3))
    assert (a * b) * c == a * (b * c)


def test_basic_commutator():
    alg = CherAlgebra(2, "A", t=P("t"), k=P("k"))
    lhs = alg.y(1) * alg.x(1) - alg.x(1) * alg.y(1)
    assert lhs == alg.one().scale(P("t")) - alg.s(1, 2).scale(P("k"))
    assert alg.y(1) * alg.x(2) - alg.x(2) * alg.y(1) == alg.s(1, 2).scale(P("k"))


def test_group_elements():
    g = GroupElem.transposition(3, 0, 1)
    assert (g * g).is_identity()
    h = GroupElem((1, 2, 0), (1, -1, 1))
    assert (h * h.inverse()).is_identity()
    with pytest.raises(CherednikError):
        GroupElem((0, 0), (1, 1))


def test_symmetrizer_idempotent():
    for kind in ("A", "B"):
        alg = CherAlgebra(2, kind, t=1, k=P("k"), c=P("c") if kind == "B" else None)
        e = symmetrizer(alg)
        assert e * e == e


def test_omega_central():
    assert all(omega_checks(3).values())


@pytest.mark.parametrize("n", [2, 3])
def test_T_basis_round_trip(n):
    alg = CherAlgebra(n, "A", t=1, k=P("k"))
    for w in range(1, n + 1):
        for m in indices_of_weight(w):
            assert decompose_T_basis(build_Tm(alg, m)) == {m: ParamPoly.const(1)}


def test_decompose_product_and_recompose():
    alg = CherAlgebra(3, "A", t=1, k=P("k"))
    prod = build_T(alg, 0, 1) * build_T(alg, 2, 0)
    coords = decompose_T_basis(prod)
    assert recompose(alg, coords) == prod


def test_decompose_rejects_high_degree():
    alg = CherAlgebra(2, "A", t=1, k=0)
    with pytest.raises(DegreeExceedsRankError):
        decompose_T_basis(build_T(alg, 3, 0))


def test_power_sum_is_symmetrized_top_term():
    alg = CherAlgebra(2, "A", t=1, k=0)
    m = TIndex.of({(1, 0): 2})
    assert power_sum_product(alg, m) == build_Tm(alg, m)


def test_index_counts():
    # T indices of weight L are multisets of pairs (r, q) with r + q >= 1
    def brute(L):
        pairs = [(r, d - r) for d in range(1, L + 1) for r in range(d + 1)]
        out = set()
        for size in range(1, L + 1):
            for combo in itertools.combinations_with_replacement(pairs, size):
                if sum(r + q for r, q in combo) == L:
                    out.add(tuple(sorted(combo)))
        return len(out)
    for L in range(1, 6):
        assert len(indices_of_weight(L)) == brute(L)


def test_tindex_validation():
    with pytest.raises(CherednikError):
        TIndex.of({(0, 0): 1})
    m = TIndex.of({(1, 0): 2, (0, 1): 1})
    assert m.weight == 3 and m.size == 3
    assert TIndex.from_json(m.to_json()) == m


def test_expected_s_values():
    vals = expected_s_values("A", 3, P("k"))
    k = P("k")
    assert vals["s1"] == 1 + k * (k + 1) * (1 - 3)
    assert vals["s2"] == k * (k + 1)


@pytest.mark.parametrize("n", [2, 3])
def test_type_a_relations_at_rank(n):
    assert verify_beta_finite("A", n).passed
