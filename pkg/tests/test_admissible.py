import functools
import itertools
import json
import os
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from ddca.admissible import (N, T_PAR, K_PAR, AdmSum, AdmTerm, AdmissibleError, BudgetExceededError, Engine,
                             SphericalSum, TVector, canonicalize, ddca_rank_images, ddca_word_images,
                             expand_T, normal_order, reduce_to_T, set_partitions, specialize,
                             structure_constants, structure_constants_json)
from ddca.arith import ParamPoly
from ddca.cherednik import CherAlgebra, TIndex, indices_of_weight, symmetrizer
from ddca.deligne import bell_number
from ddca.freealg import word_rank_column

T = TIndex.of


def adm(*words, coef=1):
    return AdmSum.of([AdmTerm(coef, w) for w in words])


def evaluate_at_rank(a: AdmSum, n0: int, t0, k0):
    """Σ over all index maps of the word, times the symmetrizer, in the explicit algebra."""
    alg = CherAlgebra(n0, "A", t=t0, k=k0)
    e = symmetrizer(alg)
    total = None
    for word, coef in a.terms.items():
        c = coef.evaluate({"n": n0, "t": t0, "k": k0})
        slots = max((s for _, s in word), default=0)
        for idx in itertools.product(range(1, n0 + 1), repeat=slots):
            term = alg.normal_form([(l, idx[s - 1]) for l, s in word]).scale(c) if word else alg.one().scale(c)
            total = term if total is None else total + term
    return total * e


letters = st.tuples(st.sampled_from("xy"), st.integers(1, 3))
words = st.lists(letters, min_size=1, max_size=4)


def test_normal_order_examples():
    n, t, k = N, T_PAR, K_PAR
    assert normal_order(adm([("y", 1), ("x", 1)])) == adm([("x", 1), ("y", 1)]) + AdmSum.unit().scale(
        n * t - n * n * k + n * k)
    assert normal_order(adm([("y", 1), ("x", 2)])) == adm([("x", 1), ("y", 2)]) + AdmSum.unit().scale(n * t)


@given(words)
def test_normal_order_matches_finite_rank(word):
    a = adm(word)
    b = normal_order(a)
    for n0, k0 in ((2, Fraction(1, 3)), (3, 2)):
        assert evaluate_at_rank(a, n0, 1, k0) == evaluate_at_rank(b, n0, 1, k0)


@given(words)
def test_normal_order_is_idempotent(word):
    once = normal_order(adm(word))
    assert normal_order(once) == once


def test_canonicalize_counts_unused_slots():
    term = canonicalize(AdmTerm(1, [("x", 3)], 3))
    assert term.word == (("x", 1),) and term.coefficient == N * N


def test_malformed_terms():
    with pytest.raises(AdmissibleError):
        AdmTerm(1, [("z", 1)])
    with pytest.raises(AdmissibleError):
        AdmTerm(1, [("x", 2)], 1)


@pytest.mark.parametrize("size", range(0, 7))
def test_set_partitions_are_bell(size):
    parts = list(set_partitions(range(size)))
    assert len(parts) == bell_number(size)
    assert len({tuple(sorted(tuple(sorted(b)) for b in p)) for p in parts}) == len(parts)


def test_structure_constant_examples():
    assert structure_constants(T({(1, 0): 1}), T({(1, 0): 1})) == {T({(1, 0): 2}): ParamPoly.const(1)}
    p, q = TVector.T({(0, 1): 1}), TVector.T({(1, 0): 1})
    assert p * q - q * p == TVector.unit().scale(N * T_PAR)
    a, b = TVector.T({(1, 1): 1}), TVector.T({(2, 0): 1})
    assert a * b - b * a == b.scale(2 * T_PAR)


def test_expand_T_of_single_power_sum():
    assert expand_T(T({(1, 0): 1})) == adm([("x", 1)])
    assert expand_T(T({(1, 0): 2})) == adm([("x", 1), ("x", 2)])
    with pytest.raises(BudgetExceededError):
        expand_T(T({(9, 9): 1}), budget=16)


@given(st.lists(st.sampled_from(indices_of_weight(1) + indices_of_weight(2)), min_size=1, max_size=3))
def test_reduce_inverts_expand(ms):
    element = AdmSum.unit()
    for m in ms:
        element = element * expand_T(m)
    coords = reduce_to_T(element)
    rebuilt = sum((expand_T(m).scale(c) for m, c in coords.terms.items()), AdmSum())
    assert normal_order(rebuilt) == normal_order(element)


single = st.sampled_from([T({(r, d - r): 1}) for d in range(1, 4) for r in range(d + 1)])


@given(single, single, single)
def test_tvector_associative(a, b, c):
    x, y, z = TVector.T(a), TVector.T(b), TVector.T(c)
    assert (x * y) * z == x * (y * z)


def test_n_degree_bounded_by_degree():
    for w1 in range(1, 4):
        for w2 in range(1, 4):
            for m1 in indices_of_weight(w1):
                for m2 in indices_of_weight(w2):
                    for m, c in structure_constants(m1, m2).items():
                        assert c.degree("n") <= w1 + w2 - m.weight


def _commuting_operator(m: TIndex, n0: int, xs, f):
    """T(m) at k = 0, t = 1 acting on symmetric f by differential operators in commuting variables."""
    factors = m.factors()
    total = 0
    orders = list(itertools.permutations(factors))
    for order in orders:
        g = f
        for r, q in reversed(order):
            g = _shuffled_power_sum(r, q, n0, xs, g)
        total += g
    return sympy.expand(total / len(orders))


@functools.lru_cache(maxsize=None)
def _shuffled_power_sum(r, q, n0, xs, f):
    """Σ_i of the average over all orderings of r copies of x_i and q copies of d_i."""
    arrangements = set(itertools.permutations("x" * r + "d" * q))
    total = 0
    for word in arrangements:
        for i in range(n0):
            g = f
            for letter in reversed(word):
                g = xs[i] * g if letter == "x" else sympy.diff(g, xs[i])
            total += g
    return sympy.expand(total / len(arrangements))


@pytest.mark.parametrize("n0", [2, 3])
def test_k0_degeneration_against_commuting_operators(n0):
    xs = sympy.symbols(f"x1:{n0 + 1}")
    # spherical elements act on symmetric polynomials
    f = sum(x ** 3 for x in xs) * sum(xs) + sympy.prod(xs) ** 2 + 2 * sum(xs)
    pairs = [(m1, m2) for w1 in (1, 2) for w2 in (1, 2, 3)
             for m1 in indices_of_weight(w1) for m2 in indices_of_weight(w2)]
    for m1, m2 in pairs:
        lhs = _commuting_operator(m1, n0, xs, _commuting_operator(m2, n0, xs, f))
        coords = specialize(structure_constants(m1, m2), n0, 1, 0)
        rhs = sum((sympy.Rational(str(c)) * (_commuting_operator(m, n0, xs, f) if m.items else f)
                   for m, c in coords.items()), sympy.Integer(0))
        assert sympy.expand(lhs - rhs) == 0, (m1, m2)


def test_numeric_engine_matches_symbolic():
    eng = Engine(t=1, k=Fraction(1, 2), n=5)
    for m1, m2 in [(T({(0, 2): 1}), T({(3, 0): 1})), (T({(1, 1): 1}), T({(1, 0): 2}))]:
        numeric = {m: c.constant_value() for m, c in eng.structure_constants(m1, m2).items() if c}
        assert numeric == specialize(structure_constants(m1, m2), 5, 1, Fraction(1, 2))


def test_disk_cache_round_trip(tmp_path):
    m1, m2 = T({(0, 1): 1}), T({(2, 1): 1})
    first = structure_constants(m1, m2, Engine(), cache=str(tmp_path))
    files = os.listdir(tmp_path)
    assert len(files) == 1
    again = structure_constants(m1, m2, Engine(), cache=str(tmp_path))
    assert again == first
    data = structure_constants_json(m1, m2, first)
    assert json.loads(json.dumps(data)) == data


def test_spherical_sum_to_T():
    s = SphericalSum.T({(0, 1): 1}) * SphericalSum.T({(1, 0): 1})
    t = TVector.T({(0, 1): 1}) * TVector.T({(1, 0): 1})
    assert s.to_T() == t


def test_rescaled_rank_images_agree():
    im, one = ddca_word_images(k=Fraction(1, 2), n=3)
    im2, one2 = ddca_rank_images(k=Fraction(1, 2), n=3)
    assert word_rank_column(im, one, 4) == word_rank_column(im2, one2, 4)
