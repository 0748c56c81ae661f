import pytest
from hypothesis import given, strategies as st

from ddca.sl2rep import (NotHighestWeightError, Sl2Vector, SymbolFamily, WordSpace, act, f_orbit,
                         highest_weight_vectors, relation_catalog, weight_multiplicities)

small = st.integers(0, 4)


def _space(kind, a, b):
    if kind == "tensor":
        return WordSpace("tensor", (SymbolFamily("u", a, 1), SymbolFamily("v", b, 2)))
    fam = SymbolFamily("u", a, 1)
    return WordSpace(kind, (fam, fam))


def _character_multiplicities(space):
    dims = {}
    for word in space.basis():
        w = sum(s.weight for s in word)
        dims[w] = dims.get(w, 0) + 1
    return {w: dims[w] - dims.get(w + 2, 0) for w in dims if w >= 0 and dims[w] - dims.get(w + 2, 0)}


@given(st.sampled_from(["tensor", "wedge", "symmetric"]), small, small)
def test_decomposition_matches_character(kind, a, b):
    space = _space(kind, a, b)
    found = {w: m for w, m in weight_multiplicities(space).items() if m}
    assert found == _character_multiplicities(space)


@given(small, small)
def test_clebsch_gordan(a, b):
    found = {w: m for w, m in weight_multiplicities(_space("tensor", a, b)).items() if m}
    assert found == {a + b - 2 * i: 1 for i in range(min(a, b) + 1)}


@given(st.sampled_from(["tensor", "wedge", "symmetric"]), small, small)
def test_sl2_commutation_on_words(kind, a, b):
    space = _space(kind, a, b)
    for word in space.basis():
        v = Sl2Vector(space.kind, {word: 1})
        ef = act("e", act("f", v)) - act("f", act("e", v))
        assert ef == act("h", v)
        assert act("h", act("e", v)) - act("e", act("h", v)) == act("e", v).scale(2)
        assert act("h", act("f", v)) - act("f", act("h", v)) == act("f", v).scale(-2)


@given(st.sampled_from(["tensor", "wedge", "symmetric"]), small, small)
def test_highest_weight_orbits(kind, a, b):
    space = _space(kind, a, b)
    for w in range(0, 2 * max(a, b) + 1):
        for v in highest_weight_vectors(space, w):
            assert act("e", v).is_zero()
            assert len(f_orbit(v)) == w + 1


def test_f_orbit_rejects_non_highest_weight():
    fam = SymbolFamily("u", 2, 1)
    with pytest.raises(NotHighestWeightError):
        f_orbit(Sl2Vector.symbol(fam(2)))


def test_wedge_square_of_v2_is_v2():
    fam = SymbolFamily("u", 2, 1)
    space = WordSpace("wedge", (fam, fam))
    assert space.dimension() == 3
    assert {w: m for w, m in weight_multiplicities(space).items() if m} == {2: 1}


@pytest.mark.parametrize("kind", ["po-A", "A-s1s2", "po-B", "A-s1s2s3"])
def test_catalog_vectors_are_highest_weight(kind):
    for module in relation_catalog(kind):
        assert act("e", module.hw).is_zero(), module.name
