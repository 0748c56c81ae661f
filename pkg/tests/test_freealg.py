import pytest

from ddca.arith import P
from ddca.freealg import (RankTable, ResourceLimitError, appendixB_verify, counit_check_typeA,
                          counit_check_typeB, derivation, free_lie_rank, generators_of_kind, lyndon_words,
                          n_presentation, nplus_presentation, presentation_dims, relation_set,
                          verify_presentations, verify_relations_in_model, witt_dimension,
                          word_rank_column, word_rank_table)
from ddca.liealg import (PO_CARRIER, UEnvElement, gl_lambda_images, gl_lambda_model, po_lie_model,
                         upo_images, uenv_model, weyl_images, weyl_model)
from ddca.ncexpr import Gen, comm, evaluate


def _necklace_count(k, d):
    # number of aperiodic necklaces by brute force over rotations
    import itertools
    seen = set()
    count = 0
    for word in itertools.product(range(k), repeat=d):
        if word in seen:
            continue
        rots = {word[i:] + word[:i] for i in range(d)}
        seen |= rots
        if len(rots) == d:
            count += 1
    return count


@pytest.mark.parametrize("k,d", [(2, 1), (2, 4), (2, 6), (3, 3), (3, 4)])
def test_witt_formula(k, d):
    assert witt_dimension(k, d) == _necklace_count(k, d) == len(lyndon_words(k, d))


@pytest.mark.parametrize("k,d", [(2, 3), (2, 4), (3, 3)])
def test_free_lie_rank_by_brackets(k, d):
    assert free_lie_rank(k, d) == witt_dimension(k, d)


def test_type_a_presentation_dims_small():
    assert presentation_dims(n_presentation(), 5).dims == [4, 5, 6, 7, 8]


def test_type_b_presentation_dims_small():
    assert presentation_dims(nplus_presentation(), 4).dims == [5, 7, 9, 11]


def test_dropping_a_relation_inflates():
    full = presentation_dims(n_presentation(), 4).dims
    dropped = presentation_dims(n_presentation(drop=["phi1"]), 4).dims
    assert any(a > b for a, b in zip(dropped, full))


def test_presentation_report():
    assert verify_presentations(max_a=5, max_b=3).passed


def test_lowest_chain_identities_and_minor_roots():
    assert appendixB_verify().passed


@pytest.mark.parametrize("kind", ["po", "a-s1s2"])
@pytest.mark.parametrize("three", [False, True])
def test_type_a_relations_in_upo(kind, three):
    im = upo_images()
    if three:
        im = {g: im[g] for g in ("p", "f", "r")}
    params = {"s1": 0, "s2": 0} if kind == "a-s1s2" else {}
    report = verify_relations_in_model(kind, params, uenv_model(PO_CARRIER), im, three_generators=three)
    assert report.passed, report.to_text()


def test_relations_in_po_lie_algebra():
    from ddca.liealg import PO_E, PO_F, PO_K, PO_P, PO_Q, PO_R
    im = {"K": PO_K, "p": PO_P, "q": PO_Q, "e": PO_E, "f": PO_F, "r": PO_R}
    assert verify_relations_in_model("po", {}, po_lie_model(), im).passed


def test_weyl_model_needs_s1_equal_one():
    good = verify_relations_in_model("a-s1s2", {"s1": 1, "s2": 0}, weyl_model(), weyl_images())
    bad = verify_relations_in_model("a-s1s2", {"s1": 2, "s2": 0}, weyl_model(), weyl_images())
    assert good.passed and not bad.passed
    failing = bad.failures()[0]
    assert failing.data["residual"]


def test_gl_lambda_relations():
    lam = P("lam")
    params = {"s1": lam * lam - 4, "s2": lam * lam - 9, "s3": 0}
    assert verify_relations_in_model("a-typeB", params, gl_lambda_model(), gl_lambda_images()).passed
    wrong = dict(params, s2=lam * lam - 8)
    assert not verify_relations_in_model("a-typeB", wrong, gl_lambda_model(), gl_lambda_images()).passed


def test_counit_contrast():
    assert counit_check_typeB({"s1": P("s1"), "s2": P("s2"), "s3": P("s3")}).passed
    assert not counit_check_typeA({"s1": 1, "s2": 0}).passed


def test_relation_set_errors():
    with pytest.raises(ValueError):
        relation_set("nope")
    with pytest.raises(ValueError):
        relation_set("a-typeB", three_generators=True)
    assert generators_of_kind("po", True) == ("p", "f", "r")


def test_derivation_leibniz():
    a, b = Gen("a"), Gen("b")
    images = {"a": b, "b": Gen("c")}
    expr = comm(a, b)
    out = derivation(expr, images)
    model_images = {name: UEnvElement.generator(PO_CARRIER, key)
                    for name, key in (("a", (1, 0)), ("b", (0, 1)), ("c", (2, 0)))}
    model = uenv_model(PO_CARRIER)
    lhs = evaluate(out, model_images, model)
    rhs = evaluate(comm(b, b), model_images, model) + evaluate(comm(a, Gen("c")), model_images, model)
    assert lhs == rhs


def test_word_ranks_start_at_three():
    im = upo_images()
    assert word_rank_column(im, UEnvElement.one(PO_CARRIER), 2) == [3, 11]


def test_rank_table_csv_and_comparisons():
    table = RankTable([1, 2], {"a": [3, 11], "b": [3, 10], "ref": [3, 11]})
    assert table.identical("a", "ref") and not table.identical("b", "ref")
    assert table.first_difference("b", "ref") == 2
    assert table.to_csv().splitlines()[0] == "length,a,b,ref"


def test_word_rank_budget():
    im = upo_images()
    with pytest.raises(ResourceLimitError):
        word_rank_column(im, UEnvElement.one(PO_CARRIER), 4, budget=10)


def test_word_rank_table_runs_each_model():
    im = upo_images()
    one = UEnvElement.one(PO_CARRIER)
    table = word_rank_table([("x", im, one), ("y", im, one)], 3)
    assert table.identical("x", "y") and table.lengths == [1, 2, 3]
