import pytest
from hypothesis import given, strategies as st

from ddca.arith import P
from ddca.deligne import (InvalidRankError, PartitionDiagram, PartitionElement, SizeMismatchError, YoungDiagram,
                          all_diagrams, bell_number, compose_diagrams, content, interpolation_consistency,
                          omega_interpolated, pad, partitions_of, run_all, verify_associativity,
                          verify_bell_counts, verify_padding_identity)

NU = P("nu")


def test_content_and_padding():
    assert content(YoungDiagram((2, 1))) == 0
    assert content(YoungDiagram((3,))) == 3
    assert pad(YoungDiagram((1,)), 3) == YoungDiagram((2, 1))
    with pytest.raises(InvalidRankError):
        pad(YoungDiagram((2,)), 3)
    with pytest.raises(ValueError):
        YoungDiagram((1, 2))


def test_omega_example():
    assert omega_interpolated(YoungDiagram((1,))) == NU * NU / 2 - 3 * NU / 2


def _transposition_sum_eigenvalue(shape):
    """Sum of contents computed from hook placements, by brute force over boxes."""
    return sum(j - i for i, r in enumerate(shape) for j in range(r))


@given(st.integers(0, 5), st.integers(0, 12))
def test_padding_identity_brute(size, extra):
    for lam in partitions_of(size):
        first = lam.rows[0] if lam.rows else 0
        n = first + size + extra
        assert _transposition_sum_eigenvalue(pad(lam, n).rows) == omega_interpolated(lam, n).constant_value()


@pytest.mark.parametrize("size", range(0, 5))
def test_interpolation_consistency(size):
    for lam in partitions_of(size):
        first = lam.rows[0] if lam.rows else 0
        assert interpolation_consistency(lam, range(first + size, first + size + 4)).passed


def test_interpolation_needs_three_ranks():
    with pytest.raises(InvalidRankError):
        interpolation_consistency(YoungDiagram((1,)), [2, 3])


def test_partition_counts():
    assert [len(partitions_of(s)) for s in range(8)] == [1, 1, 2, 3, 5, 7, 11, 15]
    assert [bell_number(k) for k in range(7)] == [1, 1, 2, 5, 15, 52, 203]
    assert len(all_diagrams(2, 2)) == 15


def test_identity_is_neutral():
    ident = PartitionElement({PartitionDiagram.identity(2): 1})
    for d in all_diagrams(2, 2):
        x = PartitionElement({d: 1})
        assert ident * x == x and x * ident == x


def test_loops_give_nu():
    single = PartitionElement({PartitionDiagram.singletons(2, 2): 1})
    assert single * single == single.scale(NU ** 2)
    d = PartitionDiagram(1, 1, ((1,), (2,)))
    assert compose_diagrams(d, d).terms == {d: NU}


def test_size_mismatch():
    with pytest.raises(SizeMismatchError):
        compose_diagrams(PartitionDiagram.identity(2), PartitionDiagram.identity(1))


diagrams22 = st.sampled_from(all_diagrams(2, 2))


@given(diagrams22, diagrams22, diagrams22)
def test_associativity_random(a, b, c):
    x, y, z = (PartitionElement({d: 1}) for d in (a, b, c))
    assert (x * y) * z == x * (y * z)


def test_full_associativity_and_reports():
    assert verify_associativity(2).passed
    assert verify_bell_counts(5).passed
    assert verify_padding_identity(4, 12).passed


def test_run_all():
    assert run_all(3).passed
