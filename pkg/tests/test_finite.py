import math

import pytest
from hypothesis import given, settings, strategies as st

from oracles import naive_closure, naive_op, naive_rank
from ordchain.chain import Interval
from ordchain.finite import (
    CapExceeded,
    NotClosed,
    NotSubset,
    closure,
    enumerate_family,
    fin_classify,
    format_finite,
    identity,
    is_closed,
    is_o,
    is_op,
    parse_finite,
    relative_rank,
    single_relative_generators,
)


def test_text_form():
    assert parse_finite("[2,1,3]") == (2, 1, 3)
    assert parse_finite(" [ 2, 1 ] ") == (2, 1)
    assert format_finite((2, 1, 3)) == "[2,1,3]"
    with pytest.raises(ValueError):
        parse_finite("2,1")
    with pytest.raises(ValueError):
        parse_finite("[0,1]")


def test_enumeration_examples():
    assert enumerate_family(2, "O") == {(1, 1), (1, 2), (2, 2)}
    assert enumerate_family(2, "OP") == {(1, 1), (1, 2), (2, 1), (2, 2)}
    assert len(enumerate_family(3, "O")) == 10
    assert enumerate_family(3, "O", [2]) == {(2, 2, 2)}


@pytest.mark.parametrize("n", range(2, 7))
def test_order_preserving_count_is_binomial(n):
    assert len(enumerate_family(n, "O")) == math.comb(2 * n - 1, n - 1)


@pytest.mark.parametrize("n", range(1, 5))
def test_op_matches_naive_definition(n):
    every = enumerate_family(n, "T")
    assert len(every) == n ** n
    assert enumerate_family(n, "OP") == {f for f in every if naive_op(f)}


@pytest.mark.parametrize("n,y", [(3, None), (3, [1, 3]), (4, [2, 3]), (4, None)])
def test_families_are_nested_and_closed(n, y):
    o, op = enumerate_family(n, "O", y), enumerate_family(n, "OP", y)
    assert o <= op
    assert closure(o).elements == o and closure(op).elements == op
    assert is_closed(o) and is_closed(op)


def test_cap(monkeypatch):
    with pytest.raises(CapExceeded):
        enumerate_family(8, "O")
    monkeypatch.setenv("ORDCHAIN_FINITE_CAP", "3")
    with pytest.raises(CapExceeded):
        enumerate_family(4, "O")
    with pytest.raises(CapExceeded):
        single_relative_generators(4)


def test_classify_examples():
    assert fin_classify((1, 2, 3)).verdict == "order_preserving"
    cl = fin_classify((2, 1))
    assert (cl.verdict, cl.ideal, cl.overlap) == ("orientation_proper", Interval.closed(1, 1), None)
    cl = fin_classify((3, 1, 2))
    assert (cl.verdict, cl.ideal, cl.overlap) == ("orientation_proper", Interval.closed(1, 1), None)
    cl = fin_classify((2, 3, 2))
    assert cl.overlap == 2
    assert fin_classify((2, 1, 2, 1)).verdict == "neither"
    assert is_o((1, 1, 2)) and not is_o((2, 1)) and is_op((2, 1)) and not is_op((2, 1, 2, 1))


def test_closure_examples():
    assert closure([identity(3)]).elements == {identity(3)}
    res = closure([(2, 1)])
    assert res.elements == {(2, 1), (1, 2)}
    assert res.generator_count == 1
    assert closure(enumerate_family(2, "O") | {(2, 1)}).elements == enumerate_family(2, "T")


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(1, 4), min_size=4, max_size=4).map(tuple), min_size=1, max_size=3))
def test_closure_matches_naive_oracle(gens):
    res = closure(gens)
    assert res.elements == naive_closure(gens)
    assert set(gens) <= res.elements


def test_relative_rank_examples():
    o2, op2 = enumerate_family(2, "O"), enumerate_family(2, "OP")
    assert relative_rank(op2, op2) == (0, frozenset())
    assert relative_rank(op2, o2) == (1, frozenset({(2, 1)}))
    r, B = relative_rank(o2, set())
    assert r == 3 and B == o2
    with pytest.raises(NotSubset):
        relative_rank(o2, {(2, 1)})
    with pytest.raises(NotClosed):
        relative_rank({(2, 1)}, set())


@pytest.mark.parametrize("n", [3, 4, 5])
def test_op_has_relative_rank_one_over_o(n):
    o, op = enumerate_family(n, "O"), enumerate_family(n, "OP")
    r, B = relative_rank(op, o)
    assert r == 1
    assert closure(o | B).elements == op
    if n < 5:  # the naive oracle is too slow at n = 5
        assert naive_closure(o | B) == op


@pytest.mark.parametrize("n", [2, 3])
def test_rank_identities(n):
    o = enumerate_family(n, "O")
    assert relative_rank(o, set())[0] == naive_rank(o)
    assert relative_rank(o, o)[0] == 0


@pytest.mark.parametrize("A", [[(1, 1, 1)], [(1, 2, 2), (2, 2, 3)], [(1, 1, 3), (3, 3, 3)]])
def test_relative_rank_ignores_closing_a(A):
    op = enumerate_family(3, "OP")
    assert relative_rank(op, A)[0] == relative_rank(op, closure(A).elements)[0]


def test_relative_rank_is_monotone_in_a():
    op = enumerate_family(3, "OP")
    o = enumerate_family(3, "O")
    chain = [set(), {(1, 2, 3)}, {(1, 2, 3), (1, 1, 2)}, set(o), set(o) | {(3, 1, 2)}]
    ranks = [relative_rank(op, A)[0] for A in chain]
    assert ranks == sorted(ranks, reverse=True)
    assert ranks[-1] == 0


def test_single_relative_generators():
    assert single_relative_generators(2) == {(2, 1)}
    assert single_relative_generators(2, [1]) == frozenset()
    gens3 = single_relative_generators(3)
    assert gens3 == {(2, 3, 1), (3, 1, 2)}
    assert all(len(set(g)) == 3 for g in gens3)
    o, op = enumerate_family(3, "O"), enumerate_family(3, "OP")
    for g in op - o:
        assert (naive_closure(o | {g}) == op) == (g in gens3)
