import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from laxdyn.errors import BadUnit, NonAssociative, NotComposable
from laxdyn.fincat import (
    Arrow,
    FinCategory,
    FinFunctor,
    chain_category,
    constant_functor,
    discrete_category,
    finite_monoid_category,
    identity_functor,
    one_step_category,
    terminal_category,
    validate_category,
    validate_functor,
)


def test_terminal_category():
    c = terminal_category()
    assert len(c.objects) == 1 and len(c.arrows) == 1
    assert validate_category(c).ok
    assert c.compose("0", "0") == "0"


def test_one_step_category():
    c = one_step_category()
    assert c.objects == ("T0", "T1")
    assert len(c.arrows) == 3
    assert validate_category(c).ok
    assert c.compose("Id_T0", "d") == "d"
    assert c.compose("d", "Id_T1") == "d"
    assert not c.composable("d", "d")
    with pytest.raises(NotComposable):
        c.compose("d", "d")


def test_monoid_max():
    c = finite_monoid_category([[0, 1], [1, 1]], 0)
    assert len(c.objects) == 1 and len(c.arrows) == 2
    assert validate_category(c).ok


def test_monoid_z2_associative_by_exhaustion():
    table = [[0, 1], [1, 0]]
    c = finite_monoid_category(table, 0)
    for a, b, d in itertools.product(range(2), repeat=3):
        assert table[table[a][b]][d] == table[a][table[b][d]]
    assert validate_category(c).ok


def test_monoid_errors():
    # a*b = b+1 mod 3 style: (0*0)*0 = 2, 0*(0*0) = 1
    bad = [[1, 2, 0], [1, 2, 0], [1, 2, 0]]
    with pytest.raises((NonAssociative, BadUnit)):
        finite_monoid_category(bad, 0)
    # left projection a*b = a is associative but has no two-sided unit
    with pytest.raises(BadUnit):
        finite_monoid_category([[0, 0], [1, 1]], 0)
    # 0 is a unit, but 1*(1*2) != (1*1)*2 in this table
    nonassoc = [[0, 1, 2], [1, 2, 0], [2, 2, 1]]
    with pytest.raises(NonAssociative):
        finite_monoid_category(nonassoc, 0)


def test_wrong_identity_reported():
    c = one_step_category()
    table = dict(c.table)
    table[("Id_T0", "d")] = "Id_T1"
    rep = validate_category(FinCategory(c.objects, c.arrows, c.identity, table))
    assert not rep.ok


def test_associativity_violation_names_triple():
    # one object, arrows e, a, b with e unit; a*a = b, everything else absorbs into b,
    # except b*a = a which breaks (a*a)*a vs a*(a*a)
    o = "•"
    names = ["e", "a", "b"]
    mul = {}
    for x in names:
        mul[("e", x)] = x
        mul[(x, "e")] = x
    mul[("a", "a")] = "b"
    mul[("a", "b")] = "b"
    mul[("b", "b")] = "b"
    mul[("b", "a")] = "a"
    c = FinCategory([o], [Arrow(n, o, o) for n in names], {o: "e"}, mul)
    rep = validate_category(c)
    assert rep.first.law == "associativity"
    f, g, h = rep.first.witness
    assert mul[(mul[(f, g)], h)] != mul[(f, mul[(g, h)])]


def test_missing_composite_reported():
    c = one_step_category()
    table = dict(c.table)
    del table[("Id_T0", "d")]
    rep = validate_category(FinCategory(c.objects, c.arrows, c.identity, table))
    assert rep.first.law == "composition-defined"


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_chain_categories_valid(n):
    c = chain_category(n)
    assert len(c.arrows) == n * (n + 1) // 2
    assert validate_category(c).ok


def test_discrete_category():
    c = discrete_category(["x", "y"])
    assert validate_category(c).ok
    assert c.hom("x", "y") == []


def test_functors():
    c = one_step_category()
    assert validate_functor(identity_functor(c)).ok
    assert validate_functor(constant_functor(c, terminal_category(), "•")).ok
    bad = FinFunctor(c, c, {"T0": "T0", "T1": "T1"}, {"Id_T0": "Id_T0", "Id_T1": "Id_T1", "d": "Id_T0"})
    assert validate_functor(bad).first.law == "functor-typing"


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=1, max_value=5))
def test_cyclic_monoids_are_categories(n):
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    assert validate_category(finite_monoid_category(table, 0)).ok
