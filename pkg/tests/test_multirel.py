import pytest

from laxdyn import fixtures as fx
from laxdyn.errors import BadIndex, ContextMismatch, DomainMismatch, UntaggedIndex
from laxdyn.multirel import (
    MultipleBinaryRelation,
    MultipleRelation,
    br,
    br_defined,
    br_image,
    br_preimage,
    glue,
    mbr,
    mr,
    mr2,
    one,
    restrict,
    zero,
    zero_binary,
)

import laws


def test_restrict():
    R = MultipleRelation({1: "ab", 2: "xy"}, {("a", "x"), ("b", "y")})
    assert restrict(R, [1, 2]) == R
    assert restrict(R, []).graph == {()}
    assert restrict(R, []) == one({})
    assert restrict(zero(R.context), []) == zero({})
    assert restrict(R, [2]).graph == {("x",), ("y",)}
    with pytest.raises(BadIndex):
        restrict(R, [3])


def test_glue_disjoint_is_product():
    R1 = MultipleRelation({1: "x"}, {("x",)})
    R2 = MultipleRelation({2: "yz"}, {("y",), ("z",)})
    assert glue(R1, R2).graph == {("x", "y"), ("x", "z")}


def test_glue_units():
    R = MultipleRelation({1: "ab", 2: "xy"}, {("a", "x")})
    assert glue(R, one({})) == R
    assert glue(R, zero(R.context)) == zero(R.context)
    assert zero({}) != one({})


def test_glue_context_mismatch():
    with pytest.raises(ContextMismatch):
        glue(MultipleRelation({1: "ab"}), MultipleRelation({1: "abc"}))


def test_ill_typed_tuple():
    with pytest.raises(DomainMismatch):
        MultipleRelation({1: "ab"}, {("c",)})
    with pytest.raises(BadIndex):
        MultipleRelation({1: "ab"}, {("a", "b")})


def test_conversions_on_small_relation():
    Q = MultipleBinaryRelation({1: "w"}, {1: (0, 1)}, {(("w", 0),), (("w", 1),)})
    B = br(Q)
    assert B.graph == {(("w",), (0,)), (("w",), (1,))}
    assert br(zero_binary({1: "w"}, {1: (0, 1)})).graph == frozenset()
    R = mr2(Q)
    assert R.index == ((1, 0), (1, 1))
    assert R.context == {(1, 0): frozenset("w"), (1, 1): frozenset((0, 1))}
    assert mbr(R) == Q
    assert mr(zero_binary({1: "w"}, {1: (0, 1)})).graph == frozenset()
    assert mr2(zero_binary({1: "w"}, {1: (0, 1)})).graph == frozenset()


def test_mbr_requires_tagged_index():
    with pytest.raises(UntaggedIndex):
        mbr(MultipleRelation({1: "ab"}))
    with pytest.raises(UntaggedIndex):
        mbr(MultipleRelation({(1, 0): "ab"}))


def test_borromean_conversions():
    F = fx.borromean_family()
    Q = F.request.relation
    R = mr(Q)
    assert len(R.index) == 3
    for i in R.index:
        assert set(R.context[i]) == {(z, l) for z in F.family.Z[i] for l in F.family.L[i]}
    assert mbr(mr2(Q)) == Q
    assert br_defined(Q) == br(Q).defined
    assert br_image(Q) == frozenset(m for _, m in br(Q).graph)
    pre = br_preimage(Q)
    assert sum(len(v) for v in pre.values()) == len(Q.graph)


def test_relation_algebra_laws_exhaustive():
    c = laws.relation_algebra_violations()
    assert laws.failures(c) == {}
