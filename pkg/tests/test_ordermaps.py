"""Maps with linearly ordered fibers and their monoidal structure."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from segal_forge.errors import InputError
from segal_forge.finset import FinMap, FinSet, is_bijection
from segal_forge.ordermaps import (
    MapChain,
    OrderedMap,
    compose_ordered,
    disjoint_union,
    disjoint_union_many,
    fiber_restriction,
    identity_ordered,
    ordered_from_ranks,
    retag,
)


def omap(src, tgt, table, orders):
    return OrderedMap(FinMap(FinSet(src), FinSet(tgt), table), orders)


def test_fiber_orders_validated():
    with pytest.raises(InputError):
        omap(["1", "2"], ["y"], {"1": "y", "2": "y"}, {"y": ["1"]})
    with pytest.raises(InputError):
        omap(["1", "2"], ["y"], {"1": "y", "2": "y"}, {"y": ["1", "1"]})
    with pytest.raises(InputError):
        omap(["1"], ["y"], {"1": "y"}, {"y": ["1"], "z": []})


def test_empty_fibers_are_allowed():
    p = omap(["1"], ["y", "z"], {"1": "y"}, {"y": ["1"], "z": []})
    assert p.fiber("z") == ()


def test_compose_with_identity():
    q = omap(["1", "2", "3"], ["a", "b"], {"1": "a", "2": "a", "3": "b"}, {"a": ["2", "1"], "b": ["3"]})
    assert compose_ordered(identity_ordered(q.source), q) == q
    assert compose_ordered(q, identity_ordered(q.target)) == q


def test_composite_fiber_is_ordered_concatenation():
    # hand evaluation of the ordered-sum formula
    p = omap(["1", "2", "3"], ["1", "2"], {"1": "1", "2": "1", "3": "2"}, {"1": ["1", "2"], "2": ["3"]})
    q = omap(["1", "2"], ["1"], {"1": "1", "2": "1"}, {"1": ["1", "2"]})
    composite = compose_ordered(p, q)
    assert composite.fiber("1") == ("1", "2", "3")


def test_empty_fiber_contributes_nothing():
    p = omap(["1"], ["a", "b"], {"1": "a"}, {"a": ["1"], "b": []})
    q = omap(["a", "b"], ["z"], {"a": "z", "b": "z"}, {"z": ["b", "a"]})
    composite = compose_ordered(p, q)
    assert composite.fiber("z") == ("1",)


def test_disjoint_union_with_empty_is_relabelling():
    p = omap(["1", "2"], ["y"], {"1": "y", "2": "y"}, {"y": ["2", "1"]})
    e = identity_ordered(FinSet([]))
    u = disjoint_union(p, e)
    assert u.source.elements == ("L:1", "L:2")
    assert u.fiber("L:y") == ("L:2", "L:1")


def test_disjoint_union_matches_three_to_two_example():
    m = omap(["1", "2"], ["1"], {"1": "1", "2": "1"}, {"1": ["1", "2"]})
    i = identity_ordered(FinSet(["1"]))
    u = disjoint_union(m, i)
    assert len(u.source) == 3 and len(u.target) == 2
    assert u.fiber("L:1") == ("L:1", "L:2")
    assert u.fiber("R:1") == ("R:1",)


def test_disjoint_union_associative_after_retag():
    p = omap(["1"], ["a"], {"1": "a"}, {"a": ["1"]})
    q = omap(["2", "3"], ["b"], {"2": "b", "3": "b"}, {"b": ["3", "2"]})
    r = omap([], ["c"], {}, {"c": []})
    lhs = disjoint_union(disjoint_union(p, q), r)
    rhs = disjoint_union(p, disjoint_union(q, r))

    def left_to_right(lbl: str) -> str:
        # ((p + q) + r) tags L:L:x, L:R:x, R:x; (p + (q + r)) tags L:x, R:L:x, R:R:x
        if lbl.startswith("L:L:"):
            return "L:" + lbl[4:]
        if lbl.startswith("L:R:"):
            return "R:L:" + lbl[4:]
        return "R:R:" + lbl[2:]

    assert retag(lhs, left_to_right, left_to_right) == rhs


def test_fiber_restriction_examples():
    p = omap(["1", "2", "3"], ["1", "2"], {"1": "1", "2": "1", "3": "2"}, {"1": ["1", "2"], "2": ["3"]})
    r = fiber_restriction(p, "1")
    assert r.source.elements == ("1", "2") and r.target.elements == ("1",)
    assert r.fiber("1") == ("1", "2")
    single = fiber_restriction(p, "2")
    assert single.source.elements == ("3",)
    q = omap([], ["y"], {}, {"y": []})
    empty = fiber_restriction(q, "y")
    assert len(empty.source) == 0


def _random_ordered(rng, src_labels, tgt_labels):
    src, tgt = FinSet(src_labels), FinSet(tgt_labels)
    base = FinMap(src, tgt, {x: rng.choice(tgt.elements) for x in src})
    orders = {}
    for y in tgt:
        fib = list(base.fiber(y))
        rng.shuffle(fib)
        orders[y] = fib
    return OrderedMap(base, orders)


def test_composition_strictly_associative_and_unital():
    rng = random.Random(5)
    for _ in range(50):
        a = [f"a{i}" for i in range(rng.randint(0, 4))]
        b = [f"b{i}" for i in range(rng.randint(1, 4))]
        c = [f"c{i}" for i in range(rng.randint(1, 4))]
        d = [f"d{i}" for i in range(rng.randint(1, 3))]
        p = _random_ordered(rng, a, b)
        q = _random_ordered(rng, b, c)
        r = _random_ordered(rng, c, d)
        assert compose_ordered(compose_ordered(p, q), r) == compose_ordered(p, compose_ordered(q, r))
        assert compose_ordered(identity_ordered(p.source), p) == p


def test_composition_distributes_over_disjoint_union():
    rng = random.Random(7)
    for _ in range(20):
        p = _random_ordered(rng, ["a0", "a1"], ["b0"])
        q = _random_ordered(rng, ["b0"], ["c0", "c1"])
        p2 = _random_ordered(rng, ["x0"], ["y0", "y1"])
        q2 = _random_ordered(rng, ["y0", "y1"], ["z0"])
        lhs = compose_ordered(disjoint_union(p, p2), disjoint_union(q, q2))
        rhs = disjoint_union(compose_ordered(p, q), compose_ordered(p2, q2))
        assert lhs == rhs


def test_every_map_is_a_union_of_fiber_restrictions_up_to_bijection():
    rng = random.Random(13)
    for _ in range(20):
        p = _random_ordered(rng, [f"a{i}" for i in range(4)], ["u", "v", "w"])
        pieces = [fiber_restriction(p, y) for y in p.target]
        union = disjoint_union_many(pieces)
        # the union has tagged labels; build the evident retagging bijections
        src_bij = FinMap(
            union.source,
            p.source,
            {lbl: lbl.rsplit(":", 1)[1] for lbl in union.source},
        )
        tgt_bij = FinMap(
            union.target,
            p.target,
            {lbl: lbl.rsplit(":", 1)[1] for lbl in union.target},
        )
        assert is_bijection(src_bij) and is_bijection(tgt_bij)
        for lbl in union.source:
            assert tgt_bij(union(lbl)) == p(src_bij(lbl))
        for y in union.target:
            assert tuple(src_bij(x) for x in union.fiber(y)) == p.fiber(tgt_bij(y))


def test_chain_validation_and_composites():
    p = omap(["1", "2"], ["a"], {"1": "a", "2": "a"}, {"a": ["1", "2"]})
    q = omap(["a"], ["z"], {"a": "z"}, {"z": ["a"]})
    chain = MapChain([p, q])
    assert chain.composite(0, 2) == compose_ordered(p, q)
    assert chain.composite(1, 1) == identity_ordered(p.target)
    with pytest.raises(InputError):
        MapChain([q, p])
    sub = chain.reindex([0, 2])
    assert sub.maps[0] == compose_ordered(p, q)


@given(st.data())
@settings(max_examples=30, deadline=None)
def test_rank_is_position_in_fiber(data):
    size = data.draw(st.integers(1, 5))
    labels = [f"e{i}" for i in range(size)]
    p = ordered_from_ranks(
        FinMap(FinSet(labels), FinSet(["t"]), {x: "t" for x in labels})
    )
    for i, x in enumerate(labels):
        assert p.rank(x) == i + 1
