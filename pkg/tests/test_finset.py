"""Finite sets, maps, pullbacks, pushouts, spans."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from segal_forge.errors import InputError
from segal_forge.finset import (
    FinMap,
    FinSet,
    Span,
    all_maps,
    compose_spans,
    identity,
    identity_span,
    into_pullback,
    inverse,
    is_bijection,
    pullback,
    pushout,
    quotient,
    span_isomorphism,
    spans_isomorphic,
)


def fmap(src, tgt, table):
    return FinMap(FinSet(src), FinSet(tgt), table)


def test_finset_rejects_duplicates():
    with pytest.raises(InputError):
        FinSet(["a", "a"])


def test_finmap_totality_and_values_checked():
    a, b = FinSet(["x"]), FinSet(["y"])
    with pytest.raises(InputError):
        FinMap(a, b, {})
    with pytest.raises(InputError):
        FinMap(a, b, {"x": "z"})


def test_pullback_with_singleton_is_product():
    f = fmap(["1", "2"], ["*"], {"1": "*", "2": "*"})
    g = fmap(["1"], ["*"], {"1": "*"})
    apex, _, _ = pullback(f, g)
    assert len(apex) == 2


def test_pullback_of_empty_identities_is_empty():
    e = identity(FinSet([]))
    apex, _, _ = pullback(e, e)
    assert len(apex) == 0


def test_pullback_enumeration_example():
    # oracle: all pairs, filtered on equal images
    f = fmap(["a", "b"], ["x", "y"], {"a": "x", "b": "y"})
    g = fmap(["c"], ["x", "y"], {"c": "x"})
    expected = [(a, b) for a in ["a", "b"] for b in ["c"] if f(a) == g(b)]
    assert expected == [("a", "c")]
    apex, pa, pb = pullback(f, g)
    assert apex.elements == ("(a|c)",)
    assert pa("(a|c)") == "a" and pb("(a|c)") == "c"


def test_pullback_projections_commute():
    f = fmap(["a", "b", "c"], ["x", "y"], {"a": "x", "b": "x", "c": "y"})
    g = fmap(["u", "v"], ["x", "y"], {"u": "x", "v": "y"})
    apex, pa, pb = pullback(f, g)
    for z in apex:
        assert f(pa(z)) == g(pb(z))


def test_pullback_universal_property_small():
    # every commuting cone from a small test set has exactly one mediating map
    f = fmap(["a", "b", "c"], ["x", "y"], {"a": "x", "b": "x", "c": "y"})
    g = fmap(["u", "v"], ["x", "y"], {"u": "x", "v": "y"})
    apex, pa, pb = pullback(f, g)
    for size in range(3):
        c = FinSet([f"t{i}" for i in range(size)])
        for u in all_maps(c, f.source):
            for v in all_maps(c, g.source):
                if any(f(u(t)) != g(v(t)) for t in c):
                    continue
                mediators = [
                    h
                    for h in all_maps(c, apex)
                    if h.then(pa) == u and h.then(pb) == v
                ]
                assert len(mediators) == 1
                assert mediators[0] == into_pullback(apex, u, v)


def test_pushout_of_identities_recovers_the_set():
    x = FinSet(["p", "q"])
    apex, i1, i2 = pushout(identity(x), identity(x))
    assert len(apex) == 2
    assert i1 == i2


def test_pushout_glues_points():
    f = fmap(["x"], ["a"], {"x": "a"})
    g = fmap(["x"], ["b"], {"x": "b"})
    apex, _, _ = pushout(f, g)
    assert len(apex) == 1


def test_pushout_union_find_example():
    # oracle: naive closure of the generated relation on the tagged union
    f = fmap(["x", "y"], ["a"], {"x": "a", "y": "a"})
    g = fmap(["x", "y"], ["b", "c"], {"x": "b", "y": "c"})
    tagged = ["L:a", "R:b", "R:c"]
    rel = {("L:a", "R:b"), ("L:a", "R:c")}
    classes = {t: {t} for t in tagged}
    for p, q in rel:
        merged = classes[p] | classes[q]
        for t in merged:
            classes[t] = merged
    expected_classes = {frozenset(v) for v in classes.values()}
    assert len(expected_classes) == 1
    apex, _, _ = pushout(f, g)
    assert len(apex) == 1


def test_pushout_coequalizes():
    f = fmap(["x", "y"], ["a", "b"], {"x": "a", "y": "b"})
    g = fmap(["x", "y"], ["b", "a"], {"x": "b", "y": "a"})
    _, il, ir = pushout(f, g)
    # the two composites into the pushout agree on every point of the source
    assert f.then(il) == g.then(ir)


def test_quotient_labels_are_canonical():
    carrier = FinSet(["b", "a", "c"])
    quot, proj = quotient(carrier, [("b", "c")])
    # classes ordered by least member: {a} then {b, c}
    assert quot.elements == ("class#0", "class#1")
    assert proj("a") == "class#0"
    assert proj("b") == proj("c") == "class#1"


def test_is_bijection_and_inverse():
    e = identity(FinSet(["1", "2"]))
    assert is_bijection(e)
    collapse = fmap(["1", "2"], ["1"], {"1": "1", "2": "1"})
    assert not is_bijection(collapse)
    f = fmap(["1", "2"], ["a", "b"], {"1": "b", "2": "a"})
    assert f.then(inverse(f)) == identity(f.source)
    assert inverse(f).then(f) == identity(f.target)


def test_compose_spans_identity_up_to_iso():
    apex = FinSet(["m", "n"])
    s = Span(
        fmap(["m", "n"], ["a"], {"m": "a", "n": "a"}),
        fmap(["m", "n"], ["b", "c"], {"m": "b", "n": "c"}),
    )
    composite = compose_spans(s, identity_span(s.right.target))
    witness = span_isomorphism(composite, s)
    assert witness is not None and is_bijection(witness)
    assert witness.then(s.left) == composite.left
    assert witness.then(s.right) == composite.right


def test_compose_spans_singletons():
    s = Span(fmap(["x"], ["p"], {"x": "p"}), fmap(["x"], ["q"], {"x": "q"}))
    t = Span(fmap(["y"], ["q"], {"y": "q"}), fmap(["y"], ["r"], {"y": "r"}))
    out = compose_spans(s, t)
    assert len(out.apex) == 1


def test_compose_spans_pullback_count():
    s = Span(
        fmap(["1", "2", "3"], ["1", "2"], {"1": "1", "2": "2", "3": "1"}),
        fmap(["1", "2", "3"], ["1"], {"1": "1", "2": "1", "3": "1"}),
    )
    t = Span(fmap(["1"], ["1"], {"1": "1"}), fmap(["1"], ["1"], {"1": "1"}))
    out = compose_spans(s, t)
    # oracle: pairs (a, b) with s.right(a) == t.left(b)
    count = sum(1 for a in s.apex for b in t.apex if s.right(a) == t.left(b))
    assert count == 3
    assert len(out.apex) == 3


def _random_span(rng, left_size, apex_size, right_size, tag):
    left = FinSet([f"{tag}l{i}" for i in range(left_size)])
    apex = FinSet([f"{tag}a{i}" for i in range(apex_size)])
    right = FinSet([f"{tag}r{i}" for i in range(right_size)])
    lmap = FinMap(apex, left, {x: rng.choice(left.elements) for x in apex})
    rmap = FinMap(apex, right, {x: rng.choice(right.elements) for x in apex})
    return Span(lmap, rmap)


def test_span_composition_associative_up_to_iso():
    rng = random.Random(11)
    for _ in range(25):
        sizes = [rng.randint(1, 3) for _ in range(4)]
        apexes = [rng.randint(0, 3) for _ in range(3)]
        s = _random_span(rng, sizes[0], apexes[0], sizes[1], "s")
        t = _random_span(rng, sizes[1], apexes[1], sizes[2], "t")
        u = _random_span(rng, sizes[2], apexes[2], sizes[3], "u")
        # force matching boundaries
        t = Span(FinMap(t.apex, s.right.target, {x: rng.choice(s.right.target.elements) for x in t.apex}), t.right)
        u = Span(FinMap(u.apex, t.right.target, {x: rng.choice(t.right.target.elements) for x in u.apex}), u.right)
        lhs = compose_spans(compose_spans(s, t), u)
        rhs = compose_spans(s, compose_spans(t, u))
        witness = span_isomorphism(lhs, rhs)
        assert witness is not None
        assert witness.then(rhs.left) == lhs.left
        assert witness.then(rhs.right) == lhs.right


@given(st.integers(0, 3), st.integers(0, 3), st.data())
@settings(max_examples=40, deadline=None)
def test_spans_never_compared_by_label(nl, na, data):
    left = FinSet([f"L{i}" for i in range(nl + 1)])
    apex = FinSet([f"A{i}" for i in range(na)])
    lmap = FinMap(apex, left, {x: data.draw(st.sampled_from(left.elements)) for x in apex})
    rmap = FinMap(apex, left, {x: data.draw(st.sampled_from(left.elements)) for x in apex})
    s = Span(lmap, rmap)
    relabeled_apex = FinSet([f"B{i}" for i in range(na)])
    table = dict(zip(apex.elements, relabeled_apex.elements))
    t = Span(
        FinMap(relabeled_apex, left, {table[x]: lmap(x) for x in apex}),
        FinMap(relabeled_apex, left, {table[x]: rmap(x) for x in apex}),
    )
    assert spans_isomorphic(s, t)
