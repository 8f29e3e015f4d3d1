"""Round trip between twisted-arrow functors and normal oplax span data."""

import random

import pytest

from segal_forge.errors import CoherenceError, ValidationError
from segal_forge.finset import FinMap, FinSet
from segal_forge.oplax import (
    AbstractSpan,
    FinSetTarget,
    OplaxPresentation,
    OpMap,
    OppositeSSetTarget,
    PosetDiagram,
    oplax_to_twisted,
    twisted_to_oplax,
)
from segal_forge.posets import (
    FinPoset,
    chain_poset,
    interval_label,
    poset_from_covers,
    twisted_arrow_poset,
    twisted_interval,
)
from segal_forge.gluing import build_composition_cell, gluing_span
from segal_forge.ordermaps import MapChain, compose_ordered, ordered_from_ranks
from segal_forge.sset import standard_simplex

CAT = FinSetTarget()


def thin_functor_on(poset: FinPoset, rng: random.Random) -> PosetDiagram:
    """A random functor factoring through a chain of finite sets."""
    heights = {x: sum(1 for y in poset.elements if poset.leq(y, x)) for x in poset.elements}
    top = max(heights.values())
    sets = []
    maps = []
    for h in range(top + 1):
        size = rng.randint(0, 2)
        sets.append(FinSet([f"h{h}e{i}" for i in range(size)]))
    for h in range(top):
        if len(sets[h + 1]) == 0 and len(sets[h]) > 0:
            sets[h + 1] = FinSet([f"h{h + 1}e0"])
        maps.append(
            FinMap(sets[h], sets[h + 1], {x: rng.choice(sets[h + 1].elements) for x in sets[h]})
        )

    def composite(a: int, b: int) -> FinMap:
        out = FinMap(sets[a], sets[a], {x: x for x in sets[a]})
        for h in range(a, b):
            out = out.then(maps[h])
        return out

    objects = {x: sets[heights[x] - 1] for x in poset.elements}
    morphisms = {}
    for a, b in poset.pairs():
        morphisms[(a, b)] = composite(heights[a] - 1, heights[b] - 1)
    return PosetDiagram(CAT, poset, objects, morphisms)


SMALL_POSETS = [
    chain_poset(0),
    chain_poset(1),
    chain_poset(2),
    chain_poset(3),
    poset_from_covers(["a", "b", "c", "d"], [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")]),
    poset_from_covers(["a", "b", "c"], [("a", "b"), ("a", "c")]),
    poset_from_covers(["a", "b", "c"], [("a", "c"), ("b", "c")]),
]


def test_roundtrip_thin_functors_on_small_posets():
    rng = random.Random(42)
    for poset in SMALL_POSETS:
        tw = twisted_arrow_poset(poset)
        for _ in range(6):
            f = thin_functor_on(tw, rng)
            pres = twisted_to_oplax(CAT, poset, f)
            back = oplax_to_twisted(pres)
            assert back == f


def test_roundtrip_presentation_side():
    rng = random.Random(43)
    for poset in SMALL_POSETS[1:]:
        tw = twisted_arrow_poset(poset)
        f = thin_functor_on(tw, rng)
        pres = twisted_to_oplax(CAT, poset, f)
        again = twisted_to_oplax(CAT, poset, oplax_to_twisted(pres))
        assert again.objects.keys() == pres.objects.keys()
        for key in pres.spans:
            assert again.spans[key].apex == pres.spans[key].apex
            assert again.spans[key].left == pres.spans[key].left
            assert again.spans[key].right == pres.spans[key].right
        assert again.components == pres.components


def test_constant_functor_roundtrip():
    poset = chain_poset(2)
    tw = twisted_arrow_poset(poset)
    obj = FinSet(["z"])
    ident = FinMap(obj, obj, {"z": "z"})
    diagram = PosetDiagram(
        CAT,
        tw,
        {x: obj for x in tw.elements},
        {pair: ident for pair in tw.pairs()},
    )
    pres = twisted_to_oplax(CAT, poset, diagram)
    assert oplax_to_twisted(pres) == diagram


def test_single_interval_poset_has_no_coherence_conditions():
    poset = chain_poset(1)
    a = FinSet(["a1", "a2"])
    b = FinSet(["b1"])
    apex = FinSet(["w1", "w2", "w3"])
    span = AbstractSpan(
        apex,
        FinMap(apex, a, {"w1": "a1", "w2": "a1", "w3": "a2"}),
        FinMap(apex, b, {"w1": "b1", "w2": "b1", "w3": "b1"}),
    )
    pres = OplaxPresentation(CAT, poset, {"0": a, "1": b}, {("0", "1"): span}, {})
    f = oplax_to_twisted(pres)
    assert f.objects[interval_label("0", "1")] == apex


def test_coherence_failure_pinpoints_the_triple():
    # two-element fibers make room for a genuinely incoherent component choice
    poset = chain_poset(3)
    obj = FinSet(["x", "y"])
    ident = FinMap(obj, obj, {"x": "x", "y": "y"})
    swap = FinMap(obj, obj, {"x": "y", "y": "x"})
    objects = {str(i): obj for i in range(4)}
    spans = {}
    for c, d in poset.strict_pairs():
        spans[(c, d)] = AbstractSpan(obj, ident, ident)

    good = {}
    for c, d in poset.strict_pairs():
        for e in poset.elements:
            if poset.leq(d, e) and d != e:
                pb = CAT.pullback(ident, ident)
                good[(c, d, e)] = CAT.mediate(pb, ident, ident)
    OplaxPresentation(CAT, poset, objects, spans, good)  # coherent version passes

    bad = dict(good)
    pb = CAT.pullback(ident, ident)
    bad[("0", "1", "2")] = CAT.mediate(pb, swap, swap)
    with pytest.raises((CoherenceError, ValidationError)) as err:
        OplaxPresentation(CAT, poset, objects, spans, bad)
    # either the leg condition or the triple condition localises the failure
    assert "0" in str(err.value) or "triple" in str(err.value) or "(" in str(err.value)


def test_opposite_sset_target_roundtrip_on_gluing_data():
    # the span data of a composable pair of ordered maps, on the poset [2]
    dim = 3
    p = ordered_from_ranks(
        FinMap(FinSet(["1", "2", "3"]), FinSet(["a", "b"]), {"1": "a", "2": "a", "3": "b"})
    )
    q = ordered_from_ranks(FinMap(FinSet(["a", "b"]), FinSet(["z"]), {"a": "z", "b": "z"}))
    cell = build_composition_cell(p, q, dim)
    cat = OppositeSSetTarget()
    poset = chain_poset(2)
    objects = {
        "0": cell.span_inner.source_copower,
        "1": cell.span_inner.target_copower,
        "2": cell.span_outer.target_copower,
    }
    spans = {
        ("0", "1"): AbstractSpan(
            cell.span_inner.apex, OpMap(cell.span_inner.spine), OpMap(cell.span_inner.long_edge)
        ),
        ("1", "2"): AbstractSpan(
            cell.span_outer.apex, OpMap(cell.span_outer.spine), OpMap(cell.span_outer.long_edge)
        ),
        ("0", "2"): AbstractSpan(
            cell.span_composite.apex,
            OpMap(cell.span_composite.spine),
            OpMap(cell.span_composite.long_edge),
        ),
    }
    components = {("0", "1", "2"): OpMap(cell.cell)}
    pres = OplaxPresentation(cat, poset, objects, spans, components)
    pyramid = oplax_to_twisted(pres)
    back = twisted_to_oplax(cat, poset, pyramid)
    assert cat.equal(back.components[("0", "1", "2")], components[("0", "1", "2")])
    assert oplax_to_twisted(back) == pyramid
    # the apex objects of the pyramid are the three glued complexes
    assert pyramid.objects[interval_label("0", "2")] == cell.span_composite.apex
