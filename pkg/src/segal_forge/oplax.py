"""Normal oplax span-valued data on a poset, and functors on its twisted arrows.

The two are interchangeable: a functor out of the twisted arrow poset
restricts to spans on intervals and comparison maps on composable pairs,
and conversely that data rebuilds the functor.  Both passages are exact
on the nose here because pullbacks are chosen once and for all.

Two targets are supported through a small adapter protocol: finite sets
with chosen pullbacks, and finite simplicial sets read contravariantly
(so "pullback" is a chosen pushout and spans are cospans of simplicial
maps).  The coherence equation for composable triples is verified, never
assumed; degenerate triples hold by normality, which is structural in
this presentation (identity spans are not stored).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Protocol

from .errors import CoherenceError, InputError, ValidationError
from .finset import FinMap, FinSet, identity as finset_identity
from .finset import into_pullback, is_bijection, pullback as finset_pullback
from .posets import FinPoset, interval_label, twisted_arrow_poset, twisted_interval
from .sset import SSet, SSetMap, colimit, identity_sset_map, induced_from_colimit


@dataclass(frozen=True, eq=False)
class ChosenPullback:
    apex: object
    to_first: object
    to_second: object
    aux: object = None


class SpanTarget(Protocol):
    """What the oplax machinery needs from a category with chosen pullbacks."""

    def identity(self, obj): ...

    def compose(self, u, v): ...

    def source(self, u): ...

    def target(self, u): ...

    def equal(self, u, v) -> bool: ...

    def equal_objects(self, a, b) -> bool: ...

    def is_iso(self, u) -> bool: ...

    def pullback(self, u, v) -> ChosenPullback: ...

    def mediate(self, pb: ChosenPullback, p, q): ...


class FinSetTarget:
    """Finite sets, maps, and the chosen pair-label pullbacks."""

    def identity(self, obj: FinSet) -> FinMap:
        return finset_identity(obj)

    def compose(self, u: FinMap, v: FinMap) -> FinMap:
        return u.then(v)

    def source(self, u: FinMap) -> FinSet:
        return u.source

    def target(self, u: FinMap) -> FinSet:
        return u.target

    def equal(self, u: FinMap, v: FinMap) -> bool:
        return u == v

    def equal_objects(self, a: FinSet, b: FinSet) -> bool:
        return a == b

    def is_iso(self, u: FinMap) -> bool:
        return is_bijection(u)

    def pullback(self, u: FinMap, v: FinMap) -> ChosenPullback:
        apex, p1, p2 = finset_pullback(u, v)
        return ChosenPullback(apex, p1, p2)

    def mediate(self, pb: ChosenPullback, p: FinMap, q: FinMap) -> FinMap:
        return into_pullback(pb.apex, p, q)


@dataclass(frozen=True, eq=False)
class OpMap:
    """A morphism of the opposite simplicial-set category.

    ``forward`` is the underlying simplicial map; it runs from the
    abstract target to the abstract source.
    """

    forward: SSetMap


class OppositeSSetTarget:
    """Finite simplicial sets read contravariantly; pullbacks are pushouts."""

    def identity(self, obj: SSet) -> OpMap:
        return OpMap(identity_sset_map(obj))

    def compose(self, u: OpMap, v: OpMap) -> OpMap:
        return OpMap(v.forward.then(u.forward))

    def source(self, u: OpMap) -> SSet:
        return u.forward.target

    def target(self, u: OpMap) -> SSet:
        return u.forward.source

    def equal(self, u: OpMap, v: OpMap) -> bool:
        return u.forward == v.forward

    def equal_objects(self, a: SSet, b: SSet) -> bool:
        return a == b

    def is_iso(self, u: OpMap) -> bool:
        return u.forward.is_isomorphism()

    def pullback(self, u: OpMap, v: OpMap) -> ChosenPullback:
        total, cocone = colimit(
            [self.source(u), self.source(v), self.target(u)],
            [(2, 0, u.forward), (2, 1, v.forward)],
        )
        return ChosenPullback(total, OpMap(cocone[0]), OpMap(cocone[1]), aux=(cocone, u.forward))

    def mediate(self, pb: ChosenPullback, p: OpMap, q: OpMap) -> OpMap:
        cocone, first_edge = pb.aux
        target = p.forward.target
        middle_leg = first_edge.then(p.forward)
        induced = induced_from_colimit(
            pb.apex, list(cocone), target, [p.forward, q.forward, middle_leg]
        )
        return OpMap(induced)


@dataclass(frozen=True, eq=False)
class AbstractSpan:
    """An apex with its two legs, in whatever target category is in play."""

    apex: object
    left: object
    right: object


class OplaxPresentation:
    """Spans on the strict intervals of a poset plus comparison components.

    Identity spans are implicit (normality).  ``spans`` is keyed by strict
    pairs (c, d); ``components`` by strict triples (c, d, e), holding the
    comparison map of the pair ((c, d), (d, e)).
    """

    def __init__(
        self,
        cat: SpanTarget,
        poset: FinPoset,
        objects: Mapping[str, object],
        spans: Mapping[tuple[str, str], AbstractSpan],
        components: Mapping[tuple[str, str, str], object],
    ) -> None:
        self.cat = cat
        self.poset = poset
        self.objects = dict(objects)
        self.spans = dict(spans)
        self.components = dict(components)
        self._pullbacks: dict[tuple[str, str, str], ChosenPullback] = {}
        self._validate_shape()
        self.verify_coherence()

    # -- structural access ----------------------------------------------------

    def span(self, c: str, d: str) -> AbstractSpan:
        if c == d:
            ident = self.cat.identity(self.objects[c])
            return AbstractSpan(self.objects[c], ident, ident)
        return self.spans[(c, d)]

    def chosen_pullback(self, c: str, d: str, e: str) -> ChosenPullback:
        """The chosen pullback composing the spans over (c, d) and (d, e)."""
        key = (c, d, e)
        if key not in self._pullbacks:
            self._pullbacks[key] = self.cat.pullback(self.span(d, e).left, self.span(c, d).right)
        return self._pullbacks[key]

    def component(self, c: str, d: str, e: str):
        return self.components[(c, d, e)]

    # -- validation -------------------------------------------------------------

    def _validate_shape(self) -> None:
        cat = self.cat
        for x in self.poset.elements:
            if x not in self.objects:
                raise InputError(f"no object assigned to {x!r}")
        for c, d in self.poset.strict_pairs():
            if (c, d) not in self.spans:
                raise InputError(f"no span assigned to ({c!r}, {d!r})")
            sp = self.spans[(c, d)]
            if not cat.equal_objects(cat.source(sp.left), sp.apex) or not cat.equal_objects(
                cat.source(sp.right), sp.apex
            ):
                raise InputError(f"span legs over ({c!r}, {d!r}) do not start at the apex")
            if not cat.equal_objects(cat.target(sp.left), self.objects[c]):
                raise InputError(f"left leg over ({c!r}, {d!r}) has the wrong target")
            if not cat.equal_objects(cat.target(sp.right), self.objects[d]):
                raise InputError(f"right leg over ({c!r}, {d!r}) has the wrong target")
        for c, d, e in self._strict_triples():
            if (c, d, e) not in self.components:
                raise InputError(f"no comparison component for ({c!r}, {d!r}, {e!r})")
            phi = self.components[(c, d, e)]
            pb = self.chosen_pullback(c, d, e)
            if not cat.equal_objects(cat.source(phi), self.span(c, e).apex):
                raise InputError(f"component ({c!r}, {d!r}, {e!r}) has the wrong source")
            if not cat.equal_objects(cat.target(phi), pb.apex):
                raise InputError(f"component ({c!r}, {d!r}, {e!r}) does not land in the chosen pullback")
            # the component is a morphism of spans: it must commute with both legs
            left_composite = cat.compose(pb.to_second, self.span(c, d).left)
            right_composite = cat.compose(pb.to_first, self.span(d, e).right)
            if not cat.equal(cat.compose(phi, left_composite), self.span(c, e).left):
                raise ValidationError(f"component ({c!r}, {d!r}, {e!r}) breaks the left leg")
            if not cat.equal(cat.compose(phi, right_composite), self.span(c, e).right):
                raise ValidationError(f"component ({c!r}, {d!r}, {e!r}) breaks the right leg")

    def _strict_triples(self):
        for c, d in self.poset.strict_pairs():
            for e in self.poset.elements:
                if d != e and self.poset.leq(d, e):
                    yield (c, d, e)

    def _strict_quadruples(self):
        for c, d, e in self._strict_triples():
            for l in self.poset.elements:
                if self.poset.leq(e, l) and e != l:
                    yield (c, d, e, l)

    def verify_coherence(self) -> None:
        """Check the associativity coherence of the components on all triples."""
        cat = self.cat
        for c, d, e, l in self._strict_quadruples():
            span_f = self.span(c, d)
            span_g = self.span(d, e)
            span_h = self.span(e, l)
            pb_gf = self.chosen_pullback(c, d, e)
            pb_hg = self.chosen_pullback(d, e, l)
            pb_h_gf = self.chosen_pullback(c, e, l)
            pb_hg_f = self.chosen_pullback(c, d, l)

            # left association: F(h) x_{F(e)} (F(g) x_{F(d)} F(f))
            t_right = cat.compose(pb_gf.to_first, span_g.right)
            q1 = cat.pullback(span_h.left, t_right)
            m1 = cat.mediate(
                q1,
                pb_h_gf.to_first,
                cat.compose(pb_h_gf.to_second, self.component(c, d, e)),
            )
            lhs = cat.compose(self.component(c, e, l), m1)

            # right association: (F(h) x_{F(e)} F(g)) x_{F(d)} F(f)
            s_left = cat.compose(pb_hg.to_second, span_g.left)
            q2 = cat.pullback(s_left, span_f.right)
            m2 = cat.mediate(
                q2,
                cat.compose(pb_hg_f.to_first, self.component(d, e, l)),
                pb_hg_f.to_second,
            )
            rhs_pre = cat.compose(self.component(c, d, l), m2)

            # canonical associator between the two iterated pullbacks
            inner = cat.mediate(
                pb_gf,
                cat.compose(q2.to_first, pb_hg.to_second),
                q2.to_second,
            )
            assoc = cat.mediate(
                q1,
                cat.compose(q2.to_first, pb_hg.to_first),
                inner,
            )
            rhs = cat.compose(rhs_pre, assoc)
            if not cat.equal(lhs, rhs):
                raise CoherenceError(((c, d), (d, e), (e, l)))


class PosetDiagram:
    """A functor from a finite poset to a target category, stored explicitly."""

    def __init__(self, cat: SpanTarget, poset: FinPoset, objects: Mapping[str, object], morphisms: Mapping[tuple[str, str], object]) -> None:
        self.cat = cat
        self.poset = poset
        self.objects = dict(objects)
        self.morphisms = dict(morphisms)
        for x in poset.elements:
            if x not in self.objects:
                raise InputError(f"diagram lacks an object at {x!r}")
            got = self.morphisms.get((x, x))
            if got is None:
                self.morphisms[(x, x)] = cat.identity(self.objects[x])
            elif not cat.equal(got, cat.identity(self.objects[x])):
                raise InputError(f"diagram is not normalized at {x!r}")
        for a, b in poset.strict_pairs():
            mor = self.morphisms.get((a, b))
            if mor is None:
                raise InputError(f"diagram lacks a morphism on ({a!r}, {b!r})")
            if not cat.equal_objects(cat.source(mor), self.objects[a]):
                raise InputError(f"morphism on ({a!r}, {b!r}) has the wrong source")
            if not cat.equal_objects(cat.target(mor), self.objects[b]):
                raise InputError(f"morphism on ({a!r}, {b!r}) has the wrong target")
        for a, b in poset.pairs():
            for c in poset.elements:
                if poset.leq(b, c):
                    lhs = cat.compose(self.morphisms[(a, b)], self.morphisms[(b, c)])
                    if not cat.equal(lhs, self.morphisms[(a, c)]):
                        raise InputError(f"diagram is not functorial on ({a!r}, {b!r}, {c!r})")

    def morphism(self, a: str, b: str):
        return self.morphisms[(a, b)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PosetDiagram):
            return False
        if self.poset != other.poset or set(self.objects) != set(other.objects):
            return False
        for x in self.objects:
            if not self.cat.equal_objects(self.objects[x], other.objects[x]):
                return False
        for key in self.morphisms:
            if key not in other.morphisms or not self.cat.equal(self.morphisms[key], other.morphisms[key]):
                return False
        return True


def oplax_to_twisted(pres: OplaxPresentation) -> PosetDiagram:
    """Assemble the functor on the twisted arrow poset from oplax data.

    The presentation's coherence is verified on construction, so the
    reconstruction below is automatically functorial; the diagram
    constructor double-checks that anyway.
    """
    cat = pres.cat
    tw = twisted_arrow_poset(pres.poset)
    objects = {}
    for lbl in tw.elements:
        a, b = twisted_interval(lbl)
        objects[lbl] = pres.span(a, b).apex
    morphisms = {}
    for x, y in tw.pairs():
        c, d = twisted_interval(x)
        cp, dp = twisted_interval(y)
        morphisms[(x, y)] = _twisted_image(pres, c, d, cp, dp)
    return PosetDiagram(cat, tw, objects, morphisms)


def _twisted_image(pres: OplaxPresentation, c: str, d: str, cp: str, dp: str):
    """The image of the twisted-arrow morphism [c;d] -> [cp;dp]."""
    cat = pres.cat
    if c == cp and d == dp:
        return cat.identity(pres.span(c, d).apex)
    if c != cp:
        if cp == d:
            # full collapse onto the right endpoint
            return pres.span(c, d).right
        step = cat.compose(pres.component(c, cp, d), pres.chosen_pullback(c, cp, d).to_first)
        return cat.compose(step, _twisted_image(pres, cp, d, cp, dp))
    # now c == cp and dp < d
    if cp == dp:
        return pres.span(c, d).left
    return cat.compose(pres.component(c, dp, d), pres.chosen_pullback(c, dp, d).to_second)


def twisted_to_oplax(cat: SpanTarget, poset: FinPoset, diagram: PosetDiagram) -> OplaxPresentation:
    """Extract spans and comparison components from a twisted-arrow functor."""
    tw = twisted_arrow_poset(poset)
    if diagram.poset != tw:
        raise InputError("diagram is not indexed by the twisted arrows of the given poset")
    objects = {x: diagram.objects[interval_label(x, x)] for x in poset.elements}
    spans = {}
    for c, d in poset.strict_pairs():
        whole = interval_label(c, d)
        spans[(c, d)] = AbstractSpan(
            diagram.objects[whole],
            diagram.morphism(whole, interval_label(c, c)),
            diagram.morphism(whole, interval_label(d, d)),
        )
    presentation_components = {}
    pullback_cache: dict[tuple[str, str, str], ChosenPullback] = {}

    def span_of(a: str, b: str) -> AbstractSpan:
        if a == b:
            ident = cat.identity(objects[a])
            return AbstractSpan(objects[a], ident, ident)
        return spans[(a, b)]

    for c, d in poset.strict_pairs():
        for e in poset.elements:
            if poset.leq(d, e) and d != e:
                pb = cat.pullback(span_of(d, e).left, span_of(c, d).right)
                pullback_cache[(c, d, e)] = pb
                whole = interval_label(c, e)
                presentation_components[(c, d, e)] = cat.mediate(
                    pb,
                    diagram.morphism(whole, interval_label(d, e)),
                    diagram.morphism(whole, interval_label(c, d)),
                )
    return OplaxPresentation(cat, poset, objects, spans, presentation_components)
