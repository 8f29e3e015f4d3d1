"""Gluing spans of ordered-fiber maps and their comparison cells.

A map p: X -> Y with ordered fibers produces a span of simplicial sets:
one standard simplex per element of Y, of dimension the fiber size; the
copies of the interval indexed by X land on consecutive spine edges (the
order of a fiber decides which), and the copies indexed by Y land on the
long edges.  An empty fiber contributes a point, onto which the long
edge collapses.

For a composable pair the two apexes map into the apex of the composite:
the inner one by active collapses, the outer one by block inclusions.
The comparison cell is the induced map from the pushout of the two spans
over the middle copower into the composite apex; it is invertible exactly
when each outer fiber decomposes the composite fiber trivially.

Apex simplices are labelled ``y:t`` with ``t`` a vertex tuple; tags may
contain colons, tuples never do, so ``rsplit(":", 1)`` recovers the pair.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .errors import InputError, InternalError, TruncationError
from .finset import FinMap, FinSet
from .ordermaps import MapChain, OrderedMap, compose_ordered
from .sset import (
    SSet,
    SSetMap,
    colimit,
    copower,
    induced_from_colimit,
    label_tuple,
    standard_simplex,
    tuple_label,
)

_simplex = functools.lru_cache(maxsize=None)(standard_simplex)


def interval_copower(s: FinSet, dim: int) -> SSet:
    """One copy of the standard 1-simplex per element, labels ``x:t``."""
    return copower(s, _simplex(1, dim))[0]


def _fiber_sizes(p: OrderedMap) -> dict[str, int]:
    return {y: len(p.fiber(y)) for y in p.target}


def required_truncation(p: OrderedMap) -> int:
    return max([1] + [len(p.fiber(y)) for y in p.target])


def gluing_apex(p: OrderedMap, dim: int) -> SSet:
    sizes = _fiber_sizes(p)
    if dim < required_truncation(p):
        raise TruncationError(required_truncation(p), dim, "gluing apex")
    summands = {y: _simplex(sizes[y], dim) for y in p.target}
    levels = [
        FinSet(f"{y}:{lbl}" for y in p.target for lbl in summands[y].levels[m])
        for m in range(dim + 1)
    ]

    def lifted(m: int, shift: int, pick) -> FinMap:
        return FinMap(
            levels[m],
            levels[m + shift],
            {
                f"{y}:{lbl}": f"{y}:{pick(summands[y], lbl)}"
                for y in p.target
                for lbl in summands[y].levels[m]
            },
        )

    faces = {
        (m, i): lifted(m, -1, lambda sx, lbl, m=m, i=i: sx.faces[(m, i)](lbl))
        for m in range(1, dim + 1)
        for i in range(m + 1)
    }
    degens = {
        (m, i): lifted(m, +1, lambda sx, lbl, m=m, i=i: sx.degens[(m, i)](lbl))
        for m in range(dim)
        for i in range(m + 1)
    }
    return SSet(dim, levels, faces, degens)


def _edge_map(source: SSet, apex: SSet, tags: FinSet, vertex_of) -> SSetMap:
    """Map a copower of intervals into an apex; ``vertex_of(tag, v)`` gives (summand, vertex)."""
    comps = []
    for m in range(source.dim + 1):
        assignment = {}
        for tag in tags:
            for lbl in _simplex(1, source.dim).levels[m]:
                verts = label_tuple(lbl)
                summand, images = vertex_of(tag)
                assignment[f"{tag}:{lbl}"] = f"{summand}:{tuple_label(tuple(images[v] for v in verts))}"
        comps.append(FinMap(source.levels[m], apex.levels[m], assignment))
    return SSetMap(source, apex, comps)


@dataclass(frozen=True, eq=False)
class GluingSpan:
    """The span of a single ordered-fiber map: spine and long-edge legs into the apex."""

    base: OrderedMap
    apex: SSet
    spine: SSetMap
    long_edge: SSetMap

    @property
    def source_copower(self) -> SSet:
        return self.spine.source

    @property
    def target_copower(self) -> SSet:
        return self.long_edge.source


def gluing_span(p: OrderedMap, dim: int) -> GluingSpan:
    """The apex with its spine and long-edge structure maps."""
    apex = gluing_apex(p, dim)
    x_copies = interval_copower(p.source, dim)
    y_copies = interval_copower(p.target, dim)

    def spine_vertex(x: str):
        y = p(x)
        r = p.rank(x)
        return y, {0: r - 1, 1: r}

    def long_vertex(y: str):
        return y, {0: 0, 1: len(p.fiber(y))}

    spine = _edge_map(x_copies, apex, p.source, spine_vertex)
    long_edge = _edge_map(y_copies, apex, p.target, long_vertex)
    return GluingSpan(p, apex, spine, long_edge)


def _summand_map(src: GluingSpan, dst: GluingSpan, summand_of, vertex_image) -> SSetMap:
    """Map one apex into another summand-wise through a vertex assignment."""
    comps = []
    for m in range(src.apex.dim + 1):
        assignment = {}
        for y in src.base.target:
            target_summand = summand_of(y)
            images = vertex_image(y)
            for lbl in _simplex(len(src.base.fiber(y)), src.apex.dim).levels[m]:
                verts = label_tuple(lbl)
                assignment[f"{y}:{lbl}"] = f"{target_summand}:{tuple_label(tuple(images[v] for v in verts))}"
        comps.append(FinMap(src.apex.levels[m], dst.apex.levels[m], assignment))
    return SSetMap(src.apex, dst.apex, comps)


def block_inclusion(p: OrderedMap, q: OrderedMap, dim: int) -> SSetMap:
    """The apex of ``p`` includes into the apex of ``q . p`` block by block.

    The summand of y sits inside the summand of q(y) as the subinterval
    occupied by the fiber of y within the composite fiber order.
    """
    if p.target != q.source:
        raise InputError("maps are not composable")
    composite = compose_ordered(p, q)
    src = gluing_span(p, dim)
    dst = gluing_span(composite, dim)

    def offset(y: str) -> int:
        z = q(y)
        out = 0
        for w in q.fiber(z):
            if w == y:
                return out
            out += len(p.fiber(w))
        raise InternalError(f"{y!r} missing from its own fiber")

    return _summand_map(
        src,
        dst,
        summand_of=lambda y: q(y),
        vertex_image=lambda y: {v: offset(y) + v for v in range(len(p.fiber(y)) + 1)},
    )


def active_collapse(p: OrderedMap, q: OrderedMap, dim: int) -> SSetMap:
    """The apex of ``q`` maps into the apex of ``q . p`` by cumulative fiber sizes."""
    if p.target != q.source:
        raise InputError("maps are not composable")
    composite = compose_ordered(p, q)
    src = gluing_span(q, dim)
    dst = gluing_span(composite, dim)

    def images(z: str) -> dict[int, int]:
        cumulative = {0: 0}
        total = 0
        for j, y in enumerate(q.fiber(z), start=1):
            total += len(p.fiber(y))
            cumulative[j] = total
        return cumulative

    return _summand_map(src, dst, summand_of=lambda z: z, vertex_image=images)


@dataclass(frozen=True, eq=False)
class CompositionCell:
    """The comparison data of a composable pair.

    ``cell`` maps the pushout of the two gluing spans over the middle
    copower into the apex of the composite.
    """

    inner: OrderedMap
    outer: OrderedMap
    span_inner: GluingSpan
    span_outer: GluingSpan
    span_composite: GluingSpan
    pushout: SSet
    from_outer: SSetMap
    from_inner: SSetMap
    cell: SSetMap


def build_composition_cell(p: OrderedMap, q: OrderedMap, dim: int) -> CompositionCell:
    if p.target != q.source:
        raise InputError("maps are not composable")
    composite = compose_ordered(p, q)
    needed = max(required_truncation(p), required_truncation(q), required_truncation(composite))
    if dim < needed:
        raise TruncationError(needed, dim, "comparison cell")
    span_p = gluing_span(p, dim)
    span_q = gluing_span(q, dim)
    span_pq = gluing_span(composite, dim)
    middle = span_q.source_copower
    if middle != span_p.target_copower:
        raise InternalError("middle copowers disagree")
    a = block_inclusion(p, q, dim)
    b = active_collapse(p, q, dim)
    if span_q.spine.then(b) != span_p.long_edge.then(a):
        raise InternalError("collapse and inclusion disagree on the middle copower")
    total, cocone = colimit(
        [span_q.apex, span_p.apex, middle],
        [(2, 0, span_q.spine), (2, 1, span_p.long_edge)],
    )
    cell = induced_from_colimit(total, cocone, span_pq.apex, [b, a, span_q.spine.then(b)])
    return CompositionCell(
        inner=p,
        outer=q,
        span_inner=span_p,
        span_outer=span_q,
        span_composite=span_pq,
        pushout=total,
        from_outer=cocone[0],
        from_inner=cocone[1],
        cell=cell,
    )


def composition_cell(p: OrderedMap, q: OrderedMap, dim: int) -> SSetMap:
    """The comparison map itself; its source is the glued pushout."""
    return build_composition_cell(p, q, dim).cell


@dataclass(frozen=True, eq=False)
class IteratedCell:
    """Comparison data of a whole chain: every apex glued along every middle copower."""

    chain: MapChain
    spans: tuple[GluingSpan, ...]
    pushout: SSet
    injections: tuple[SSetMap, ...]
    cell: SSetMap


def apex_into_composite(chain: MapChain, j: int, dim: int) -> SSetMap:
    """The canonical map from the j-th apex into the apex of the full composite.

    First the active collapse against the composite below stage j, then a
    block inclusion for every later stage.
    """
    maps = list(chain)
    current = active_collapse(chain.composite(0, j), maps[j], dim)
    for k in range(j + 1, len(maps)):
        current = current.then(block_inclusion(chain.composite(0, k), maps[k], dim))
    return current


def build_iterated_cell(chain: MapChain, dim: int) -> IteratedCell:
    """Glue all the spans of a chain and compare with the total composite."""
    maps = list(chain)
    needed = max(
        required_truncation(chain.composite(i, j))
        for i in range(len(maps) + 1)
        for j in range(i, len(maps) + 1)
    )
    if dim < needed:
        raise TruncationError(needed, dim, "iterated comparison cell")
    spans = [gluing_span(p, dim) for p in maps]
    middles = [interval_copower(p.target, dim) for p in maps[:-1]]
    objects = [g.apex for g in spans] + middles
    edges = []
    for j in range(len(maps) - 1):
        mid_idx = len(maps) + j
        edges.append((mid_idx, j, spans[j].long_edge))
        edges.append((mid_idx, j + 1, spans[j + 1].spine))
    total, cocone = colimit(objects, edges)

    span_total = gluing_span(chain.compose_all(), dim)
    legs = [apex_into_composite(chain, j, dim) for j in range(len(maps))]
    middle_legs = [spans[j].long_edge.then(legs[j]) for j in range(len(maps) - 1)]
    cell = induced_from_colimit(total, cocone, span_total.apex, legs + middle_legs)
    return IteratedCell(chain=chain, spans=tuple(spans), pushout=total, injections=tuple(cocone), cell=cell)
