"""Finite sets with maps carrying a linear order on every fiber.

An :class:`OrderedMap` is a total function together with a chosen linear
order on each (possibly empty) preimage.  Composites order the composite
fiber by concatenating, in the order of the outer fiber, the inner fiber
lists; this makes composition strictly associative and unital.  Disjoint
union makes these maps a symmetric monoidal category.

Tags for binary disjoint unions are ``L:x`` / ``R:x``; n-ary unions are
the left-nested binary ones, so labels flatten to ``L:L:x``-style prefixes.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .errors import InputError
from .finset import FinMap, FinSet, disjoint_union_sets


class OrderedMap:
    """A map of finite sets with linearly ordered fibers."""

    __slots__ = ("base", "fiber_orders")

    def __init__(self, base: FinMap, fiber_orders: Mapping[str, Sequence[str]]) -> None:
        orders = {}
        for y in base.target:
            if y not in fiber_orders:
                raise InputError(f"missing fiber order over {y!r}")
            listed = tuple(fiber_orders[y])
            actual = base.fiber(y)
            if sorted(listed) != sorted(actual):
                raise InputError(
                    f"fiber order over {y!r} is {listed!r}, expected a permutation of {actual!r}"
                )
            if len(set(listed)) != len(listed):
                raise InputError(f"fiber order over {y!r} repeats an element")
            orders[y] = listed
        for y in fiber_orders:
            if y not in base.target:
                raise InputError(f"fiber order given for {y!r}, which is not in the target")
        self.base = base
        self.fiber_orders = orders

    @property
    def source(self) -> FinSet:
        return self.base.source

    @property
    def target(self) -> FinSet:
        return self.base.target

    def __call__(self, x: str) -> str:
        return self.base(x)

    def fiber(self, y: str) -> tuple[str, ...]:
        return self.fiber_orders[y]

    def rank(self, x: str) -> int:
        """One-based position of ``x`` inside its fiber's order."""
        return self.fiber_orders[self.base(x)].index(x) + 1

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, OrderedMap)
            and self.base == other.base
            and self.fiber_orders == other.fiber_orders
        )

    def __repr__(self) -> str:
        return f"OrderedMap({self.base!r}, orders={self.fiber_orders!r})"


def ordered_from_ranks(base: FinMap) -> OrderedMap:
    """Equip a plain map with the fiber orders inherited from the source order."""
    return OrderedMap(base, {y: base.fiber(y) for y in base.target})


def identity_ordered(a: FinSet) -> OrderedMap:
    return ordered_from_ranks(FinMap(a, a, {x: x for x in a}))


def compose_ordered(p: OrderedMap, q: OrderedMap) -> OrderedMap:
    """``p`` followed by ``q``; composite fibers are ordered sums."""
    if p.target != q.source:
        raise InputError("ordered maps are not composable")
    base = p.base.then(q.base)
    orders = {}
    for z in q.target:
        chunks: list[str] = []
        for y in q.fiber(z):
            chunks.extend(p.fiber(y))
        orders[z] = tuple(chunks)
    return OrderedMap(base, orders)


def disjoint_union(p: OrderedMap, q: OrderedMap) -> OrderedMap:
    """Componentwise disjoint union on ``L:``/``R:``-tagged labels."""
    src, src_l, src_r = disjoint_union_sets(p.source, q.source)
    tgt, tgt_l, tgt_r = disjoint_union_sets(p.target, q.target)
    assignment = {}
    for x in p.source:
        assignment[src_l(x)] = tgt_l(p(x))
    for x in q.source:
        assignment[src_r(x)] = tgt_r(q(x))
    base = FinMap(src, tgt, assignment)
    orders: dict[str, tuple[str, ...]] = {}
    for y in p.target:
        orders[tgt_l(y)] = tuple(src_l(x) for x in p.fiber(y))
    for y in q.target:
        orders[tgt_r(y)] = tuple(src_r(x) for x in q.fiber(y))
    return OrderedMap(base, orders)


def disjoint_union_many(ps: Sequence[OrderedMap]) -> OrderedMap:
    """Left-nested fold of the binary disjoint union."""
    if not ps:
        return identity_ordered(FinSet(()))
    out = ps[0]
    for p in ps[1:]:
        out = disjoint_union(out, p)
    return out


def fiber_restriction(p: OrderedMap, y: str) -> OrderedMap:
    """Restriction of ``p`` to the fiber over ``y``, with target the singleton {y}."""
    if y not in p.target:
        raise InputError(f"{y!r} is not in the target")
    fib = FinSet(p.fiber(y))
    single = FinSet((y,))
    base = FinMap(fib, single, {x: y for x in fib})
    return OrderedMap(base, {y: p.fiber(y)})


def retag(p: OrderedMap, source_fn, target_fn) -> OrderedMap:
    """Rename source and target labels through bijective label functions."""
    src = FinSet(source_fn(x) for x in p.source)
    tgt = FinSet(target_fn(y) for y in p.target)
    base = FinMap(src, tgt, {source_fn(x): target_fn(p(x)) for x in p.source})
    orders = {target_fn(y): tuple(source_fn(x) for x in p.fiber(y)) for y in p.target}
    return OrderedMap(base, orders)


def restrict_ordered(p: OrderedMap, ys: Iterable[str]) -> OrderedMap:
    """Restriction of ``p`` over a subset of its target."""
    kept = FinSet(y for y in p.target if y in set(ys))
    xs = FinSet(x for x in p.source if p(x) in kept)
    base = FinMap(xs, kept, {x: p(x) for x in xs})
    return OrderedMap(base, {y: p.fiber(y) for y in kept})


class MapChain:
    """A nonempty, composable string of :class:`OrderedMap` values."""

    __slots__ = ("maps",)

    def __init__(self, maps: Sequence[OrderedMap]) -> None:
        maps = tuple(maps)
        if not maps:
            raise InputError("a chain must contain at least one map")
        for a, b in zip(maps, maps[1:]):
            if a.target != b.source:
                raise InputError("chain is not composable")
        self.maps = maps

    def __len__(self) -> int:
        return len(self.maps)

    def __iter__(self):
        return iter(self.maps)

    def __getitem__(self, i: int) -> OrderedMap:
        return self.maps[i]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MapChain) and self.maps == other.maps

    def objects(self) -> tuple[FinSet, ...]:
        return (self.maps[0].source,) + tuple(p.target for p in self.maps)

    def composite(self, i: int, j: int) -> OrderedMap:
        """The composite from object ``i`` to object ``j`` (identity when i == j)."""
        if not 0 <= i <= j <= len(self.maps):
            raise InputError(f"bad composite range ({i}, {j})")
        if i == j:
            return identity_ordered(self.objects()[i])
        out = self.maps[i]
        for k in range(i + 1, j):
            out = compose_ordered(out, self.maps[k])
        return out

    def compose_all(self) -> OrderedMap:
        return self.composite(0, len(self.maps))

    def reindex(self, vertex_map: Sequence[int]) -> "MapChain":
        """Restrict the chain along a weakly increasing map of vertex indices.

        ``vertex_map`` lists the chosen objects; consecutive entries become
        the composites between them.  Needs at least two entries.
        """
        verts = tuple(vertex_map)
        if len(verts) < 2:
            raise InputError("reindexed chain needs at least one map")
        n = len(self.maps)
        for v in verts:
            if not 0 <= v <= n:
                raise InputError(f"vertex {v} out of range")
        for a, b in zip(verts, verts[1:]):
            if a > b:
                raise InputError("vertex map must be weakly increasing")
        return MapChain([self.composite(a, b) for a, b in zip(verts, verts[1:])])
