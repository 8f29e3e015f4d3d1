"""Finite posets and small categories, twisted arrows, and subset lattices.

Posets store their full order relation as per-element up-sets, which keeps
transitivity checks and sub-poset extraction cheap at the sizes this
library targets (thousands of elements).

The twisted arrow category used everywhere sends an arrow f: a -> b to an
object, with a morphism f1 -> f2 whenever f1 factors as h . f2 . g; on a
poset this makes Tw(P) the opposite of the poset of intervals ordered by
inclusion.  The other convention (factorisations of f2 through f1) is not
exposed.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .errors import InputError, ResourceError
from .finset import FinMap, FinSet

CART_BOUND_DEFAULT = 10


class FinPoset:
    """A finite poset: elements plus a reflexive, antisymmetric, transitive order."""

    __slots__ = ("elements", "_up")

    def __init__(self, elements: FinSet | Iterable[str], relation: Iterable[tuple[str, str]]) -> None:
        elts = elements if isinstance(elements, FinSet) else FinSet(elements)
        up: dict[str, set[str]] = {x: set() for x in elts}
        for a, b in relation:
            if a not in elts or b not in elts:
                raise InputError(f"relation pair ({a!r}, {b!r}) mentions unknown elements")
            up[a].add(b)
        for x in elts:
            if x not in up[x]:
                raise InputError(f"order is not reflexive at {x!r}")
        for a in elts:
            for b in up[a]:
                if a != b and a in up[b]:
                    raise InputError(f"order is not antisymmetric on ({a!r}, {b!r})")
                if not up[b] <= up[a]:
                    raise InputError(f"order is not transitive through ({a!r}, {b!r})")
        self.elements = elts
        self._up = up

    def leq(self, a: str, b: str) -> bool:
        return b in self._up[a]

    def up_set(self, a: str) -> frozenset[str]:
        return frozenset(self._up[a])

    def pairs(self) -> list[tuple[str, str]]:
        """All related pairs (a, b) with a <= b, in deterministic order."""
        return [(a, b) for a in self.elements for b in self.elements if self.leq(a, b)]

    def strict_pairs(self) -> list[tuple[str, str]]:
        return [(a, b) for (a, b) in self.pairs() if a != b]

    def covers(self) -> list[tuple[str, str]]:
        """Covering relations a < b with nothing strictly between."""
        out = []
        for a, b in self.strict_pairs():
            if not any(c != a and c != b and self.leq(a, c) and self.leq(c, b) for c in self.elements):
                out.append((a, b))
        return out

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FinPoset)
            and self.elements == other.elements
            and self._up == other._up
        )

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"FinPoset({list(self.elements)!r}, covers={self.covers()!r})"

    def opposite(self) -> "FinPoset":
        return FinPoset(self.elements, [(b, a) for (a, b) in self.pairs()])

    def full_subposet(self, keep: Iterable[str]) -> "FinPoset":
        kept = FinSet(x for x in self.elements if x in set(keep))
        return FinPoset(kept, [(a, b) for a in kept for b in kept if self.leq(a, b)])


def poset_from_covers(elements: Iterable[str], covers: Iterable[tuple[str, str]]) -> FinPoset:
    """Reflexive-transitive closure of a covering (or any) relation."""
    elts = FinSet(elements)
    up: dict[str, set[str]] = {x: {x} for x in elts}
    for a, b in covers:
        if a not in elts or b not in elts:
            raise InputError(f"cover ({a!r}, {b!r}) mentions unknown elements")
        up[a].add(b)
    changed = True
    while changed:
        changed = False
        for x in elts:
            extra = set()
            for y in up[x]:
                extra |= up[y]
            if not extra <= up[x]:
                up[x] |= extra
                changed = True
    return FinPoset(elts, [(a, b) for a in elts for b in up[a]])


def chain_poset(n: int) -> FinPoset:
    """The linear order 0 < 1 < ... < n with string labels."""
    if n < 0:
        raise InputError("chain length must be >= 0")
    labels = [str(i) for i in range(n + 1)]
    return FinPoset(labels, [(labels[i], labels[j]) for i in range(n + 1) for j in range(i, n + 1)])


def antichain_poset(labels: Iterable[str]) -> FinPoset:
    elts = FinSet(labels)
    return FinPoset(elts, [(x, x) for x in elts])


def product_poset(p: FinPoset, q: FinPoset) -> FinPoset:
    elements = [f"({a},{b})" for a in p.elements for b in q.elements]
    relation = []
    for a in p.elements:
        for b in q.elements:
            for c in p.elements:
                for d in q.elements:
                    if p.leq(a, c) and q.leq(b, d):
                        relation.append((f"({a},{b})", f"({c},{d})"))
    return FinPoset(elements, relation)


class PosetFunctor:
    """A monotone map between finite posets."""

    __slots__ = ("source", "target", "mapping")

    def __init__(self, source: FinPoset, target: FinPoset, mapping: Mapping[str, str]) -> None:
        for x in source.elements:
            if x not in mapping:
                raise InputError(f"monotone map not total at {x!r}")
            if mapping[x] not in target.elements:
                raise InputError(f"value {mapping[x]!r} not in the target poset")
        for a, b in source.pairs():
            if not target.leq(mapping[a], mapping[b]):
                raise InputError(f"map is not monotone on ({a!r}, {b!r})")
        self.source = source
        self.target = target
        self.mapping = dict(mapping)

    def __call__(self, x: str) -> str:
        return self.mapping[x]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, PosetFunctor)
            and self.source == other.source
            and self.target == other.target
            and self.mapping == other.mapping
        )

    def then(self, other: "PosetFunctor") -> "PosetFunctor":
        if self.target != other.source:
            raise InputError("monotone maps are not composable")
        return PosetFunctor(self.source, other.target, {x: other(self(x)) for x in self.source.elements})


def identity_functor(p: FinPoset) -> PosetFunctor:
    return PosetFunctor(p, p, {x: x for x in p.elements})


def posets_isomorphic(p: FinPoset, q: FinPoset) -> Optional[dict[str, str]]:
    """An order isomorphism as a dict, or None; backtracking with degree pruning."""
    if len(p) != len(q):
        return None

    def signature(poset: FinPoset, x: str) -> tuple[int, int]:
        down = sum(1 for y in poset.elements if poset.leq(y, x))
        return (len(poset.up_set(x)), down)

    sig_p = {x: signature(p, x) for x in p.elements}
    sig_q = {x: signature(q, x) for x in q.elements}
    if sorted(sig_p.values()) != sorted(sig_q.values()):
        return None

    order = sorted(p.elements, key=lambda x: (sig_p[x], x))
    assignment: dict[str, str] = {}
    used: set[str] = set()

    def consistent(x: str, y: str) -> bool:
        for a, b in assignment.items():
            if p.leq(x, a) != q.leq(y, b) or p.leq(a, x) != q.leq(b, y):
                return False
        return True

    def search(i: int) -> bool:
        if i == len(order):
            return True
        x = order[i]
        for y in q.elements:
            if y in used or sig_q[y] != sig_p[x]:
                continue
            if consistent(x, y):
                assignment[x] = y
                used.add(y)
                if search(i + 1):
                    return True
                del assignment[x]
                used.remove(y)
        return False

    return dict(assignment) if search(0) else None


# ---------------------------------------------------------------------------
# small categories
# ---------------------------------------------------------------------------


class FinCat:
    """A finite category with an explicit composition table.

    ``comp[(f, g)]`` holds the composite "f then g" for each composable
    pair; associativity and unit laws are checked on construction.
    """

    __slots__ = ("objects", "arrows", "src", "tgt", "comp", "ident")

    def __init__(
        self,
        objects: FinSet | Iterable[str],
        arrows: FinSet | Iterable[str],
        src: Mapping[str, str],
        tgt: Mapping[str, str],
        comp: Mapping[tuple[str, str], str],
        ident: Mapping[str, str],
    ) -> None:
        objs = objects if isinstance(objects, FinSet) else FinSet(objects)
        arrs = arrows if isinstance(arrows, FinSet) else FinSet(arrows)
        for f in arrs:
            if src.get(f) not in objs or tgt.get(f) not in objs:
                raise InputError(f"arrow {f!r} lacks a valid source or target")
        for x in objs:
            i = ident.get(x)
            if i not in arrs or src[i] != x or tgt[i] != x:
                raise InputError(f"object {x!r} lacks a valid identity arrow")
        for f in arrs:
            for g in arrs:
                if tgt[f] == src[g]:
                    h = comp.get((f, g))
                    if h not in arrs or src[h] != src[f] or tgt[h] != tgt[g]:
                        raise InputError(f"missing or ill-typed composite for ({f!r}, {g!r})")
                elif (f, g) in comp:
                    raise InputError(f"composite defined for non-composable pair ({f!r}, {g!r})")
        for f in arrs:
            if comp[(ident[src[f]], f)] != f or comp[(f, ident[tgt[f]])] != f:
                raise InputError(f"unit law fails at {f!r}")
        for f in arrs:
            for g in arrs:
                if tgt[f] != src[g]:
                    continue
                for h in arrs:
                    if tgt[g] != src[h]:
                        continue
                    if comp[(comp[(f, g)], h)] != comp[(f, comp[(g, h)])]:
                        raise InputError(f"associativity fails on ({f!r}, {g!r}, {h!r})")
        self.objects = objs
        self.arrows = arrs
        self.src = dict(src)
        self.tgt = dict(tgt)
        self.comp = dict(comp)
        self.ident = dict(ident)

    def compose(self, f: str, g: str) -> str:
        """``f`` then ``g``."""
        if (f, g) not in self.comp:
            raise InputError(f"arrows {f!r}, {g!r} are not composable")
        return self.comp[(f, g)]

    def hom(self, x: str, y: str) -> list[str]:
        return [f for f in self.arrows if self.src[f] == x and self.tgt[f] == y]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FinCat)
            and self.objects == other.objects
            and self.arrows == other.arrows
            and self.src == other.src
            and self.tgt == other.tgt
            and self.comp == other.comp
            and self.ident == other.ident
        )

    def __repr__(self) -> str:
        return f"FinCat(objects={len(self.objects)}, arrows={len(self.arrows)})"


def poset_to_cat(p: FinPoset) -> FinCat:
    """The thin category of a poset; the arrow a <= b is labelled "a|b"."""
    arrows = [f"{a}|{b}" for (a, b) in p.pairs()]
    src = {f"{a}|{b}": a for (a, b) in p.pairs()}
    tgt = {f"{a}|{b}": b for (a, b) in p.pairs()}
    comp = {}
    for a, b in p.pairs():
        for c in p.elements:
            if p.leq(b, c):
                comp[(f"{a}|{b}", f"{b}|{c}")] = f"{a}|{c}"
    ident = {a: f"{a}|{a}" for a in p.elements}
    return FinCat(p.elements, arrows, src, tgt, comp, ident)


def monoid_to_cat(elements: Sequence[str], table: Mapping[tuple[str, str], str], unit: str) -> FinCat:
    """The one-object category of a finite monoid (table[(f, g)] = "f then g")."""
    obj = FinSet(("*",))
    arrs = FinSet(elements)
    return FinCat(
        obj,
        arrs,
        {f: "*" for f in arrs},
        {f: "*" for f in arrs},
        dict(table),
        {"*": unit},
    )


class CatFunctor:
    """A functor between finite categories."""

    __slots__ = ("source", "target", "on_objects", "on_arrows")

    def __init__(self, source: FinCat, target: FinCat, on_objects: Mapping[str, str], on_arrows: Mapping[str, str]) -> None:
        for x in source.objects:
            if on_objects.get(x) not in target.objects:
                raise InputError(f"functor undefined on object {x!r}")
        for f in source.arrows:
            g = on_arrows.get(f)
            if g not in target.arrows:
                raise InputError(f"functor undefined on arrow {f!r}")
            if target.src[g] != on_objects[source.src[f]] or target.tgt[g] != on_objects[source.tgt[f]]:
                raise InputError(f"functor breaks sources/targets at {f!r}")
        for x in source.objects:
            if on_arrows[source.ident[x]] != target.ident[on_objects[x]]:
                raise InputError(f"functor breaks the identity at {x!r}")
        for (f, g), h in source.comp.items():
            if target.compose(on_arrows[f], on_arrows[g]) != on_arrows[h]:
                raise InputError(f"functor breaks composition at ({f!r}, {g!r})")
        self.source = source
        self.target = target
        self.on_objects = dict(on_objects)
        self.on_arrows = dict(on_arrows)


# ---------------------------------------------------------------------------
# twisted arrows
# ---------------------------------------------------------------------------


def interval_label(a: str, b: str) -> str:
    return f"[{a};{b}]"


def twisted_arrow_poset(p: FinPoset) -> FinPoset:
    """Twisted arrows of a poset: intervals [a;b], ordered by reverse inclusion."""
    intervals = [(a, b) for (a, b) in p.pairs()]
    elements = [interval_label(a, b) for (a, b) in intervals]
    relation = []
    for a, b in intervals:
        for c, d in intervals:
            if p.leq(a, c) and p.leq(d, b):
                relation.append((interval_label(a, b), interval_label(c, d)))
    return FinPoset(elements, relation)


def twisted_interval(label: str) -> tuple[str, str]:
    """Inverse of :func:`interval_label`."""
    if not (label.startswith("[") and label.endswith("]")) or ";" not in label:
        raise InputError(f"not an interval label: {label!r}")
    a, b = label[1:-1].split(";", 1)
    return a, b


def twisted_arrow_poset_functor(f: PosetFunctor) -> PosetFunctor:
    """Tw on monotone maps: [a;b] maps to [f(a);f(b)]."""
    tw_src = twisted_arrow_poset(f.source)
    tw_tgt = twisted_arrow_poset(f.target)
    mapping = {}
    for lbl in tw_src.elements:
        a, b = twisted_interval(lbl)
        mapping[lbl] = interval_label(f(a), f(b))
    return PosetFunctor(tw_src, tw_tgt, mapping)


def twisted_arrow(d: FinCat) -> FinCat:
    """The twisted arrow category of a finite category.

    Objects are the arrows of ``d``; a morphism f1 -> f2 is a pair (g, h)
    with f1 = g then f2 then h, labelled "(g,h)@f1>f2".
    """
    objects = d.arrows
    arrow_labels = []
    src: dict[str, str] = {}
    tgt: dict[str, str] = {}
    data: dict[str, tuple[str, str, str, str]] = {}
    for f1 in d.arrows:
        for f2 in d.arrows:
            for g in d.hom(d.src[f1], d.src[f2]):
                for h in d.hom(d.tgt[f2], d.tgt[f1]):
                    if d.compose(d.compose(g, f2), h) == f1:
                        lbl = f"({g},{h})@{f1}>{f2}"
                        arrow_labels.append(lbl)
                        src[lbl] = f1
                        tgt[lbl] = f2
                        data[lbl] = (g, h, f1, f2)
    comp = {}
    for u in arrow_labels:
        gu, hu, f1, f2 = data[u]
        for v in arrow_labels:
            gv, hv, f2b, f3 = data[v]
            if f2b != f2:
                continue
            g = d.compose(gu, gv)
            h = d.compose(hv, hu)
            comp[(u, v)] = f"({g},{h})@{f1}>{f3}"
    ident = {}
    for f in d.arrows:
        ident[f] = f"({d.ident[d.src[f]]},{d.ident[d.tgt[f]]})@{f}>{f}"
    return FinCat(objects, FinSet(arrow_labels), src, tgt, comp, ident)


# ---------------------------------------------------------------------------
# subset lattices
# ---------------------------------------------------------------------------


def subset_label(members: Iterable[str]) -> str:
    return "{" + ",".join(sorted(members)) + "}"


def cart_poset(s: FinSet, bound: int = CART_BOUND_DEFAULT) -> FinPoset:
    """The poset of subsets of ``s`` ordered by inclusion."""
    if len(s) > bound:
        raise ResourceError(f"subset lattice of a {len(s)}-element set exceeds the bound {bound}")
    members = list(s)
    subsets = []
    for r in range(len(members) + 1):
        for combo in itertools.combinations(members, r):
            subsets.append(frozenset(combo))
    labels = {sub: subset_label(sub) for sub in subsets}
    relation = []
    for a in subsets:
        for b in subsets:
            if a <= b:
                relation.append((labels[a], labels[b]))
    return FinPoset([labels[sub] for sub in subsets], relation)


def singleton_subposet(s: FinSet, bound: int = CART_BOUND_DEFAULT) -> FinPoset:
    """The discrete sub-poset of singleton subsets inside :func:`cart_poset`."""
    full = cart_poset(s, bound)
    return full.full_subposet([subset_label([x]) for x in s])


def cart_preimage_functor(f: FinMap, bound: int = CART_BOUND_DEFAULT) -> PosetFunctor:
    """Cart on maps: U maps to its preimage, a monotone map Cart(target) -> Cart(source)."""
    cart_src = cart_poset(f.source, bound)
    cart_tgt = cart_poset(f.target, bound)
    mapping = {}
    for lbl in cart_tgt.elements:
        inner = lbl[1:-1]
        members = set(inner.split(",")) if inner else set()
        pre = [x for x in f.source if f(x) in members]
        mapping[lbl] = subset_label(pre)
    return PosetFunctor(cart_tgt, cart_src, mapping)
