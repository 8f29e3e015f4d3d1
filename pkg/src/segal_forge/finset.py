"""Explicit finite sets, total maps, and their finite (co)limits.

Everything downstream runs on these three types.  Values are immutable
after construction and all operations are pure, so they are safe to use
from concurrent code.

Canonical label conventions for constructed sets:

* pullback pairs are labelled ``"(a|b)"``;
* pushout / colimit classes are labelled ``"class#k"``, numbered by the
  least member of the class in label order.

Constructed objects are only unique up to isomorphism, so spans are
compared through :func:`span_isomorphism`, never by label equality.
"""

from __future__ import annotations

from typing import Callable, Iterable, Iterator, Mapping, Optional

from .errors import InputError


class FinSet:
    """A finite set of distinct, opaque string labels with a stored order."""

    __slots__ = ("elements", "_index")

    def __init__(self, elements: Iterable[str]) -> None:
        elts = tuple(elements)
        index = {x: i for i, x in enumerate(elts)}
        if len(index) != len(elts):
            raise InputError(f"duplicate labels in finite set: {elts!r}")
        for x in elts:
            if not isinstance(x, str):
                raise InputError(f"labels must be strings, got {x!r}")
        self.elements = elts
        self._index = index

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x: object) -> bool:
        return x in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FinSet) and self.elements == other.elements

    def __hash__(self) -> int:
        return hash(self.elements)

    def __repr__(self) -> str:
        return f"FinSet({list(self.elements)!r})"

    def same_underlying(self, other: "FinSet") -> bool:
        """True when both sets have the same elements, in any order."""
        return set(self.elements) == set(other.elements)


EMPTY = FinSet(())


class FinMap:
    """A total function between two :class:`FinSet` values."""

    __slots__ = ("source", "target", "assignment")

    def __init__(self, source: FinSet, target: FinSet, assignment: Mapping[str, str]) -> None:
        for x in source:
            if x not in assignment:
                raise InputError(f"map not total: no value for {x!r}")
        for x, y in assignment.items():
            if x not in source:
                raise InputError(f"assignment key {x!r} not in source")
            if y not in target:
                raise InputError(f"value {y!r} of {x!r} not in target")
        self.source = source
        self.target = target
        self.assignment = dict(assignment)

    def __call__(self, x: str) -> str:
        return self.assignment[x]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FinMap)
            and self.source == other.source
            and self.target == other.target
            and self.assignment == other.assignment
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, tuple(sorted(self.assignment.items()))))

    def __repr__(self) -> str:
        return f"FinMap({self.source!r} -> {self.target!r}, {self.assignment!r})"

    def then(self, other: "FinMap") -> "FinMap":
        """This map followed by ``other``."""
        if self.target != other.source:
            raise InputError("maps are not composable")
        return FinMap(self.source, other.target, {x: other(self(x)) for x in self.source})

    def fiber(self, y: str) -> tuple[str, ...]:
        """Preimage of ``y``, in source order."""
        return tuple(x for x in self.source if self(x) == y)

    def image(self) -> set[str]:
        return {self(x) for x in self.source}


def identity(a: FinSet) -> FinMap:
    return FinMap(a, a, {x: x for x in a})


def constant(source: FinSet, target: FinSet, y: str) -> FinMap:
    if y not in target:
        raise InputError(f"{y!r} not in target")
    return FinMap(source, target, {x: y for x in source})


def compose(f: FinMap, g: FinMap) -> FinMap:
    """``f`` followed by ``g``."""
    return f.then(g)


def is_bijection(f: FinMap) -> bool:
    return len(f.image()) == len(f.source) == len(f.target)


def inverse(f: FinMap) -> FinMap:
    if not is_bijection(f):
        raise InputError("map is not a bijection")
    return FinMap(f.target, f.source, {f(x): x for x in f.source})


def pair_label(a: str, b: str) -> str:
    return f"({a}|{b})"


def pullback(f: FinMap, g: FinMap) -> tuple[FinSet, FinMap, FinMap]:
    """Chosen pullback of ``f`` and ``g`` over their common target.

    The apex consists of the pairs ``(a|b)`` with ``f(a) = g(b)``, ordered
    lexicographically by the source orders.
    """
    if f.target != g.target:
        raise InputError("pullback: maps do not share a target")
    labels = []
    to_a = {}
    to_b = {}
    for a in f.source:
        fa = f(a)
        for b in g.source:
            if fa == g(b):
                lbl = pair_label(a, b)
                labels.append(lbl)
                to_a[lbl] = a
                to_b[lbl] = b
    apex = FinSet(labels)
    return apex, FinMap(apex, f.source, to_a), FinMap(apex, g.source, to_b)


def into_pullback(apex: FinSet, u: FinMap, v: FinMap) -> FinMap:
    """The mediating map into a chosen pullback apex from the cone ``(u, v)``.

    ``u`` and ``v`` must share a source; the pair ``(u(x)|v(x))`` must land
    in ``apex`` for every ``x`` (i.e. the cone actually commutes).
    """
    if u.source != v.source:
        raise InputError("cone legs do not share a source")
    assignment = {}
    for x in u.source:
        lbl = pair_label(u(x), v(x))
        if lbl not in apex:
            raise InputError(f"cone does not commute: {lbl!r} not in pullback apex")
        assignment[x] = lbl
    return FinMap(u.source, apex, assignment)


def disjoint_union_sets(a: FinSet, b: FinSet) -> tuple[FinSet, FinMap, FinMap]:
    """Tagged disjoint union with the ``L:``/``R:`` prefix encoding."""
    union = FinSet(tuple(f"L:{x}" for x in a) + tuple(f"R:{x}" for x in b))
    inl = FinMap(a, union, {x: f"L:{x}" for x in a})
    inr = FinMap(b, union, {x: f"R:{x}" for x in b})
    return union, inl, inr


def quotient(carrier: FinSet, pairs: Iterable[tuple[str, str]]) -> tuple[FinSet, FinMap]:
    """Quotient by the equivalence relation generated by ``pairs``.

    Classes are labelled ``class#k`` where k numbers the classes by their
    least member in label order.
    """
    parent = {x: x for x in carrier}

    def find(x: str) -> str:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    classes: dict[str, list[str]] = {}
    for x in carrier:
        classes.setdefault(find(x), []).append(x)
    ordered = sorted(classes.values(), key=lambda members: min(members))
    label_of = {}
    for k, members in enumerate(ordered):
        for x in members:
            label_of[x] = f"class#{k}"
    quot = FinSet(f"class#{k}" for k in range(len(ordered)))
    return quot, FinMap(carrier, quot, label_of)


def pushout(f: FinMap, g: FinMap) -> tuple[FinSet, FinMap, FinMap]:
    """Pushout of ``f`` and ``g`` along their common source."""
    if f.source != g.source:
        raise InputError("pushout: maps do not share a source")
    union, inl, inr = disjoint_union_sets(f.target, g.target)
    relation = [(inl(f(x)), inr(g(x))) for x in f.source]
    apex, proj = quotient(union, relation)
    return apex, inl.then(proj), inr.then(proj)


class Span:
    """Two maps out of a shared apex: ``left.source == right.source``."""

    __slots__ = ("left", "right")

    def __init__(self, left: FinMap, right: FinMap) -> None:
        if left.source != right.source:
            raise InputError("span legs do not share an apex")
        self.left = left
        self.right = right

    @property
    def apex(self) -> FinSet:
        return self.left.source

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Span) and self.left == other.left and self.right == other.right

    def __repr__(self) -> str:
        return f"Span({self.left.target!r} <- {self.apex!r} -> {self.right.target!r})"


def identity_span(a: FinSet) -> Span:
    return Span(identity(a), identity(a))


def compose_spans(s: Span, t: Span) -> Span:
    """Horizontal composite, with the chosen-pullback apex."""
    if s.right.target != t.left.target:
        raise InputError("spans are not composable")
    _, to_s, to_t = pullback(s.right, t.left)
    return Span(to_s.then(s.left), to_t.then(t.right))


def span_isomorphism(s: Span, t: Span) -> Optional[FinMap]:
    """A bijection of apexes commuting with both legs, or None.

    Elements are matched by their pair of leg values; within one class any
    pairing commutes, so the search reduces to comparing class sizes.
    """
    if s.left.target != t.left.target or s.right.target != t.right.target:
        return None

    def classify(sp: Span) -> dict[tuple[str, str], list[str]]:
        out: dict[tuple[str, str], list[str]] = {}
        for x in sp.apex:
            out.setdefault((sp.left(x), sp.right(x)), []).append(x)
        return out

    cs, ct = classify(s), classify(t)
    if set(cs) != set(ct):
        return None
    assignment = {}
    for key, members in cs.items():
        if len(members) != len(ct[key]):
            return None
        for x, y in zip(members, ct[key]):
            assignment[x] = y
    return FinMap(s.apex, t.apex, assignment)


def spans_isomorphic(s: Span, t: Span) -> bool:
    return span_isomorphism(s, t) is not None


def all_maps(a: FinSet, b: FinSet) -> Iterator[FinMap]:
    """Every total map a -> b, in deterministic order."""
    if len(a) == 0:
        yield FinMap(a, b, {})
        return
    if len(b) == 0:
        return
    import itertools

    for values in itertools.product(b.elements, repeat=len(a)):
        yield FinMap(a, b, dict(zip(a.elements, values)))


def restrict_map(f: FinMap, sub: FinSet) -> FinMap:
    """Restriction of ``f`` to a subset of its source."""
    for x in sub:
        if x not in f.source:
            raise InputError(f"{x!r} not in the source of the map")
    return FinMap(sub, f.target, {x: f(x) for x in sub})


def relabel(a: FinSet, fn: Callable[[str], str]) -> tuple[FinSet, FinMap]:
    """Apply a label transformation, returning the new set and the bijection onto it."""
    new = FinSet(fn(x) for x in a)
    return new, FinMap(a, new, {x: fn(x) for x in a})
