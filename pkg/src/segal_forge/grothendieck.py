"""Chains of simplicial operators and their Grothendieck posets.

A :class:`DeltaChain` is a string of weakly monotone maps

    [n_k] -> [n_{k-1}] -> ... -> [n_0]

read as a k-simplex of (the nerve of) the opposite simplex category.  Its
Grothendieck poset glues the linear orders [n_b] along the maps; the
fiber-direction sub-poset and the narrow-interval sub-poset of its twisted
arrows carve out exactly the data consumed by the lax-structure builder.

Grid-point labels are ``"(a,b)"`` where ``b`` is the level and ``a`` the
position inside [n_b].
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import InputError
from .posets import (
    FinPoset,
    PosetFunctor,
    chain_poset,
    interval_label,
    twisted_arrow_poset,
    twisted_interval,
)


def _check_monotone(arr: Sequence[int], lo: int, hi: int) -> None:
    for v in arr:
        if not lo <= v <= hi:
            raise InputError(f"value {v} outside [{lo}, {hi}]")
    for a, b in zip(arr, arr[1:]):
        if a > b:
            raise InputError(f"array {list(arr)!r} is not weakly increasing")


class DeltaChain:
    """A composable string of monotone maps between finite linear orders.

    ``levels[b]`` is n_b; ``steps[b]`` is the map [n_{b+1}] -> [n_b] as an
    integer array of length n_{b+1} + 1.
    """

    __slots__ = ("levels", "steps")

    def __init__(self, levels: Sequence[int], steps: Sequence[Sequence[int]] = ()) -> None:
        levels = tuple(int(n) for n in levels)
        steps = tuple(tuple(int(v) for v in s) for s in steps)
        if not levels:
            raise InputError("a chain needs at least one level")
        if any(n < 0 for n in levels):
            raise InputError("levels must be >= 0")
        if len(steps) != len(levels) - 1:
            raise InputError("need exactly one step map between consecutive levels")
        for b, step in enumerate(steps):
            if len(step) != levels[b + 1] + 1:
                raise InputError(f"step {b} has length {len(step)}, expected {levels[b + 1] + 1}")
            _check_monotone(step, 0, levels[b])
        self.levels = levels
        self.steps = steps

    @property
    def k(self) -> int:
        """Simplex dimension: the number of step maps."""
        return len(self.steps)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, DeltaChain) and self.levels == other.levels and self.steps == other.steps

    def __repr__(self) -> str:
        return f"DeltaChain(levels={list(self.levels)}, steps={[list(s) for s in self.steps]})"

    def operator(self, b: int, b_prime: int) -> tuple[int, ...]:
        """The composite map [n_b] -> [n_b'] for b' <= b, as an array."""
        if not 0 <= b_prime <= b <= self.k:
            raise InputError(f"no operator from level {b} to level {b_prime}")
        arr = tuple(range(self.levels[b] + 1))
        for lvl in range(b - 1, b_prime - 1, -1):
            step = self.steps[lvl]
            arr = tuple(step[v] for v in arr)
        return arr

    def at(self, b: int, b_prime: int, a: int) -> int:
        return self.operator(b, b_prime)[a]


def constant_chain(n: int, k: int) -> DeltaChain:
    """The chain that is [n] at every one of k+1 levels, with identity steps."""
    ident = tuple(range(n + 1))
    return DeltaChain([n] * (k + 1), [ident] * k)


def active_binary_chain(n: int) -> DeltaChain:
    """[n] covered by the endpoint-preserving map from [1]: one level of [n] under [1]."""
    if n < 0:
        raise InputError("n must be >= 0")
    return DeltaChain([n, 1], [(0, n)])


def reindex_chain(phi: DeltaChain, gamma: Sequence[int]) -> DeltaChain:
    """Restrict a chain along a weakly increasing map of level indices."""
    gamma = tuple(int(v) for v in gamma)
    if not gamma:
        raise InputError("gamma must be nonempty")
    _check_monotone(gamma, 0, phi.k)
    levels = [phi.levels[g] for g in gamma]
    steps = [phi.operator(gamma[i + 1], gamma[i]) for i in range(len(gamma) - 1)]
    return DeltaChain(levels, steps)


def grid_label(a: int, b: int) -> str:
    return f"({a},{b})"


def grid_point(label: str) -> tuple[int, int]:
    a, b = label[1:-1].split(",", 1)
    return int(a), int(b)


def grothendieck_poset(phi: DeltaChain) -> tuple[FinPoset, PosetFunctor]:
    """The glued poset of a chain, and its projection onto level zero.

    Points are (a, b) with b a level and a in [n_b]; (a, b) <= (a', b')
    when b' <= b and the operator to level b' sends a below a'.  The
    projection sends (a, b) to the image of a in [n_0].
    """
    points = [(a, b) for b in range(phi.k + 1) for a in range(phi.levels[b] + 1)]
    relation = []
    for a, b in points:
        for a2, b2 in points:
            if b2 <= b and phi.at(b, b2, a) <= a2:
                relation.append((grid_label(a, b), grid_label(a2, b2)))
    poset = FinPoset([grid_label(a, b) for (a, b) in points], relation)
    base = chain_poset(phi.levels[0])
    projection = PosetFunctor(
        poset, base, {grid_label(a, b): str(phi.at(b, 0, a)) for (a, b) in points}
    )
    return poset, projection


def vertical_subposet(phi: DeltaChain) -> FinPoset:
    """The wide sub-poset of fiber-direction relations (a,b) <= (op(a), b')."""
    poset, _ = grothendieck_poset(phi)
    relation = []
    for lbl in poset.elements:
        a, b = grid_point(lbl)
        for b2 in range(b + 1):
            relation.append((lbl, grid_label(phi.at(b, b2, a), b2)))
    return FinPoset(poset.elements, relation)


def wedge_subposet(phi: DeltaChain) -> FinPoset:
    """Narrow intervals of the glued poset, inside its twisted arrows.

    Keeps the intervals from (a,b) to (op(a'), b') with the level distance
    and the position distance |a' - a| both at most one.
    """
    poset, _ = grothendieck_poset(phi)
    tw = twisted_arrow_poset(poset)
    keep = []
    for lbl in tw.elements:
        lo, hi = twisted_interval(lbl)
        a, b = grid_point(lo)
        c, b2 = grid_point(hi)
        if abs(b - b2) > 1:
            continue
        op = phi.operator(b, b2)
        if any(op[a2] == c and abs(a2 - a) <= 1 for a2 in range(phi.levels[b] + 1)):
            keep.append(lbl)
    return tw.full_subposet(keep)


def reindex_levelwise(phi_prime: DeltaChain, phi: DeltaChain, eta: Sequence[Sequence[int]]) -> PosetFunctor:
    """Glued-poset functor of a level-wise natural family eta_b: [n'_b] -> [n_b]."""
    if phi_prime.k != phi.k:
        raise InputError("chains must have the same length")
    eta = tuple(tuple(int(v) for v in e) for e in eta)
    if len(eta) != phi.k + 1:
        raise InputError("need one component per level")
    for b in range(phi.k + 1):
        if len(eta[b]) != phi_prime.levels[b] + 1:
            raise InputError(f"component {b} has the wrong length")
        _check_monotone(eta[b], 0, phi.levels[b])
    for b in range(phi.k):
        for a in range(phi_prime.levels[b + 1] + 1):
            if phi.steps[b][eta[b + 1][a]] != eta[b][phi_prime.steps[b][a]]:
                raise InputError(f"family is not natural at level {b}, position {a}")
    source, _ = grothendieck_poset(phi_prime)
    target, _ = grothendieck_poset(phi)
    mapping = {
        lbl: grid_label(eta[grid_point(lbl)[1]][grid_point(lbl)[0]], grid_point(lbl)[1])
        for lbl in source.elements
    }
    return PosetFunctor(source, target, mapping)


def reindex_operator(phi: DeltaChain, gamma: Sequence[int]) -> PosetFunctor:
    """Glued-poset functor of a level reindexing: (a, b) maps to (a, gamma(b))."""
    gamma = tuple(int(v) for v in gamma)
    source, _ = grothendieck_poset(reindex_chain(phi, gamma))
    target, _ = grothendieck_poset(phi)
    mapping = {}
    for lbl in source.elements:
        a, b = grid_point(lbl)
        mapping[lbl] = grid_label(a, gamma[b])
    return PosetFunctor(source, target, mapping)


def cocone_component(phi: DeltaChain, j: int, b: int, a: int) -> str:
    """Image in the glued poset of position ``a`` at level ``j``, placed at level ``b`` <= j."""
    return grid_label(phi.at(j, b, a), b)


def generation_certificate(phi: DeltaChain) -> bool:
    """Check that the canonical cocone generates the glued poset.

    Joint surjectivity of the cocone components, plus: the order relation
    is the transitive closure of the images of the product-poset relations
    under every component.  A finite stand-in for the colimit description.
    """
    poset, _ = grothendieck_poset(phi)
    hit = set()
    generated: set[tuple[str, str]] = set()
    for j in range(phi.k + 1):
        for b in range(j + 1):
            for b2 in range(b + 1):
                for a in range(phi.levels[j] + 1):
                    for a2 in range(a, phi.levels[j] + 1):
                        lo = cocone_component(phi, j, b, a)
                        hi = cocone_component(phi, j, b2, a2)
                        generated.add((lo, hi))
                        hit.add(lo)
                        hit.add(hi)
    if hit != set(poset.elements):
        return False
    closure = dict()
    for x in poset.elements:
        closure[x] = {y for (a, y) in generated if a == x} | {x}
    changed = True
    while changed:
        changed = False
        for x in poset.elements:
            extra = set()
            for y in closure[x]:
                extra |= closure[y]
            if not extra <= closure[x]:
                closure[x] |= extra
                changed = True
    actual = {(a, b) for (a, b) in poset.pairs()}
    closed = {(x, y) for x in poset.elements for y in closure[x]}
    return actual == closed


def vertical_relations_collapse(phi: DeltaChain) -> bool:
    """Every fiber-direction relation projects to an identity at level zero."""
    _, projection = grothendieck_poset(phi)
    vert = vertical_subposet(phi)
    return all(projection(a) == projection(b) for (a, b) in vert.pairs())


def interval_obj(lo: tuple[int, int], hi: tuple[int, int]) -> str:
    """Label of a twisted-arrow object of a glued poset, from grid points."""
    return interval_label(grid_label(*lo), grid_label(*hi))
