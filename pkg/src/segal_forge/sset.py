"""Truncated, level-wise finite simplicial sets.

An :class:`SSet` stores explicit simplex sets for levels 0..dim together
with all face and degeneracy maps; the simplicial identities are checked
on construction, so every value of this type is genuinely simplicial.
Degenerate simplices are stored explicitly.

A simplicial object in finite sets is the same data read contravariantly;
:data:`SimplicialObject` is an alias making that reading explicit.

Label conventions: standard-simplex simplices are vertex tuples joined
with ``|`` (so the nerve of the linear order [n] *is* the standard
n-simplex on the nose); copower summands are tagged ``s:label``; colimit
classes follow the ``class#k`` convention of :mod:`segal_forge.finset`.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterable, Mapping, Sequence

from .errors import InputError, TruncationError
from .finset import FinMap, FinSet, identity, quotient
from .posets import FinCat, FinPoset


class SSet:
    """A simplicial set truncated at level ``dim``."""

    __slots__ = ("dim", "levels", "faces", "degens", "_nondeg", "_ez", "_face_index")

    def __init__(
        self,
        dim: int,
        levels: Sequence[FinSet],
        faces: Mapping[tuple[int, int], FinMap],
        degens: Mapping[tuple[int, int], FinMap],
    ) -> None:
        if dim < 0:
            raise InputError("truncation level must be >= 0")
        if len(levels) != dim + 1:
            raise InputError(f"expected {dim + 1} levels, got {len(levels)}")
        self.dim = dim
        self.levels = tuple(levels)
        self.faces = dict(faces)
        self.degens = dict(degens)
        self._validate_shapes()
        self._validate_identities()
        self._nondeg: dict[int, tuple[str, ...]] = {}
        self._ez: dict[tuple[int, str], tuple[tuple[int, ...], int, str]] = {}
        self._face_index: dict[tuple[int, int], dict[str, tuple[str, ...]]] = {}

    # -- structure access ---------------------------------------------------

    def level(self, m: int) -> FinSet:
        if not 0 <= m <= self.dim:
            raise TruncationError(m, self.dim)
        return self.levels[m]

    def face(self, m: int, i: int) -> FinMap:
        return self.faces[(m, i)]

    def degen(self, m: int, i: int) -> FinMap:
        return self.degens[(m, i)]

    def d(self, i: int, m: int, x: str) -> str:
        return self.faces[(m, i)](x)

    def s(self, i: int, m: int, x: str) -> str:
        return self.degens[(m, i)](x)

    # -- validation ---------------------------------------------------------

    def _validate_shapes(self) -> None:
        for m in range(1, self.dim + 1):
            for i in range(m + 1):
                f = self.faces.get((m, i))
                if f is None or f.source != self.levels[m] or f.target != self.levels[m - 1]:
                    raise InputError(f"missing or ill-typed face ({m}, {i})")
        for m in range(self.dim):
            for i in range(m + 1):
                s = self.degens.get((m, i))
                if s is None or s.source != self.levels[m] or s.target != self.levels[m + 1]:
                    raise InputError(f"missing or ill-typed degeneracy ({m}, {i})")
        for key in self.faces:
            m, i = key
            if not (1 <= m <= self.dim and 0 <= i <= m):
                raise InputError(f"face index {key} out of range")
        for key in self.degens:
            m, i = key
            if not (0 <= m < self.dim and 0 <= i <= m):
                raise InputError(f"degeneracy index {key} out of range")

    def _validate_identities(self) -> None:
        for m in range(2, self.dim + 1):
            for j in range(m + 1):
                for i in range(j):
                    lhs = self.faces[(m, j)].then(self.faces[(m - 1, i)])
                    rhs = self.faces[(m, i)].then(self.faces[(m - 1, j - 1)])
                    if lhs != rhs:
                        raise InputError(f"face identity fails at level {m}, (i, j)=({i}, {j})")
        for m in range(self.dim - 1):
            for j in range(m + 1):
                for i in range(j + 1):
                    lhs = self.degens[(m, j)].then(self.degens[(m + 1, i)])
                    rhs = self.degens[(m, i)].then(self.degens[(m + 1, j + 1)])
                    if lhs != rhs:
                        raise InputError(f"degeneracy identity fails at level {m}, (i, j)=({i}, {j})")
        for m in range(self.dim):
            for j in range(m + 1):
                sj = self.degens[(m, j)]
                for i in range(m + 2):
                    through = sj.then(self.faces[(m + 1, i)])
                    if i == j or i == j + 1:
                        if through != identity(self.levels[m]):
                            raise InputError(f"mixed identity (unit) fails at level {m}, i={i}, j={j}")
                    elif i < j:
                        if m == 0:
                            continue
                        if through != self.faces[(m, i)].then(self.degens[(m - 1, j - 1)]):
                            raise InputError(f"mixed identity fails at level {m}, i={i}, j={j}")
                    else:
                        if m == 0:
                            continue
                        if through != self.faces[(m, i - 1)].then(self.degens[(m - 1, j)]):
                            raise InputError(f"mixed identity fails at level {m}, i={i}, j={j}")

    # -- degeneracy bookkeeping ----------------------------------------------

    def is_degenerate(self, m: int, x: str) -> bool:
        if m == 0:
            return False
        for j in range(m):
            sj = self.degens[(m - 1, j)]
            dj = self.faces[(m, j)]
            if sj(dj(x)) == x:
                return True
        return False

    def nondegenerate(self, m: int) -> tuple[str, ...]:
        if m not in self._nondeg:
            self._nondeg[m] = tuple(x for x in self.levels[m] if not self.is_degenerate(m, x))
        return self._nondeg[m]

    def max_nondegenerate_dim(self) -> int:
        out = 0
        for m in range(self.dim + 1):
            if self.nondegenerate(m):
                out = m
        return out

    def eilenberg_zilber(self, m: int, x: str) -> tuple[tuple[int, ...], int, str]:
        """Express x as s_{w[0]} s_{w[1]} ... applied to a nondegenerate simplex.

        Returns (word, base_level, base_label); the word is the outermost
        degeneracy first.  The base is unique; the word is one valid choice.
        """
        key = (m, x)
        if key not in self._ez:
            if not self.is_degenerate(m, x):
                self._ez[key] = ((), m, x)
            else:
                j = next(
                    j
                    for j in range(m)
                    if self.degens[(m - 1, j)](self.faces[(m, j)](x)) == x
                )
                word, bl, bx = self.eilenberg_zilber(m - 1, self.faces[(m, j)](x))
                self._ez[key] = ((j,) + word, bl, bx)
        return self._ez[key]

    def apply_degeneracy_word(self, word: Sequence[int], base_level: int, x: str) -> str:
        """Apply s_{word[-1]} first, ..., s_{word[0]} last, starting at base_level."""
        out = x
        lvl = base_level
        for j in reversed(tuple(word)):
            out = self.degens[(lvl, j)](out)
            lvl += 1
        return out

    def face_index(self, m: int, i: int) -> dict[str, tuple[str, ...]]:
        """Elements of level ``m`` grouped by their i-th face."""
        key = (m, i)
        if key not in self._face_index:
            grouped: dict[str, list[str]] = {}
            fm = self.faces[(m, i)]
            for lbl in self.levels[m]:
                grouped.setdefault(fm(lbl), []).append(lbl)
            self._face_index[key] = {k: tuple(v) for k, v in grouped.items()}
        return self._face_index[key]

    # -- comparisons ----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SSet)
            and self.dim == other.dim
            and self.levels == other.levels
            and self.faces == other.faces
            and self.degens == other.degens
        )

    def __repr__(self) -> str:
        sizes = [len(l) for l in self.levels]
        return f"SSet(dim={self.dim}, level_sizes={sizes})"


SimplicialObject = SSet


class SSetMap:
    """A level-wise map commuting with all faces and degeneracies."""

    __slots__ = ("source", "target", "levels")

    def __init__(self, source: SSet, target: SSet, levels: Sequence[FinMap]) -> None:
        if source.dim != target.dim:
            raise InputError("simplicial maps need a common truncation level")
        if len(levels) != source.dim + 1:
            raise InputError("need one component per level")
        for m, comp in enumerate(levels):
            if comp.source != source.levels[m] or comp.target != target.levels[m]:
                raise InputError(f"component {m} has the wrong source or target")
        for m in range(1, source.dim + 1):
            for i in range(m + 1):
                if levels[m].then(target.faces[(m, i)]) != source.faces[(m, i)].then(levels[m - 1]):
                    raise InputError(f"map does not commute with face ({m}, {i})")
        for m in range(source.dim):
            for i in range(m + 1):
                if levels[m].then(target.degens[(m, i)]) != source.degens[(m, i)].then(levels[m + 1]):
                    raise InputError(f"map does not commute with degeneracy ({m}, {i})")
        self.source = source
        self.target = target
        self.levels = tuple(levels)

    def __call__(self, m: int, x: str) -> str:
        return self.levels[m](x)

    def then(self, other: "SSetMap") -> "SSetMap":
        if self.target != other.source:
            raise InputError("simplicial maps are not composable")
        return SSetMap(self.source, other.target, [a.then(b) for a, b in zip(self.levels, other.levels)])

    def is_isomorphism(self) -> bool:
        return all(len(c.image()) == len(c.source) == len(c.target) for c in self.levels)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SSetMap)
            and self.source == other.source
            and self.target == other.target
            and self.levels == other.levels
        )

    def __repr__(self) -> str:
        return f"SSetMap({self.source!r} -> {self.target!r})"


def identity_sset_map(x: SSet) -> SSetMap:
    return SSetMap(x, x, [identity(x.levels[m]) for m in range(x.dim + 1)])


# ---------------------------------------------------------------------------
# standard simplices
# ---------------------------------------------------------------------------


def tuple_label(vs: Sequence[int]) -> str:
    return "|".join(str(v) for v in vs)


def label_tuple(label: str) -> tuple[int, ...]:
    return tuple(int(v) for v in label.split("|"))


def _monotone_tuples(length: int, top: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations_with_replacement(range(top + 1), length))


def standard_simplex(n: int, dim: int) -> SSet:
    """The standard n-simplex: level m holds the monotone (m+1)-tuples in [n]."""
    if n < 0:
        raise InputError("simplex dimension must be >= 0")
    levels = [FinSet(tuple_label(t) for t in _monotone_tuples(m + 1, n)) for m in range(dim + 1)]
    faces = {}
    degens = {}
    for m in range(1, dim + 1):
        for i in range(m + 1):
            faces[(m, i)] = FinMap(
                levels[m],
                levels[m - 1],
                {
                    tuple_label(t): tuple_label(t[:i] + t[i + 1 :])
                    for t in _monotone_tuples(m + 1, n)
                },
            )
    for m in range(dim):
        for i in range(m + 1):
            degens[(m, i)] = FinMap(
                levels[m],
                levels[m + 1],
                {
                    tuple_label(t): tuple_label(t[: i + 1] + t[i:])
                    for t in _monotone_tuples(m + 1, n)
                },
            )
    return SSet(dim, levels, faces, degens)


def empty_sset(dim: int) -> SSet:
    empty = FinSet(())
    levels = [empty] * (dim + 1)
    faces = {(m, i): FinMap(empty, empty, {}) for m in range(1, dim + 1) for i in range(m + 1)}
    degens = {(m, i): FinMap(empty, empty, {}) for m in range(dim) for i in range(m + 1)}
    return SSet(dim, levels, faces, degens)


def vertex_map(g: Sequence[int], n_target: int, dim: int) -> SSetMap:
    """The simplicial map of standard simplices induced on vertices by ``g``.

    ``g`` is a weakly increasing array [a] -> [n_target]; the map sends a
    monotone tuple to its image tuple.
    """
    g = tuple(int(v) for v in g)
    for u, v in zip(g, g[1:]):
        if u > v:
            raise InputError("vertex map must be weakly increasing")
    if g and not (0 <= g[0] and g[-1] <= n_target):
        raise InputError("vertex map lands outside the target")
    src = standard_simplex(len(g) - 1, dim)
    tgt = standard_simplex(n_target, dim)
    comps = []
    for m in range(dim + 1):
        comps.append(
            FinMap(
                src.levels[m],
                tgt.levels[m],
                {lbl: tuple_label(tuple(g[v] for v in label_tuple(lbl))) for lbl in src.levels[m]},
            )
        )
    return SSetMap(src, tgt, comps)


def full_subcomplex(x: SSet, keep: Callable[[int, str], bool]) -> tuple[SSet, SSetMap]:
    """The subcomplex of simplices satisfying ``keep``, with its inclusion.

    ``keep`` must be closed under faces and degeneracies; this is verified
    during construction.
    """
    levels = [FinSet(lbl for lbl in x.levels[m] if keep(m, lbl)) for m in range(x.dim + 1)]
    faces = {}
    degens = {}
    for m in range(1, x.dim + 1):
        for i in range(m + 1):
            faces[(m, i)] = FinMap(
                levels[m], levels[m - 1], {lbl: x.faces[(m, i)](lbl) for lbl in levels[m]}
            )
    for m in range(x.dim):
        for i in range(m + 1):
            degens[(m, i)] = FinMap(
                levels[m], levels[m + 1], {lbl: x.degens[(m, i)](lbl) for lbl in levels[m]}
            )
    sub = SSet(x.dim, levels, faces, degens)
    incl = SSetMap(sub, x, [FinMap(levels[m], x.levels[m], {l: l for l in levels[m]}) for m in range(x.dim + 1)])
    return sub, incl


def boundary_simplex(n: int, dim: int) -> tuple[SSet, SSetMap]:
    """The boundary of the standard n-simplex (simplices missing a vertex)."""
    delta = standard_simplex(n, dim)
    full = set(range(n + 1))
    return full_subcomplex(delta, lambda m, lbl: set(label_tuple(lbl)) != full)


def spine_subcomplex(n: int, dim: int) -> tuple[SSet, SSetMap]:
    """The chain of edges (i, i+1) inside the standard n-simplex."""
    delta = standard_simplex(n, dim)

    def keep(m: int, lbl: str) -> bool:
        vs = set(label_tuple(lbl))
        return any(vs <= {i, i + 1} for i in range(n)) or len(vs) == 1

    return full_subcomplex(delta, keep)


# ---------------------------------------------------------------------------
# nerves
# ---------------------------------------------------------------------------


def nerve(d: "FinPoset | FinCat", dim: int) -> SSet:
    """The nerve, truncated at ``dim``.

    Poset chains are labelled by their vertex tuples joined with ``|``;
    category chains by their arrow tuples joined with ``;``.
    """
    if isinstance(d, FinPoset):
        return _nerve_poset(d, dim)
    if isinstance(d, FinCat):
        return _nerve_cat(d, dim)
    raise InputError(f"cannot take the nerve of {d!r}")


def _nerve_poset(p: FinPoset, dim: int) -> SSet:
    chains: list[list[tuple[str, ...]]] = [[(x,) for x in p.elements]]
    for m in range(1, dim + 1):
        nxt = []
        for c in chains[m - 1]:
            last = c[-1]
            for y in p.elements:
                if p.leq(last, y):
                    nxt.append(c + (y,))
        chains.append(nxt)
    levels = [FinSet("|".join(c) for c in chains[m]) for m in range(dim + 1)]
    faces = {}
    degens = {}
    for m in range(1, dim + 1):
        for i in range(m + 1):
            faces[(m, i)] = FinMap(
                levels[m],
                levels[m - 1],
                {"|".join(c): "|".join(c[:i] + c[i + 1 :]) for c in chains[m]},
            )
    for m in range(dim):
        for i in range(m + 1):
            degens[(m, i)] = FinMap(
                levels[m],
                levels[m + 1],
                {"|".join(c): "|".join(c[: i + 1] + c[i:]) for c in chains[m]},
            )
    return SSet(dim, levels, faces, degens)


def _nerve_cat(c: FinCat, dim: int) -> SSet:
    chains: list[list[tuple[str, ...]]] = [[(x,) for x in c.objects]]
    labels: list[list[str]] = [[x for x in c.objects]]
    for m in range(1, dim + 1):
        nxt = []
        lbls = []
        if m == 1:
            for f in c.arrows:
                nxt.append((f,))
                lbls.append(f)
        else:
            for prev in chains[m - 1]:
                last = prev[-1]
                for f in c.arrows:
                    if c.src[f] == c.tgt[last]:
                        nxt.append(prev + (f,))
                        lbls.append(";".join(prev + (f,)))
        chains.append(nxt)
        labels.append(lbls)
    levels = [FinSet(labels[m]) for m in range(dim + 1)]

    def chain_label(m: int, chain: tuple[str, ...]) -> str:
        return ";".join(chain) if m >= 1 else chain[0]

    def face_of(m: int, chain: tuple[str, ...], i: int) -> tuple[str, ...]:
        if m == 1:
            return (c.tgt[chain[0]],) if i == 0 else (c.src[chain[0]],)
        if i == 0:
            return chain[1:]
        if i == m:
            return chain[:-1]
        return chain[: i - 1] + (c.compose(chain[i - 1], chain[i]),) + chain[i + 1 :]

    def degen_of(m: int, chain: tuple[str, ...], i: int) -> tuple[str, ...]:
        if m == 0:
            return (c.ident[chain[0]],)
        if i == 0:
            return (c.ident[c.src[chain[0]]],) + chain
        return chain[:i] + (c.ident[c.tgt[chain[i - 1]]],) + chain[i:]

    faces = {}
    degens = {}
    for m in range(1, dim + 1):
        for i in range(m + 1):
            faces[(m, i)] = FinMap(
                levels[m],
                levels[m - 1],
                {chain_label(m, ch): chain_label(m - 1, face_of(m, ch, i)) for ch in chains[m]},
            )
    for m in range(dim):
        for i in range(m + 1):
            degens[(m, i)] = FinMap(
                levels[m],
                levels[m + 1],
                {chain_label(m, ch): chain_label(m + 1, degen_of(m, ch, i)) for ch in chains[m]},
            )
    return SSet(dim, levels, faces, degens)


# ---------------------------------------------------------------------------
# colimits
# ---------------------------------------------------------------------------


def copower(s: FinSet, k: SSet) -> tuple[SSet, dict[str, SSetMap]]:
    """The coproduct of one copy of ``k`` per element of ``s``; labels ``s:label``.

    Also returns the coprojection of each summand.
    """
    levels = [FinSet(f"{t}:{lbl}" for t in s for lbl in k.levels[m]) for m in range(k.dim + 1)]

    def lift(m: int, f: FinMap, shift: int) -> FinMap:
        return FinMap(
            levels[m],
            levels[m + shift],
            {
                f"{t}:{lbl}": f"{t}:{f(lbl)}"
                for t in s
                for lbl in k.levels[m]
            },
        )

    faces = {(m, i): lift(m, k.faces[(m, i)], -1) for m in range(1, k.dim + 1) for i in range(m + 1)}
    degens = {(m, i): lift(m, k.degens[(m, i)], +1) for m in range(k.dim) for i in range(m + 1)}
    total = SSet(k.dim, levels, faces, degens)
    injections = {}
    for t in s:
        injections[t] = SSetMap(
            k,
            total,
            [
                FinMap(k.levels[m], levels[m], {lbl: f"{t}:{lbl}" for lbl in k.levels[m]})
                for m in range(k.dim + 1)
            ],
        )
    return total, injections


def colimit(objects: Sequence[SSet], edges: Sequence[tuple[int, int, SSetMap]]) -> tuple[SSet, list[SSetMap]]:
    """Level-wise colimit of a finite diagram of simplicial sets.

    ``edges`` are (source index, target index, map) triples; all objects
    must share a truncation level.  Returns the colimit and the cocone.
    """
    if not objects:
        raise InputError("colimit of the empty diagram is the empty simplicial set; build it directly")
    dim = objects[0].dim
    for x in objects:
        if x.dim != dim:
            raise InputError("all objects must share a truncation level")
    for a, b, h in edges:
        if not (0 <= a < len(objects) and 0 <= b < len(objects)):
            raise InputError("edge endpoints out of range")
        if h.source != objects[a] or h.target != objects[b]:
            raise InputError("edge map endpoints do not match the diagram")

    tagged_levels = []
    projections = []
    for m in range(dim + 1):
        carrier = FinSet(f"{i}:{lbl}" for i, x in enumerate(objects) for lbl in x.levels[m])
        pairs = [
            (f"{a}:{lbl}", f"{b}:{h(m, lbl)}")
            for a, b, h in edges
            for lbl in objects[a].levels[m]
        ]
        quot, proj = quotient(carrier, pairs)
        tagged_levels.append(quot)
        projections.append(proj)

    def induced(m: int, pick: Callable[[int, int, str], str], shift: int) -> FinMap:
        assignment = {}
        for i, x in enumerate(objects):
            for lbl in x.levels[m]:
                cls = projections[m](f"{i}:{lbl}")
                value = projections[m + shift](f"{i}:{pick(i, m, lbl)}")
                if cls in assignment and assignment[cls] != value:
                    raise InputError("diagram maps do not commute; no induced structure map")
                assignment[cls] = value
        return FinMap(tagged_levels[m], tagged_levels[m + shift], assignment)

    faces = {
        (m, i): induced(m, lambda idx, mm, lbl, i=i: objects[idx].faces[(mm, i)](lbl), -1)
        for m in range(1, dim + 1)
        for i in range(m + 1)
    }
    degens = {
        (m, i): induced(m, lambda idx, mm, lbl, i=i: objects[idx].degens[(mm, i)](lbl), +1)
        for m in range(dim)
        for i in range(m + 1)
    }
    total = SSet(dim, tagged_levels, faces, degens)
    cocone = []
    for i, x in enumerate(objects):
        cocone.append(
            SSetMap(
                x,
                total,
                [
                    FinMap(
                        x.levels[m],
                        tagged_levels[m],
                        {lbl: projections[m](f"{i}:{lbl}") for lbl in x.levels[m]},
                    )
                    for m in range(dim + 1)
                ],
            )
        )
    return total, cocone


def pushout_sset(f: SSetMap, g: SSetMap) -> tuple[SSet, SSetMap, SSetMap]:
    """Pushout of f: A -> X and g: A -> Y; returns (P, X -> P, Y -> P)."""
    if f.source != g.source:
        raise InputError("pushout legs do not share a source")
    total, cocone = colimit([f.target, g.target, f.source], [(2, 0, f), (2, 1, g)])
    return total, cocone[0], cocone[1]


def coproduct_sset(objects: Sequence[SSet]) -> tuple[SSet, list[SSetMap]]:
    if not objects:
        raise InputError("use empty_sset for the empty coproduct")
    return colimit(objects, [])


def induced_from_colimit(
    total: SSet, cocone: Sequence[SSetMap], target: SSet, legs: Sequence[SSetMap]
) -> SSetMap:
    """The map out of a colimit determined by a commuting family of legs."""
    if len(cocone) != len(legs):
        raise InputError("need one leg per object of the diagram")
    comps = []
    for m in range(total.dim + 1):
        assignment: dict[str, str] = {}
        for inj, leg in zip(cocone, legs):
            if leg.target != target:
                raise InputError("legs must land in the stated target")
            for lbl in inj.source.levels[m]:
                cls = inj(m, lbl)
                val = leg(m, lbl)
                if cls in assignment and assignment[cls] != val:
                    raise InputError("legs do not agree on identified simplices")
                assignment[cls] = val
        comps.append(FinMap(total.levels[m], target.levels[m], assignment))
    return SSetMap(total, target, comps)


def truncate(x: SSet, dim: int) -> SSet:
    """Forget levels above ``dim``."""
    if dim > x.dim:
        raise TruncationError(dim, x.dim, "truncate")
    faces = {(m, i): x.faces[(m, i)] for m in range(1, dim + 1) for i in range(m + 1)}
    degens = {(m, i): x.degens[(m, i)] for m in range(dim) for i in range(m + 1)}
    return SSet(dim, x.levels[: dim + 1], faces, degens)


def _surjection_label(surj: Sequence[int], base: str) -> str:
    return ",".join(str(v) for v in surj) + "!" + base


def _epi_mono(arr: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Factor a monotone array as a surjection followed by an injection."""
    image = sorted(set(arr))
    position = {v: i for i, v in enumerate(image)}
    return tuple(position[v] for v in arr), tuple(image)


def free_degeneracy_extension(x: SSet, dim: int) -> SSet:
    """Extend a truncated simplicial set upward by formal degeneracies only.

    New simplices above the stored truncation are pairs of a nondegenerate
    base with a monotone surjection onto its level (so the result is the
    skeleton generated by the stored levels), labelled ``"j0,...,jm!base"``.
    """
    if dim < x.dim:
        raise InputError("free extension cannot lower the truncation")
    if dim == x.dim:
        return x

    k = x.dim

    def normalize(m: int, lbl: str) -> tuple[str, int, tuple[int, ...]]:
        """Base label, base level, and the surjection of a stored simplex."""
        word, base_level, base = x.eilenberg_zilber(m, lbl)
        surj = tuple(range(base_level + 1))
        level = base_level
        for j in reversed(word):
            # applying s_j corresponds to precomposing with the j-th collapse
            collapse = tuple(list(range(j + 1)) + list(range(j, level + 1)))
            surj = tuple(surj[v] for v in collapse)
            level += 1
        return base, base_level, surj

    def pair_of(m: int, lbl: str) -> tuple[str, int, tuple[int, ...]]:
        if m <= k:
            return normalize(m, lbl)
        head, base = lbl.split("!", 1)
        surj = tuple(int(v) for v in head.split(","))
        base_level = max(surj)
        return base, base_level, surj

    def label_of(m: int, base: str, base_level: int, surj: Sequence[int]) -> str:
        if m <= k:
            return x.apply_degeneracy_word(_word_of_surjection(surj), base_level, base)
        return _surjection_label(surj, base)

    def act(m: int, lbl: str, operator: Sequence[int], new_level: int) -> str:
        """Apply a monotone operator [new_level] -> [m] to a simplex of level m."""
        base, base_level, surj = pair_of(m, lbl)
        composite = tuple(surj[v] for v in operator)
        epi, mono = _epi_mono(composite)
        if len(mono) == base_level + 1:
            return label_of(new_level, base, base_level, composite)
        restricted = simplicial_operator(x, mono, base_level)(base)
        base2, base2_level, inner = normalize(len(mono) - 1, restricted)
        final = tuple(inner[v] for v in epi)
        return label_of(new_level, base2, base2_level, final)

    levels = list(x.levels)
    pairs_by_level: dict[int, list[tuple[str, int, tuple[int, ...]]]] = {}
    for m in range(k + 1, dim + 1):
        entries = []
        for base_level in range(0, k + 1):
            for base in x.nondegenerate(base_level):
                for surj in _surjections(m, base_level):
                    entries.append((base, base_level, surj))
        pairs_by_level[m] = entries
        levels.append(FinSet(_surjection_label(surj, base) for (base, base_level, surj) in entries))

    faces = dict(x.faces)
    degens = dict(x.degens)
    for m in range(k + 1, dim + 1):
        for i in range(m + 1):
            delta = tuple(v for v in range(m + 1) if v != i)
            faces[(m, i)] = FinMap(
                levels[m],
                levels[m - 1],
                {
                    _surjection_label(surj, base): act(
                        m, _surjection_label(surj, base), delta, m - 1
                    )
                    for (base, base_level, surj) in pairs_by_level[m]
                },
            )
    for m in range(k, dim):
        for i in range(m + 1):
            sigma = tuple(list(range(i + 1)) + list(range(i, m + 1)))
            degens[(m, i)] = FinMap(
                levels[m],
                levels[m + 1],
                {lbl: act(m, lbl, sigma, m + 1) for lbl in levels[m]},
            )
    return SSet(dim, levels, faces, degens)


def _word_of_surjection(surj: Sequence[int]) -> tuple[int, ...]:
    """A degeneracy word realising a monotone surjection (outermost first)."""
    arr = tuple(surj)
    word = []
    while len(arr) > len(set(arr)):
        j = next(v for v in range(len(arr) - 1) if arr[v] == arr[v + 1])
        word.append(j)
        arr = arr[:j] + arr[j + 1 :]
    return tuple(word)


def _surjections(m: int, r: int):
    """All monotone surjections [m] -> [r]."""
    if r > m:
        return
    for cut in itertools.combinations(range(1, m + 1), r):
        out = []
        value = 0
        positions = set(cut)
        for v in range(m + 1):
            if v in positions:
                value += 1
            out.append(value)
        yield tuple(out)


# ---------------------------------------------------------------------------
# simplicial operators
# ---------------------------------------------------------------------------


def simplicial_operator(x: SSet, gamma: Sequence[int], target_level: int) -> FinMap:
    """The action of a monotone map [p] -> [target_level] on ``x``.

    Returns the restriction map level(target_level) -> level(p), built by
    factoring ``gamma`` into elementary faces and degeneracies.
    """
    gamma = tuple(int(v) for v in gamma)
    p = len(gamma) - 1
    q = target_level
    if p < 0:
        raise InputError("gamma must be nonempty")
    for a, b in zip(gamma, gamma[1:]):
        if a > b:
            raise InputError("gamma must be weakly increasing")
    if gamma and not (0 <= gamma[0] and gamma[-1] <= q):
        raise InputError("gamma lands outside the target")
    if q > x.dim or p > x.dim:
        raise TruncationError(max(p, q), x.dim)

    image = set(gamma)
    missing = [i for i in range(q + 1) if i not in image]
    if missing:
        i = missing[0]
        reduced = tuple(v if v < i else v - 1 for v in gamma)
        return x.faces[(q, i)].then(simplicial_operator(x, reduced, q - 1))
    for j in range(p):
        if gamma[j] == gamma[j + 1]:
            reduced = gamma[: j + 1] + gamma[j + 2 :]
            return simplicial_operator(x, reduced, q).then(x.degens[(p - 1, j)])
    return identity(x.levels[q])
