"""Fixture constructions and seeded corpora for the checkers.

Everything here is deterministic given a seed.  The corpus mixes nerves
of small posets and categories (which pass every checker), random
gluings of standard simplices, and mutation fixtures made by gluing an
extra simplex onto an existing boundary sphere (which usually break the
conditions in interesting ways).
"""

from __future__ import annotations

import itertools
import random
from typing import Iterator, Optional

from .errors import InputError
from .evaluate import evaluate
from .finset import FinMap, FinSet
from .posets import FinCat, FinPoset, chain_poset, monoid_to_cat, poset_to_cat
from .segal import check_1segal, check_2segal_dk
from .sset import (
    SSet,
    SSetMap,
    boundary_simplex,
    colimit,
    free_degeneracy_extension,
    nerve,
    standard_simplex,
    truncate,
    vertex_map,
)

# ---------------------------------------------------------------------------
# posets and categories
# ---------------------------------------------------------------------------


def all_posets(max_size: int) -> list[FinPoset]:
    """All posets with 1..max_size elements, one representative per isomorphism class.

    Enumerates order relations compatible with a fixed linear extension
    and deduplicates by the minimal relation matrix over all relabelings.
    """
    out: list[FinPoset] = []
    for n in range(1, max_size + 1):
        seen: set[tuple] = set()
        above_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        for subset in itertools.product([False, True], repeat=len(above_pairs)):
            relation = {(i, i) for i in range(n)}
            for keep, (i, j) in zip(subset, above_pairs):
                if keep:
                    relation.add((i, j))
            closed = _transitive_closure(relation, n)
            canon = _canonical_relation(closed, n)
            if canon in seen:
                continue
            seen.add(canon)
            labels = [f"p{i}" for i in range(n)]
            out.append(
                FinPoset(labels, [(labels[i], labels[j]) for (i, j) in closed])
            )
    return out


def _transitive_closure(relation: set[tuple[int, int]], n: int) -> frozenset[tuple[int, int]]:
    rel = set(relation)
    changed = True
    while changed:
        changed = False
        for (a, b) in list(rel):
            for c in range(n):
                if (b, c) in rel and (a, c) not in rel:
                    rel.add((a, c))
                    changed = True
    return frozenset(rel)


def _canonical_relation(relation: frozenset[tuple[int, int]], n: int) -> tuple:
    best = None
    for perm in itertools.permutations(range(n)):
        image = tuple(sorted((perm[a], perm[b]) for (a, b) in relation))
        if best is None or image < best:
            best = image
    return best


def category_library() -> list[tuple[str, FinCat]]:
    """A small zoo of genuinely categorical (non-poset) examples."""
    z2 = monoid_to_cat(
        ["e", "g"],
        {("e", "e"): "e", ("e", "g"): "g", ("g", "e"): "g", ("g", "g"): "e"},
        "e",
    )
    z3_table = {}
    for a in range(3):
        for b in range(3):
            z3_table[(f"r{a}", f"r{b}")] = f"r{(a + b) % 3}"
    z3 = monoid_to_cat(["r0", "r1", "r2"], z3_table, "r0")
    idem = monoid_to_cat(
        ["e", "a"],
        {("e", "e"): "e", ("e", "a"): "a", ("a", "e"): "a", ("a", "a"): "a"},
        "e",
    )
    nil = monoid_to_cat(
        ["e", "a", "z"],
        {
            ("e", "e"): "e", ("e", "a"): "a", ("e", "z"): "z",
            ("a", "e"): "a", ("a", "a"): "z", ("a", "z"): "z",
            ("z", "e"): "z", ("z", "a"): "z", ("z", "z"): "z",
        },
        "e",
    )
    parallel = FinCat(
        ["x", "y"],
        ["idx", "idy", "f", "g"],
        {"idx": "x", "idy": "y", "f": "x", "g": "x"},
        {"idx": "x", "idy": "y", "f": "y", "g": "y"},
        {
            ("idx", "idx"): "idx",
            ("idy", "idy"): "idy",
            ("idx", "f"): "f", ("f", "idy"): "f",
            ("idx", "g"): "g", ("g", "idy"): "g",
        },
        {"x": "idx", "y": "idy"},
    )
    return [("z2", z2), ("z3", z3), ("idempotent", idem), ("nilpotent", nil), ("parallel", parallel)]


# ---------------------------------------------------------------------------
# named fixtures
# ---------------------------------------------------------------------------


def pillow_fixture(dim: int = 4) -> SSet:
    """A triangle doubled along its boundary: two parallel 2-cells, no filler."""
    triangle = standard_simplex(2, dim)
    boundary, inclusion = boundary_simplex(2, dim)
    total, _ = colimit([triangle, triangle, boundary], [(2, 0, inclusion), (2, 1, inclusion)])
    return total


def simplicial_circle(dim: int = 4) -> SSet:
    """The interval with both endpoints identified to one vertex."""
    interval = standard_simplex(1, dim)
    point = standard_simplex(0, dim)
    ends = standard_simplex(0, dim)
    total, _ = colimit(
        [interval, point, ends, ends],
        [
            (2, 0, vertex_map([0], 1, dim)),
            (2, 1, vertex_map([0], 0, dim)),
            (3, 0, vertex_map([1], 1, dim)),
            (3, 1, vertex_map([0], 0, dim)),
        ],
    )
    return total


def glue_simplex_along_boundary(x: SSet, m: int, boundary_map: SSetMap) -> SSet:
    """Attach a fresh m-simplex to ``x`` along a boundary sphere inside it."""
    simplex = standard_simplex(m, x.dim)
    boundary, inclusion = boundary_simplex(m, x.dim)
    if boundary_map.source != boundary or boundary_map.target != x:
        raise InputError("boundary map endpoints do not match")
    total, _ = colimit([x, simplex, boundary], [(2, 0, boundary_map), (2, 1, inclusion)])
    return total


def boundary_spheres(x: SSet, m: int) -> list[SSetMap]:
    """All maps of the boundary of the m-simplex into ``x``."""
    boundary, _ = boundary_simplex(m, x.dim)
    ev = evaluate(x, boundary)
    out = []
    for lbl in ev.labels:
        comps = [
            FinMap(
                boundary.levels[level],
                x.levels[level],
                {s: ev.value(lbl, level, s) for s in boundary.levels[level]},
            )
            for level in range(x.dim + 1)
        ]
        out.append(SSetMap(boundary, x, comps))
    return out


# ---------------------------------------------------------------------------
# random generators
# ---------------------------------------------------------------------------


def random_glued_sset(rng: random.Random, dim: int = 4) -> SSet:
    """A couple of standard simplices glued along randomly chosen faces."""
    count = rng.randint(2, 3)
    sizes = [rng.randint(1, 3) for _ in range(count)]
    objects = [standard_simplex(n, dim) for n in sizes]
    edges = []
    extra = []
    for j in range(count - 1):
        shared = rng.randint(0, min(sizes[j], sizes[j + 1]) - 0)
        shared = min(shared, sizes[j], sizes[j + 1])
        left = sorted(rng.sample(range(sizes[j] + 1), shared + 1))
        right = sorted(rng.sample(range(sizes[j + 1] + 1), shared + 1))
        face = standard_simplex(shared, dim)
        extra.append(face)
        face_idx = count + len(extra) - 1
        edges.append((face_idx, j, vertex_map(left, sizes[j], dim)))
        edges.append((face_idx, j + 1, vertex_map(right, sizes[j + 1], dim)))
    total, _ = colimit(objects + extra, edges)
    return total


def random_mutation(rng: random.Random, x: SSet, attempts: int = 8) -> Optional[SSet]:
    """Glue one extra simplex onto a randomly chosen boundary sphere of ``x``."""
    for _ in range(attempts):
        m = rng.choice([1, 2, 2, 3])
        if m > x.dim:
            continue
        spheres = boundary_spheres(x, m)
        if not spheres:
            continue
        chosen = spheres[rng.randrange(len(spheres))]
        return glue_simplex_along_boundary(x, m, chosen)
    return None


def build_corpus(seed: int, minimum: int = 200, dim: int = 4) -> list[tuple[str, SSet]]:
    """The named corpus driving the cross-checker agreement suite."""
    rng = random.Random(seed)
    members: list[tuple[str, SSet]] = []
    for n in range(4):
        members.append((f"simplex{n}", standard_simplex(n, dim)))
    members.append(("circle", simplicial_circle(dim)))
    members.append(("pillow", pillow_fixture(dim)))
    boundary2, _ = boundary_simplex(2, dim)
    members.append(("boundary2", boundary2))
    boundary3, _ = boundary_simplex(3, dim)
    members.append(("boundary3", boundary3))
    for idx, poset in enumerate(all_posets(4)):
        members.append((f"poset{idx}", nerve(poset, dim)))
    for name, cat in category_library():
        members.append((f"cat:{name}", nerve(cat, dim)))
    counter = 0
    while len(members) < minimum - 40:
        counter += 1
        members.append((f"glued{counter}", random_glued_sset(rng, dim)))
    base_pool = [m for m in members if max(len(l) for l in m[1].levels) < 400]
    counter = 0
    while len(members) < minimum:
        counter += 1
        base_name, base = base_pool[rng.randrange(len(base_pool))]
        mutated = random_mutation(rng, base)
        if mutated is not None and max(len(l) for l in mutated.levels) < 600:
            members.append((f"mutated{counter}:{base_name}", mutated))
    return members


# ---------------------------------------------------------------------------
# search for a separating example
# ---------------------------------------------------------------------------


def _two_truncated_candidates(max_vertices: int, max_edges: int, max_cells: int) -> Iterator[SSet]:
    """Small two-truncated simplicial sets, enumerated deterministically."""
    for v in range(1, max_vertices + 1):
        vertices = [f"v{i}" for i in range(v)]
        for a in range(0, max_edges + 1):
            endpoint_choices = itertools.product(
                itertools.product(range(v), repeat=2), repeat=a
            )
            for endpoints in endpoint_choices:
                edge_labels = [f"e{i}" for i in range(a)]
                level1 = [f"s0{w}" for w in vertices] + edge_labels
                d1 = {f"s0{w}": w for w in vertices}
                d0 = {f"s0{w}": w for w in vertices}
                for i, (src, tgt) in enumerate(endpoints):
                    d1[edge_labels[i]] = vertices[src]
                    d0[edge_labels[i]] = vertices[tgt]
                for c in range(0, max_cells + 1):
                    face_options = list(itertools.product(level1, repeat=3))
                    for faces in itertools.combinations_with_replacement(face_options, c):
                        candidate = _assemble_two_truncated(
                            vertices, level1, d0, d1, list(faces)
                        )
                        if candidate is not None:
                            yield candidate


def _assemble_two_truncated(vertices, level1, d0, d1, cell_faces) -> Optional[SSet]:
    """Try to build a valid 2-truncated simplicial set with the given cells."""
    for (f0, f1, f2) in cell_faces:
        if d0[f0] != d0[f1]:
            return None
        if d1[f0] != d0[f2]:
            return None
        if d1[f1] != d1[f2]:
            return None
    level0 = FinSet(vertices)
    lvl1 = FinSet(level1)
    deg2 = []
    d20, d21, d22 = {}, {}, {}
    s_map0, s_map1 = {}, {}
    for e in level1:
        for j, store in ((0, s_map0), (1, s_map1)):
            if e in (f"s0{w}" for w in vertices):
                pass
    # degenerate 2-cells: s0 and s1 of every edge, with the overlaps on points
    labels2 = []
    for e in level1:
        labels2.append(f"s0{e}")
    for e in level1:
        if e.startswith("s0") and e[2:] in vertices:
            continue  # s1 s0 v equals s0 s0 v
        labels2.append(f"s1{e}")
    cells = [f"c{i}" for i in range(len(cell_faces))]
    level2 = FinSet(labels2 + cells)

    def s0_of(e):
        return f"s0{e}"

    def s1_of(e):
        if e.startswith("s0") and e[2:] in vertices:
            return f"s0{e}"
        return f"s1{e}"

    faces2 = {}
    f20, f21, f22 = {}, {}, {}
    for e in level1:
        # s0(e): faces are (e, e, s0 of the source)
        f20[f"s0{e}"] = e
        f21[f"s0{e}"] = e
        f22[f"s0{e}"] = f"s0{d1[e]}"
        # s1(e): faces are (s0 of the target, e, e)
        if not (e.startswith("s0") and e[2:] in vertices):
            f20[f"s1{e}"] = f"s0{d0[e]}"
            f21[f"s1{e}"] = e
            f22[f"s1{e}"] = e
    for i, (f0, f1, f2) in enumerate(cell_faces):
        f20[cells[i]] = f0
        f21[cells[i]] = f1
        f22[cells[i]] = f2
    try:
        return SSet(
            2,
            [level0, lvl1, level2],
            {
                (1, 0): FinMap(lvl1, level0, d0),
                (1, 1): FinMap(lvl1, level0, d1),
                (2, 0): FinMap(level2, lvl1, f20),
                (2, 1): FinMap(level2, lvl1, f21),
                (2, 2): FinMap(level2, lvl1, f22),
            },
            {
                (0, 0): FinMap(level0, lvl1, {w: f"s0{w}" for w in vertices}),
                (1, 0): FinMap(lvl1, level2, {e: s0_of(e) for e in level1}),
                (1, 1): FinMap(lvl1, level2, {e: s1_of(e) for e in level1}),
            },
        )
    except InputError:
        return None


def find_two_segal_not_one_segal(
    max_vertices: int = 2,
    max_edges: int = 2,
    max_cells: int = 1,
    check_dim: int = 3,
) -> Optional[SSet]:
    """Search small truncated simplicial sets for one separating the conditions.

    Returns the first candidate (in a fixed enumeration order) that
    passes the two-dimensional condition up to ``check_dim`` but fails
    the spine condition, extended by free degeneracies to ``check_dim``.
    """
    for candidate in _two_truncated_candidates(max_vertices, max_edges, max_cells):
        extended = free_degeneracy_extension(candidate, check_dim)
        if not check_1segal(extended, check_dim).passed:
            if check_2segal_dk(extended, check_dim).passed:
                return extended
    return None
