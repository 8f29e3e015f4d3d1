"""Mapping sets of finite simplicial sets.

``evaluate(x, s)`` computes the finite set of simplicial maps s -> x.
A map is determined by its values on the nondegenerate simplices of
``s``; the search assigns those by backtracking (largest dimension
first) and propagates forced face values downward, so representables
cost one branch per element of the corresponding level.

Map labels are the JSON list of values on nondegenerate simplices in a
fixed order, which makes results order-deterministic.
"""

from __future__ import annotations

import json
from typing import Iterator, Sequence

from .errors import InputError, TruncationError
from .finset import FinMap, FinSet
from .sset import SSet, SSetMap


class Evaluation:
    """The set of simplicial maps ``s -> x`` with access to their values."""

    __slots__ = ("x", "s", "nondeg_order", "labels", "_values", "_slot")

    def __init__(self, x: SSet, s: SSet, nondeg_order: Sequence[tuple[int, str]], rows: Sequence[tuple[str, ...]]) -> None:
        self.x = x
        self.s = s
        self.nondeg_order = tuple(nondeg_order)
        self._slot = {key: pos for pos, key in enumerate(self.nondeg_order)}
        decorated = sorted((json.dumps(list(row), separators=(",", ":")), row) for row in rows)
        self.labels = FinSet(lbl for lbl, _ in decorated)
        self._values = {lbl: row for lbl, row in decorated}

    def __len__(self) -> int:
        return len(self.labels)

    def row(self, label: str) -> tuple[str, ...]:
        return self._values[label]

    def value(self, label: str, m: int, simplex: str) -> str:
        """The value of the map ``label`` on any simplex of ``s`` (level <= bound)."""
        key = (m, simplex)
        row = self._values[label]
        if key in self._slot:
            return row[self._slot[key]]
        word, base_level, base = self.s.eilenberg_zilber(m, simplex)
        base_value = row[self._slot[(base_level, base)]]
        return self.x.apply_degeneracy_word(word, base_level, base_value)

    def label_of_row(self, row: Sequence[str]) -> str:
        return json.dumps(list(row), separators=(",", ":"))


def evaluate(x: SSet, s: SSet) -> Evaluation:
    """All simplicial maps from ``s`` into ``x``.

    Requires the truncation of ``x`` to reach the highest nondegenerate
    level of ``s``; the maps are computed on levels up to
    ``min(s.dim, x.dim)`` (values above that are forced by degeneracy).
    """
    required = s.max_nondegenerate_dim()
    if required > x.dim:
        raise TruncationError(required, x.dim, "evaluate")
    bound = min(s.dim, x.dim)

    nondeg_order = []
    for m in range(bound, -1, -1):
        for lbl in sorted(s.nondegenerate(m)):
            nondeg_order.append((m, lbl))

    assignment: dict[tuple[int, str], str] = {}

    def propagate(m: int, lbl: str, value: str, trail: list[tuple[int, str]]) -> bool:
        current = assignment.get((m, lbl))
        if current is not None:
            return current == value
        if s.is_degenerate(m, lbl):
            for j in range(m):
                if s.degens[(m - 1, j)](s.faces[(m, j)](lbl)) == lbl:
                    if x.degens[(m - 1, j)](x.faces[(m, j)](value)) != value:
                        return False
        assignment[(m, lbl)] = value
        trail.append((m, lbl))
        if m >= 1:
            for i in range(m + 1):
                if not propagate(m - 1, s.faces[(m, i)](lbl), x.faces[(m, i)](value), trail):
                    return False
        return True

    def candidates(m: int, lbl: str) -> Iterator[str]:
        pinned = []
        if m >= 1:
            for i in range(m + 1):
                fv = assignment.get((m - 1, s.faces[(m, i)](lbl)))
                if fv is not None:
                    pinned.append((i, fv))
        if not pinned:
            yield from x.levels[m]
            return
        i0, v0 = pinned[0]
        pool = x.face_index(m, i0).get(v0, ())
        for cand in pool:
            if all(x.faces[(m, i)](cand) == fv for i, fv in pinned[1:]):
                yield cand

    rows: list[tuple[str, ...]] = []

    def search(pos: int) -> None:
        while pos < len(nondeg_order) and nondeg_order[pos] in assignment:
            pos += 1
        if pos == len(nondeg_order):
            rows.append(tuple(assignment[key] for key in nondeg_order))
            return
        m, lbl = nondeg_order[pos]
        for cand in candidates(m, lbl):
            trail: list[tuple[int, str]] = []
            if propagate(m, lbl, cand, trail):
                search(pos + 1)
            for key in trail:
                del assignment[key]

    search(0)
    return Evaluation(x, s, nondeg_order, rows)


def restrict_along(h: SSetMap, ev_target: Evaluation, ev_source: Evaluation) -> FinMap:
    """Precomposition with ``h: s -> t``, as a map ``evaluate(x, t) -> evaluate(x, s)``.

    ``ev_target`` must be an evaluation of maps out of ``t`` and
    ``ev_source`` of maps out of ``s``, both into the same ``x``.
    """
    if ev_target.s != h.target or ev_source.s != h.source:
        raise InputError("evaluations do not match the map being restricted along")
    if ev_target.x != ev_source.x:
        raise InputError("evaluations target different simplicial objects")
    assignment = {}
    for lbl in ev_target.labels:
        row = tuple(
            ev_target.value(lbl, m, h(m, simplex)) for (m, simplex) in ev_source.nondeg_order
        )
        assignment[lbl] = ev_source.label_of_row(row)
    return FinMap(ev_target.labels, ev_source.labels, assignment)


def yoneda_bijection(ev: Evaluation, n: int) -> FinMap:
    """The map ``evaluate(x, standard n-simplex) -> x_n`` reading off the top cell."""
    top = "|".join(str(i) for i in range(n + 1))
    return FinMap(
        ev.labels, ev.x.levels[n], {lbl: ev.value(lbl, n, top) for lbl in ev.labels}
    )
