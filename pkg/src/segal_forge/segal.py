"""Checkers for the two-dimensional Segal conditions and the lax associator.

Two formulations are implemented independently and are expected to agree:

* the chord form: for every chord of the (n+1)-gon touching an end
  vertex (all chords with the exhaustive flag), the square gluing the
  two polygon pieces along the chord must evaluate to a pullback of
  finite sets, together with the degeneracy unitality squares;

* the push-forward form: every pushout of an active against an inert
  map of finite ordinals must evaluate to a pullback.

The associator compares the evaluation of a composite's glued simplex
against the evaluation of the pushout of the two stage gluings; the
simplicial object makes every such comparison a bijection exactly when
it passes the checkers above, which the algebra checker exploits by
tabulating fiber-size signatures.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import InputError, InternalError, TruncationError
from .evaluate import Evaluation, evaluate, restrict_along
from .finset import FinMap, FinSet, into_pullback, is_bijection, pullback
from .gluing import CompositionCell, build_composition_cell
from .ordermaps import MapChain, ordered_from_ranks
from .sset import (
    SSet,
    simplicial_operator,
    spine_subcomplex,
    standard_simplex,
    vertex_map,
)


@dataclass(frozen=True)
class Violation:
    condition_id: str
    level: int
    indices: tuple[int, ...]
    domain_size: int
    codomain_size: int


@dataclass(frozen=True)
class SegalReport:
    form: str
    passed: bool
    violations: tuple[Violation, ...]

    @staticmethod
    def from_violations(form: str, violations: Sequence[Violation]) -> "SegalReport":
        ordered = tuple(sorted(violations, key=lambda v: v.condition_id))
        return SegalReport(form=form, passed=not ordered, violations=ordered)


class _SimplexEvaluations:
    """Per-object cache of standard-simplex evaluations at the object's truncation."""

    def __init__(self, x: SSet) -> None:
        self.x = x
        self._cache: dict[int, Evaluation] = {}

    def __call__(self, n: int) -> Evaluation:
        if n not in self._cache:
            self._cache[n] = evaluate(self.x, standard_simplex(n, self.x.dim))
        return self._cache[n]


def _comparison_is_bijective(
    source: Evaluation,
    leg_a: FinMap,
    leg_b: FinMap,
    over_a: FinMap,
    over_b: FinMap,
) -> tuple[bool, int, int]:
    """Compare a cone against the chosen pullback; returns (ok, |source|, |pullback|)."""
    apex, _, _ = pullback(over_a, over_b)
    comparison = into_pullback(apex, leg_a, leg_b)
    return is_bijection(comparison), len(source.labels), len(apex)


def check_2segal_dk(x: SSet, max_n: int, exhaustive: bool = False) -> SegalReport:
    """The chord-square form of the condition, driven entirely by evaluation.

    The default checks the generating chords touching an end vertex; the
    exhaustive flag checks every chord.
    """
    if max_n > x.dim:
        raise TruncationError(max_n, x.dim, "chord checker")
    ev = _SimplexEvaluations(x)
    dim = x.dim
    violations: list[Violation] = []

    for n in range(3, max_n + 1):
        for i in range(0, n + 1):
            for j in range(i + 1, n + 1):
                if not exhaustive and not (i == 0 or j == n):
                    continue
                piece_one = list(range(i, j + 1))
                piece_two = list(range(0, i + 1)) + list(range(j, n + 1))
                ev_n = ev(n)
                ev_one = ev(len(piece_one) - 1)
                ev_two = ev(len(piece_two) - 1)
                ev_chord = ev(1)
                to_one = restrict_along(vertex_map(piece_one, n, dim), ev_n, ev_one)
                to_two = restrict_along(vertex_map(piece_two, n, dim), ev_n, ev_two)
                chord_in_one = restrict_along(
                    vertex_map([0, j - i], len(piece_one) - 1, dim), ev_one, ev_chord
                )
                chord_in_two = restrict_along(
                    vertex_map([i, i + 1], len(piece_two) - 1, dim), ev_two, ev_chord
                )
                ok, dom, cod = _comparison_is_bijective(
                    ev_n, to_one, to_two, chord_in_one, chord_in_two
                )
                if not ok:
                    violations.append(
                        Violation(f"dk:poly:n={n}:i={i}:j={j}", n, (i, j), dom, cod)
                    )

    for n in range(2, max_n + 1):
        for i in range(n):
            ev_n = ev(n)
            ev_prev = ev(n - 1)
            ev_point = ev(0)
            ev_edge = ev(1)
            collapse = list(range(i + 1)) + list(range(i, n))  # the i-th codegeneracy
            s_i = restrict_along(vertex_map(collapse, n - 1, dim), ev_prev, ev_n)
            at_vertex = restrict_along(vertex_map([i], n - 1, dim), ev_prev, ev_point)
            degenerate_edge = restrict_along(vertex_map([0, 0], 0, dim), ev_point, ev_edge)
            edge = restrict_along(vertex_map([i, i + 1], n, dim), ev_n, ev_edge)
            ok, dom, cod = _comparison_is_bijective(
                ev_prev, at_vertex, s_i, degenerate_edge, edge
            )
            if not ok:
                violations.append(Violation(f"dk:unit:n={n}:i={i}", n, (i,), dom, cod))

    return SegalReport.from_violations("dk", violations)


def _active_maps(n: int, m: int):
    """All endpoint-preserving monotone arrays [n] -> [m]."""
    if n == 0:
        if m == 0:
            yield (0,)
        return
    for middle in itertools.combinations_with_replacement(range(m + 1), n - 1):
        arr = (0,) + middle + (m,)
        if all(a <= b for a, b in zip(arr, arr[1:])):
            yield arr


def check_2segal_gkt(x: SSet, max_n: int) -> SegalReport:
    """The active-against-inert pushout form, driven by structure maps."""
    if max_n > x.dim:
        raise TruncationError(max_n, x.dim, "pushout checker")
    violations: list[Violation] = []
    for inner in range(0, max_n + 1):
        for outer in range(0, max_n + 1):
            for psi in _active_maps(inner, outer):
                for a in range(0, max_n + 1):
                    for b in range(0, max_n + 1):
                        k = a + inner + b
                        l = a + outer + b
                        if k > max_n or l > max_n:
                            continue
                        inert_small = [a + v for v in range(inner + 1)]
                        inert_big = [a + v for v in range(outer + 1)]
                        widened = (
                            list(range(a))
                            + [a + psi[v] for v in range(inner + 1)]
                            + [a + outer + w + 1 for w in range(b)]
                        )
                        top = simplicial_operator(x, psi, outer)      # X_outer -> X_inner
                        left = simplicial_operator(x, inert_small, k)  # X_k -> X_inner
                        bottom = simplicial_operator(x, widened, l)    # X_l -> X_k
                        right = simplicial_operator(x, inert_big, l)   # X_l -> X_outer
                        apex, _, _ = pullback(left, top)
                        comparison = into_pullback(apex, bottom, right)
                        if not is_bijection(comparison):
                            psi_txt = ",".join(str(v) for v in psi)
                            violations.append(
                                Violation(
                                    f"gkt:l={l}:a={a}:b={b}:active={psi_txt}",
                                    l,
                                    (a, b) + tuple(psi),
                                    len(x.levels[l]),
                                    len(apex),
                                )
                            )
    return SegalReport.from_violations("gkt", violations)


def check_1segal(x: SSet, max_n: int) -> SegalReport:
    """Spine comparison: every level against strings of edges."""
    if max_n > x.dim:
        raise TruncationError(max_n, x.dim, "spine checker")
    violations: list[Violation] = []
    for n in range(2, max_n + 1):
        spine, inclusion = spine_subcomplex(n, x.dim)
        ev_n = evaluate(x, standard_simplex(n, x.dim))
        ev_spine = evaluate(x, spine)
        comparison = restrict_along(inclusion, ev_n, ev_spine)
        if not is_bijection(comparison):
            violations.append(
                Violation(f"1segal:n={n}", n, (n,), len(ev_n.labels), len(ev_spine.labels))
            )
    return SegalReport.from_violations("1-segal", violations)


# ---------------------------------------------------------------------------
# the associator
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AssociatorCheck:
    chain: MapChain
    delta_domain_size: int
    delta_codomain_size: int
    bijective: bool
    limit_self_test: bool

    def __post_init__(self) -> None:
        if self.bijective and self.delta_domain_size != self.delta_codomain_size:
            raise InternalError("a bijection between sets of different sizes")


def _long_edge_counts(x: SSet, m: int) -> dict[str, int]:
    """How many m-simplices of x have a given long edge."""
    op = simplicial_operator(x, [0, m], m)
    counts: dict[str, int] = {}
    for sigma in x.levels[m]:
        counts[op(sigma)] = counts.get(op(sigma), 0) + 1
    return counts


def _pullback_size_by_counting(x: SSet, cell: CompositionCell) -> int:
    """|evaluation(outer apex) x_(middle) evaluation(inner apex)|, without materialising.

    Both evaluations split over the coproduct summands, so the fiber
    product collapses to one sum per outer summand over the level
    indexing it, with one long-edge count per inner summand.  This runs
    through the structure maps of ``x`` directly, independently of the
    backtracking evaluator it cross-checks.
    """
    outer = cell.outer
    inner = cell.inner
    counts = {
        len(inner.fiber(y)): _long_edge_counts(x, len(inner.fiber(y)))
        for z in outer.target
        for y in outer.fiber(z)
    }
    result = 1
    for z in outer.target:
        size = len(outer.fiber(z))
        ops = [simplicial_operator(x, [r - 1, r], size) for r in range(1, size + 1)]
        subtotal = 0
        for tau in x.levels[size]:
            product = 1
            for r, y in enumerate(outer.fiber(z)):
                edge = ops[r](tau)
                product *= counts[len(inner.fiber(y))].get(edge, 0)
                if product == 0:
                    break
            subtotal += product
        result *= subtotal
    return result


@functools.lru_cache(maxsize=4096)
def _cell_for_signature(signature: tuple[int, ...], dim: int) -> CompositionCell:
    chain = chain_from_signature(signature)
    return build_composition_cell(chain[0], chain[1], dim)


def cell_chain(cell: CompositionCell) -> MapChain:
    return MapChain([cell.inner, cell.outer])


def associator(x: SSet, chain: MapChain) -> AssociatorCheck:
    """The comparison between a composite's evaluation and the glued evaluations.

    The codomain is recomputed independently as a fiber product through
    the structure maps of ``x`` and compared against the evaluation of
    the pushout, a built-in self-test of limit preservation.
    """
    if len(chain) != 2:
        raise InputError("the associator compares a chain of exactly two maps")
    cell = build_composition_cell(chain[0], chain[1], x.dim)
    return _associator_of_cell(x, cell, chain)


def _associator_of_cell(x: SSet, cell: CompositionCell, chain: MapChain) -> AssociatorCheck:
    ev_composite = evaluate(x, cell.span_composite.apex)
    ev_pushout = evaluate(x, cell.pushout)
    delta = restrict_along(cell.cell, ev_composite, ev_pushout)
    recount = _pullback_size_by_counting(x, cell)
    if recount != len(ev_pushout.labels):
        raise InternalError(
            f"evaluation of the pushout ({len(ev_pushout.labels)}) disagrees "
            f"with the fiber-product count ({recount})"
        )
    return AssociatorCheck(
        chain=chain,
        delta_domain_size=len(ev_composite.labels),
        delta_codomain_size=len(ev_pushout.labels),
        bijective=is_bijection(delta),
        limit_self_test=True,
    )


# ---------------------------------------------------------------------------
# the algebra checker
# ---------------------------------------------------------------------------


def two_stage_signatures(max_fiber: int):
    """Fiber-size signatures of two-stage chains into a point, up to isomorphism."""
    for b in range(0, max_fiber + 1):
        for ms in itertools.product(range(max_fiber + 1), repeat=b):
            if sum(ms) <= max_fiber:
                yield ms


def chain_from_signature(signature: Sequence[int]) -> MapChain:
    """The canonical two-stage chain with the given inner fiber sizes."""
    signature = tuple(signature)
    total = sum(signature)
    x0 = FinSet([f"x{i}" for i in range(total)])
    x1 = FinSet([f"y{j}" for j in range(len(signature))])
    point = FinSet(["z"])
    assignment = {}
    position = 0
    for j, m in enumerate(signature):
        for _ in range(m):
            assignment[f"x{position}"] = f"y{j}"
            position += 1
    inner = ordered_from_ranks(FinMap(x0, x1, assignment))
    outer = ordered_from_ranks(FinMap(x1, point, {y: "z" for y in x1}))
    return MapChain([inner, outer])


def _nested_signatures(depth: int, max_fiber: int):
    """Nested fiber structures of chains of the given length into a point.

    A structure of depth one is a fiber size; deeper structures are
    tuples of structures, one per element of the next stage, with every
    intermediate level capped at ``max_fiber`` elements.  Budgets are
    enforced while extending, so the enumeration never materialises an
    over-sized candidate.
    """

    def build(d: int):
        if d == 1:
            for s in range(max_fiber + 1):
                yield s, (s,)
            return
        parts_list = list(build(d - 1))
        zero = tuple(0 for _ in range(d - 1))

        def extend(acc_sig: tuple, acc_sizes: tuple):
            yield acc_sig, (len(acc_sig),) + acc_sizes
            if len(acc_sig) == max_fiber:
                return
            for part, sizes in parts_list:
                new_sizes = tuple(a + b for a, b in zip(acc_sizes, sizes))
                if all(v <= max_fiber for v in new_sizes):
                    yield from extend(acc_sig + (part,), new_sizes)

        yield from extend((), zero)

    for sig, _sizes in build(depth):
        yield sig


def _collapse_once(sig):
    """Compose the two innermost stages of a nested signature."""

    def total(part) -> int:
        if isinstance(part, int):
            return part
        return sum(total(q) for q in part)

    def depth(part) -> int:
        if isinstance(part, int):
            return 1
        return 1 + max((depth(q) for q in part), default=1)

    if depth(sig) == 2:
        return total(sig)
    return tuple(_collapse_once(part) for part in sig)


def _innermost_pairs(sig):
    """The two-stage signatures of the innermost pairing of a nested signature."""
    def depth(part) -> int:
        if isinstance(part, int):
            return 1
        return 1 + max((depth(q) for q in part), default=1)

    if depth(sig) == 2:
        yield tuple(sig)
        return
    for part in sig:
        yield from _innermost_pairs(part)


@dataclass(frozen=True)
class AlgebraReport:
    passed: bool
    pair_results: dict = field(repr=False)
    deep_structures_checked: int
    witness: Optional[object]


def check_algebra(x: SSet, max_fiber: int, max_chain: int) -> AlgebraReport:
    """Associator bijectivity over every chain shape within the bounds.

    Two-stage chains into a point are checked directly, one isomorphism
    class per fiber-size signature.  Longer chains are checked through
    their iterated pairwise factorisation: every factor is itself a
    two-stage component, read off the tabulated signatures.
    """
    if max_fiber > x.dim:
        raise TruncationError(max_fiber, x.dim, "algebra checker")
    if max_chain < 2:
        raise InputError("chains shorter than two maps carry no condition")
    table: dict[tuple, bool] = {}
    witness = None
    for signature in two_stage_signatures(max_fiber):
        cell = _cell_for_signature(signature, x.dim)
        check = _associator_of_cell(x, cell, cell_chain(cell))
        table[signature] = check.bijective
        if not check.bijective and witness is None:
            witness = signature
    passed = all(table.values())

    deep_checked = 0
    for depth in range(3, max_chain + 1):
        for sig in _nested_signatures(depth, max_fiber):
            deep_checked += 1
            current = sig
            ok = True
            while not isinstance(current, int):
                for pair_sig in _innermost_pairs(current):
                    if not table[pair_sig]:
                        ok = False
                        break
                if not ok:
                    break
                current = _collapse_once(current)
            if not ok:
                passed = False
                if witness is None:
                    witness = sig
    return AlgebraReport(
        passed=passed,
        pair_results=table,
        deep_structures_checked=deep_checked,
        witness=witness,
    )
