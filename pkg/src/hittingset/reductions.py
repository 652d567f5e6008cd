"""Reduction rules: unit edge, edge/vertex domination, costly discard.

Every rule works on the shared instance, so its changes are journaled and
undone together with the search node that applied them.  Rules that force
vertices append them to the caller's partial solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .bounds import Efficiency, Packing, build_packing, compute_efficiency
from .hypergraph import Hypergraph
from .settrie import SetTrie


class LoopItem(str, Enum):
    """Items of the reduction loop, in evaluation order."""

    MAX_DEGREE = "max_degree"
    EFFICIENCY = "efficiency"
    PACKING = "packing"
    SUM_OVER_PACKING = "sum_over_packing"
    UNIT_EDGE = "unit_edge"
    COSTLY_DISCARD_EFFICIENCY = "costly_discard_efficiency"
    COSTLY_DISCARD_PACKING_UPDATE = "costly_discard_packing_update"
    COSTLY_DISCARD_REPACK = "costly_discard_repack"
    EDGE_DOMINATION = "edge_domination"
    VERTEX_DOMINATION = "vertex_domination"


BOUND_ITEMS = (
    LoopItem.MAX_DEGREE,
    LoopItem.EFFICIENCY,
    LoopItem.PACKING,
    LoopItem.SUM_OVER_PACKING,
)
REDUCTION_ITEMS = (
    LoopItem.UNIT_EDGE,
    LoopItem.COSTLY_DISCARD_EFFICIENCY,
    LoopItem.COSTLY_DISCARD_PACKING_UPDATE,
    LoopItem.COSTLY_DISCARD_REPACK,
    LoopItem.EDGE_DOMINATION,
    LoopItem.VERTEX_DOMINATION,
)


class Infeasible(Exception):
    """The current branch contains an empty edge."""


@dataclass
class ReductionOutcome:
    rule: LoopItem
    applied: bool = False
    forced_vertices: list[int] = field(default_factory=list)
    removed: int = 0  # edges or vertices deleted by the domination rules


def unit_edge_rule(inst: Hypergraph, partial: list[int]) -> ReductionOutcome:
    """Pick the vertex of the first edge of size one, if any."""
    out = ReductionOutcome(LoopItem.UNIT_EDGE)
    edge_vertices = inst.edge_vertices
    for f in inst.active_edges:
        size = len(edge_vertices[f])
        if size == 1:
            v = edge_vertices[f].first()
            inst.select_vertex(v)
            partial.append(v)
            out.applied = True
            out.forced_vertices.append(v)
            return out
        if size == 0:
            raise Infeasible(f"edge {f} is empty")
    return out


def edge_domination_rule(inst: Hypergraph) -> ReductionOutcome:
    """Delete every edge that contains another edge.

    Edges are visited by ascending size, so any subset of an edge is already
    in the trie when the edge is checked.  Of two equal edges the later one
    is deleted.
    """
    out = ReductionOutcome(LoopItem.EDGE_DOMINATION)
    edge_vertices = inst.edge_vertices
    order = sorted(inst.active_edges, key=lambda f: (len(edge_vertices[f]), f))
    trie = SetTrie()
    for f in order:
        members = edge_vertices[f].to_list()
        if trie.has_subset(members):
            inst.delete_edge(f)
            out.removed += 1
        else:
            trie.add(members, check=False)
    out.applied = out.removed > 0
    return out


def vertex_domination_rule(inst: Hypergraph) -> ReductionOutcome:
    """Discard every vertex whose edge set is contained in another vertex's.

    Vertices are visited by descending degree (ties: lower id first), and
    zero-degree vertices are always discarded.
    """
    out = ReductionOutcome(LoopItem.VERTEX_DOMINATION)
    vertex_edges = inst.vertex_edges
    order = sorted(inst.active_vertices, key=lambda v: (-len(vertex_edges[v]), v))
    trie = SetTrie()
    for v in order:
        edges = vertex_edges[v].to_list()
        if not edges or trie.has_superset(edges):
            inst.discard_vertex(v)
            out.removed += 1
        else:
            trie.add(edges, check=False)
    out.applied = out.removed > 0
    return out


def _select_all(inst: Hypergraph, vertices: list[int], partial: list[int], out: ReductionOutcome) -> None:
    for v in vertices:
        if inst.is_vertex_active(v):
            inst.select_vertex(v)
            partial.append(v)
            out.forced_vertices.append(v)
    out.applied = bool(out.forced_vertices)


def discard_efficiency_bounds(inst: Hypergraph, eff: Efficiency) -> dict[int, float]:
    """Efficiency bound of the instance with ``v`` discarded, for every active ``v``.

    Only edges whose recorded top vertex is ``v`` change their contribution;
    it drops to the second highest degree.  A unit edge on ``v`` makes the
    discard infeasible, reported as ``math.inf``.
    """
    denominator = eff.denominator
    delta: dict[int, int] = {}
    infeasible = set()
    for f, v in eff.top.items():
        d2 = eff.second_degree[f]
        if d2 == 0:
            infeasible.add(v)
            continue
        d1 = eff.top_degree[f]
        if d1 != d2:
            delta[v] = delta.get(v, 0) + denominator // d2 - denominator // d1
    result: dict[int, float] = {}
    numerator = eff.numerator
    for v in inst.active_vertices:
        if v in infeasible:
            result[v] = math.inf
        else:
            result[v] = -(-(numerator + delta.get(v, 0)) // denominator)
    return result


def costly_discard_efficiency(
    inst: Hypergraph,
    partial: list[int],
    best: float,
    eff: Efficiency | None = None,
) -> ReductionOutcome:
    """Force every vertex whose discard lifts the efficiency bound to ``best``.

    All qualifying vertices are collected from one set of records and then
    selected together.
    """
    out = ReductionOutcome(LoopItem.COSTLY_DISCARD_EFFICIENCY)
    if math.isinf(best) or inst.num_active_edges == 0:
        return out
    if eff is None:
        eff = compute_efficiency(inst)
    picked = len(partial)
    bounds = discard_efficiency_bounds(inst, eff)
    forced = [v for v, b in bounds.items() if picked + b >= best]
    _select_all(inst, forced, partial, out)
    return out


def packing_growth_on_discard(inst: Hypergraph, p: Packing, v: int) -> float:
    """How many blocked edges join the packing once ``v`` is discarded.

    The blocked edges of ``v`` are added greedily in list order; the
    packing itself is left untouched.  Infeasible discards give ``math.inf``.
    """
    edge_vertices = inst.edge_vertices
    for f in inst.vertex_edges[v]:
        if len(edge_vertices[f]) == 1:
            return math.inf
    marked = p.marked
    taken: set[int] = set()
    grown = 0
    for f in p.blocked_by.get(v, ()):
        ok = True
        for u in edge_vertices[f]:
            if u != v and (u in marked or u in taken):
                ok = False
                break
        if ok:
            for u in edge_vertices[f]:
                if u != v:
                    taken.add(u)
            grown += 1
    return grown


def costly_discard_packing_update(
    inst: Hypergraph,
    p: Packing,
    partial: list[int],
    best: float,
) -> ReductionOutcome:
    out = ReductionOutcome(LoopItem.COSTLY_DISCARD_PACKING_UPDATE)
    if math.isinf(best) or inst.num_active_edges == 0:
        return out
    base = len(partial) + len(p.edges)
    forced = [
        v
        for v in inst.active_vertices
        if base + packing_growth_on_discard(inst, p, v) >= best
    ]
    _select_all(inst, forced, partial, out)
    return out


def repack_bound_on_discard(inst: Hypergraph, v: int) -> float:
    """Size of a fresh greedy packing after discarding ``v``."""
    for f in inst.vertex_edges[v]:
        if len(inst.edge_vertices[f]) == 1:
            return math.inf
    mark = inst.journal_mark()
    inst.discard_vertex(v)
    try:
        return len(build_packing(inst).edges)
    finally:
        inst.rollback_to(mark)


def highest_degree_vertices(inst: Hypergraph, c: int) -> list[int]:
    vertex_edges = inst.vertex_edges
    ranked = sorted(inst.active_vertices, key=lambda v: (-len(vertex_edges[v]), v))
    return ranked[:c]


def costly_discard_repack(
    inst: Hypergraph,
    partial: list[int],
    best: float,
    c: int = 3,
) -> ReductionOutcome:
    """Probe the ``c`` highest-degree vertices with a packing built from scratch."""
    out = ReductionOutcome(LoopItem.COSTLY_DISCARD_REPACK)
    if c <= 0 or math.isinf(best) or inst.num_active_edges == 0:
        return out
    picked = len(partial)
    forced = [
        v
        for v in highest_degree_vertices(inst, c)
        if picked + repack_bound_on_discard(inst, v) >= best
    ]
    _select_all(inst, forced, partial, out)
    return out
