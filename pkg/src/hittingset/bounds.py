"""Greedy upper bound and the lower bounds on the hitting set size.

All lower bounds are exact integers.  The efficiency bound is a sum of unit
fractions, so it is evaluated over a common denominator instead of floats;
a rounding error there would make the bound unsound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .hypergraph import Hypergraph


class DegreeBuckets:
    """Bucket heap keyed by vertex degree.

    Degrees only go down while the greedy runs, so the max pointer moves
    monotonically and extract-max is amortized O(1).
    """

    def __init__(self, degrees: dict[int, int]):
        top = max(degrees.values(), default=0)
        self.buckets: list[list[int]] = [[] for _ in range(top + 1)]
        self.degree: dict[int, int] = {}
        self.pos: dict[int, int] = {}
        for v, d in degrees.items():
            self._put(v, d)
        self.top = top

    def __len__(self) -> int:
        return len(self.degree)

    def __contains__(self, v: int) -> bool:
        return v in self.degree

    def _put(self, v: int, d: int) -> None:
        bucket = self.buckets[d]
        self.pos[v] = len(bucket)
        bucket.append(v)
        self.degree[v] = d

    def remove(self, v: int) -> None:
        d = self.degree.pop(v)
        i = self.pos.pop(v)
        bucket = self.buckets[d]
        last = bucket.pop()
        if last != v:
            bucket[i] = last
            self.pos[last] = i

    def decrease(self, v: int, by: int = 1) -> None:
        d = self.degree[v]
        self.remove(v)
        self._put(v, d - by)

    def max_degree(self) -> int:
        while self.top > 0 and not self.buckets[self.top]:
            self.top -= 1
        return self.top

    def pop_max(self) -> int:
        """Remove and return a vertex of maximum degree."""
        if not self.degree:
            raise IndexError("pop_max on empty DegreeBuckets")
        d = self.max_degree()
        while not self.buckets[d]:
            d -= 1
        v = self.buckets[d][-1]
        self.remove(v)
        return v


def greedy_upper_bound(inst: Hypergraph) -> list[int]:
    """Repeatedly pick a highest-degree vertex until every edge is hit.

    The instance is modified through its journal and rolled back before
    returning.
    """
    if inst.num_active_edges == 0:
        return []
    mark = inst.journal_mark()
    vertex_edges, edge_vertices = inst.vertex_edges, inst.edge_vertices
    buckets = DegreeBuckets({v: len(vertex_edges[v]) for v in inst.active_vertices})
    chosen = []
    try:
        while inst.num_active_edges > 0:
            v = buckets.pop_max()
            for f in vertex_edges[v]:
                for u in edge_vertices[f]:
                    if u != v:
                        buckets.decrease(u)
            inst.select_vertex(v)
            chosen.append(v)
    finally:
        inst.rollback_to(mark)
    return sorted(chosen)


def _degrees(inst: Hypergraph) -> list[int]:
    vertex_edges = inst.vertex_edges
    return [len(vertex_edges[v]) for v in inst.active_vertices]


def max_degree_bound(inst: Hypergraph) -> int:
    m = inst.num_active_edges
    if m == 0:
        return 0
    d_max = max(_degrees(inst))
    return -(-m // d_max)


def _smallest_prefix_reaching(degrees_desc, target: int) -> int:
    if target <= 0:
        return 0
    total = 0
    for k, d in enumerate(degrees_desc, 1):
        total += d
        if total >= target:
            return k
    raise ValueError("degree sum cannot cover the edges; instance is inconsistent")


def sum_degree_bound(inst: Hypergraph) -> int:
    """Smallest k such that the k largest degrees sum to at least |H|."""
    m = inst.num_active_edges
    if m == 0:
        return 0
    return _smallest_prefix_reaching(sorted(_degrees(inst), reverse=True), m)


@dataclass
class Efficiency:
    """Efficiency bound plus the per-edge records needed by costly discard.

    ``top[f]`` is the highest-degree vertex of edge ``f``, and
    ``top_degree[f]`` / ``second_degree[f]`` the highest and second highest
    degree in ``f`` (second is 0 for a unit edge).  The fractional sum equals
    ``numerator / denominator`` exactly.
    """

    bound: int
    numerator: int
    denominator: int
    top: dict[int, int] = field(default_factory=dict)
    top_degree: dict[int, int] = field(default_factory=dict)
    second_degree: dict[int, int] = field(default_factory=dict)

    @property
    def value(self) -> float:
        return self.numerator / self.denominator


def compute_efficiency(inst: Hypergraph) -> Efficiency:
    vertex_edges, edge_vertices = inst.vertex_edges, inst.edge_vertices
    top: dict[int, int] = {}
    top_degree: dict[int, int] = {}
    second_degree: dict[int, int] = {}
    for f in inst.active_edges:
        best_v = -1
        d1 = d2 = 0
        for v in edge_vertices[f]:
            d = len(vertex_edges[v])
            if d > d1:
                d2 = d1
                d1 = d
                best_v = v
            elif d > d2:
                d2 = d
        if best_v < 0:
            raise ValueError(f"edge {f} is empty; efficiency bound undefined")
        top[f] = best_v
        top_degree[f] = d1
        second_degree[f] = d2
    if not top:
        return Efficiency(0, 0, 1)
    # lcm over the second degrees too, so per-vertex adjustments stay integral
    denominator = math.lcm(*set(top_degree.values()), *(d for d in set(second_degree.values()) if d))
    numerator = sum(denominator // d for d in top_degree.values())
    return Efficiency(-(-numerator // denominator), numerator, denominator, top, top_degree, second_degree)


def efficiency_bound(inst: Hypergraph) -> int:
    """Ceiling of the sum over edges of 1 / (largest degree in the edge)."""
    return compute_efficiency(inst).bound


@dataclass
class Packing:
    """Pairwise vertex-disjoint edges of the current instance.

    ``marked`` holds the union of the packing edges.  ``blocked_by[v]`` lists
    the edges meeting that union exactly in ``v``, sorted by the largest
    degree among their other vertices, descending.
    """

    edges: list[int]
    marked: set[int]
    blocked_by: dict[int, list[int]] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.edges)

    def copy(self) -> "Packing":
        return Packing(
            list(self.edges),
            set(self.marked),
            {v: list(fs) for v, fs in self.blocked_by.items()},
        )


def _blocked_lists(inst: Hypergraph, edges: list[int], marked: set[int]) -> dict[int, list[int]]:
    vertex_edges, edge_vertices = inst.vertex_edges, inst.edge_vertices
    in_packing = set(edges)
    keyed: dict[int, list[tuple[int, int]]] = {}
    for f in inst.active_edges:
        if f in in_packing:
            continue
        blocker = -1
        hits = 0
        for v in edge_vertices[f]:
            if v in marked:
                hits += 1
                if hits > 1:
                    break
                blocker = v
        if hits == 1:
            other = max(
                (len(vertex_edges[u]) for u in edge_vertices[f] if u != blocker), default=0
            )
            keyed.setdefault(blocker, []).append((-other, f))
    return {v: [f for _, f in sorted(lst)] for v, lst in keyed.items()}


def packing_from_edges(inst: Hypergraph, edges: list[int]) -> Packing:
    """Wrap an explicit list of disjoint edges, computing marks and blocked lists."""
    marked: set[int] = set()
    for f in edges:
        for v in inst.edge_vertices[f]:
            if v in marked:
                raise ValueError(f"edge {f} overlaps the packing at vertex {v}")
            marked.add(v)
    return Packing(list(edges), marked, _blocked_lists(inst, list(edges), marked))


def build_packing(inst: Hypergraph) -> Packing:
    """Greedy packing over edges sorted by their degree sum (ties: lower id)."""
    vertex_edges, edge_vertices = inst.vertex_edges, inst.edge_vertices
    order = sorted(
        inst.active_edges,
        key=lambda f: (sum(len(vertex_edges[v]) for v in edge_vertices[f]), f),
    )
    marked: set[int] = set()
    chosen = []
    for f in order:
        members = edge_vertices[f].to_list()
        if marked.isdisjoint(members):
            marked.update(members)
            chosen.append(f)
    return Packing(chosen, marked, _blocked_lists(inst, chosen, marked))


def packing_bound(p: Packing) -> int:
    return len(p.edges)


def sum_over_packing_bound(inst: Hypergraph, p: Packing) -> int:
    """Sum-degree bound strengthened by a packing.

    Degrees are taken in H minus P.  Since the packing edges are disjoint,
    that is the degree minus one for marked vertices.
    """
    m_rest = inst.num_active_edges - len(p.edges)
    vertex_edges, edge_vertices = inst.vertex_edges, inst.edge_vertices
    covered_by_packing = 0
    excluded = set()
    for f in p.edges:
        best_v, best_d = -1, -1
        for v in edge_vertices[f]:
            d = len(vertex_edges[v])
            if d > best_d:
                best_v, best_d = v, d
        covered_by_packing += best_d - 1
        excluded.add(best_v)
    if covered_by_packing >= m_rest:
        return len(p.edges)
    marked = p.marked
    rest = sorted(
        (
            len(vertex_edges[v]) - (v in marked)
            for v in inst.active_vertices
            if v not in excluded
        ),
        reverse=True,
    )
    return len(p.edges) + _smallest_prefix_reaching(rest, m_rest - covered_by_packing)


def local_search_improve(inst: Hypergraph, p: Packing) -> Packing:
    """Grow a packing by 2-improvements: swap one edge out for two.

    Also inserts edges that conflict with nothing.  Runs until no
    improvement applies.
    """
    edge_vertices = inst.edge_vertices
    edges = list(p.edges)
    while True:
        owner: dict[int, int] = {}
        for f in edges:
            for v in edge_vertices[f]:
                owner[v] = f
        in_packing = set(edges)
        free = []
        candidates: dict[int, list[int]] = {}
        for f in inst.active_edges:
            if f in in_packing:
                continue
            owners = {owner[v] for v in edge_vertices[f] if v in owner}
            if not owners:
                free.append(f)
            elif len(owners) == 1:
                candidates.setdefault(owners.pop(), []).append(f)
        if free:
            used: set[int] = set(owner)
            for f in free:
                members = edge_vertices[f].to_list()
                if used.isdisjoint(members):
                    used.update(members)
                    edges.append(f)
            continue
        improved = False
        for e in edges:
            cands = candidates.get(e, ())
            if len(cands) < 2:
                continue
            sets = [set(edge_vertices[f]) for f in cands]
            for i in range(len(cands)):
                for j in range(i + 1, len(cands)):
                    if sets[i].isdisjoint(sets[j]):
                        edges.remove(e)
                        edges.extend((cands[i], cands[j]))
                        improved = True
                        break
                if improved:
                    break
            if improved:
                break
        if not improved:
            break
    return packing_from_edges(inst, edges)
