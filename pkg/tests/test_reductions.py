import math

import pytest

from hittingset import bounds as B
from hittingset import reductions as R
from hittingset.hypergraph import Hypergraph
from hittingset.instances import verify

from helpers import corpus_instance, max_packing_size, naive_min_hitting_set


def naive_edge_domination(edges):
    """Indices surviving pairwise inclusion; of equal edges the first survives."""
    keep = []
    for i, e in enumerate(edges):
        dominated = False
        for j, f in enumerate(edges):
            if j == i:
                continue
            if set(f) < set(e) or (set(f) == set(e) and j < i):
                dominated = True
                break
        if not dominated:
            keep.append(i)
    return keep


def incidence(edges, n):
    inc = {v: set() for v in range(n)}
    for i, e in enumerate(edges):
        for v in e:
            inc[v].add(i)
    return inc


def naive_undominated_vertex_sets(edges, n):
    """Distinct edge sets of vertices that no other vertex strictly dominates."""
    inc = incidence(edges, n)
    out = set()
    for v, fs in inc.items():
        if not fs:
            continue
        if any(fs < gs for u, gs in inc.items() if u != v):
            continue
        out.add(frozenset(fs))
    return out


# -- unit edge ----------------------------------------------------------------------


def test_unit_edge_picks_vertex():
    h = Hypergraph([[5]], 6)
    partial = []
    out = R.unit_edge_rule(h, partial)
    assert out.applied and out.forced_vertices == [5] and partial == [5]
    assert h.num_active_edges == 0


def test_unit_edge_not_applicable_on_triangle():
    out = R.unit_edge_rule(Hypergraph([[0, 1], [0, 2], [1, 2]], 3), [])
    assert not out.applied and out.forced_vertices == []


def test_unit_edge_removes_all_edges_of_vertex():
    h = Hypergraph([[0], [0, 1]], 2)
    R.unit_edge_rule(h, [])
    assert h.num_active_edges == 0


def test_unit_edge_signals_empty_edge():
    h = Hypergraph([[1], [0, 1]], 2)
    h.discard_vertex(1)
    with pytest.raises(R.Infeasible):
        R.unit_edge_rule(h, [])


# -- edge domination ---------------------------------------------------------------------


def test_edge_domination_superset_deleted():
    h = Hypergraph([[0, 1], [0, 1, 2]], 3)
    out = R.edge_domination_rule(h)
    assert out.applied and out.removed == 1
    assert h.edges() == [[0, 1]]


def test_edge_domination_duplicate_later_deleted():
    h = Hypergraph([[0, 2], [0, 2]], 3)
    R.edge_domination_rule(h)
    assert list(h.active_edges) == [0]


@pytest.mark.parametrize("seed", range(200))
def test_edge_domination_matches_naive(seed):
    inst = corpus_instance(seed)
    h = inst.build()
    R.edge_domination_rule(h)
    assert list(h.active_edges) == naive_edge_domination(inst.edges)
    assert not R.edge_domination_rule(h).applied


# -- vertex domination -----------------------------------------------------------------------


def test_vertex_domination_example():
    h = Hypergraph([[0, 1], [0, 2]], 3)
    out = R.vertex_domination_rule(h)
    assert out.applied
    assert list(h.active_vertices) == [0]
    assert h.edges() == [[0], [0]]


def test_vertex_domination_identical_sets():
    h = Hypergraph([[0, 1, 2], [0, 1, 3]], 4)
    R.vertex_domination_rule(h)
    # 0 and 1 share {e0, e1}; the later one goes, and 2, 3 are dominated by 0
    assert list(h.active_vertices) == [0]


def test_vertex_domination_removes_isolated():
    h = Hypergraph([[0, 1], [1, 2], [0, 2]], 5)
    R.vertex_domination_rule(h)
    assert list(h.active_vertices) == [0, 1, 2]


@pytest.mark.parametrize("seed", range(200))
def test_vertex_domination_matches_naive(seed):
    inst = corpus_instance(seed)
    h = inst.build()
    R.vertex_domination_rule(h)
    remaining = {frozenset(h.vertex_edges[v]) for v in h.active_vertices}
    assert len(remaining) == h.num_active_vertices  # one survivor per equal-set class
    assert remaining == naive_undominated_vertex_sets(inst.edges, inst.num_vertices)
    assert not R.vertex_domination_rule(h).applied


# -- costly discard: efficiency --------------------------------------------------------------


def scratch_discard_efficiency(h, v):
    mark = h.journal_mark()
    h.discard_vertex(v)
    try:
        if any(h.edge_size(f) == 0 for f in h.active_edges):
            return math.inf
        return B.efficiency_bound(h)
    finally:
        h.rollback_to(mark)


def test_costly_discard_efficiency_forces_hub():
    h = Hypergraph([[0, 1], [0, 2], [0, 3], [0, 4]], 5)
    assert B.efficiency_bound(h) == 1
    assert scratch_discard_efficiency(h, 0) == 4
    partial = []
    out = R.costly_discard_efficiency(h, partial, best=2)
    assert out.forced_vertices == [0] and partial == [0]
    assert h.num_active_edges == 0


def test_costly_discard_efficiency_without_incumbent_is_noop():
    h = Hypergraph([[0, 1], [0, 2], [0, 3], [0, 4]], 5)
    assert not R.costly_discard_efficiency(h, [], best=math.inf).applied


def test_discard_efficiency_unit_edge_is_infeasible():
    h = Hypergraph([[0], [0, 1]], 2)
    bounds = R.discard_efficiency_bounds(h, B.compute_efficiency(h))
    assert bounds[0] == math.inf
    assert bounds[1] == scratch_discard_efficiency(h, 1)


@pytest.mark.parametrize("seed", range(300))
def test_discard_efficiency_equals_scratch(seed):
    h = corpus_instance(seed).build()
    bounds = R.discard_efficiency_bounds(h, B.compute_efficiency(h))
    for v in h.active_vertices:
        assert bounds[v] == scratch_discard_efficiency(h, v)


# -- costly discard: packing update ------------------------------------------------------------


def test_packing_update_forces_vertex_blocking_two_edges():
    edges = [[0, 1], [0, 2], [0, 3]]
    h = Hypergraph(edges, 4)
    p = B.build_packing(h)
    assert p.edges == [0] and p.blocked_by == {0: [1, 2]}
    assert R.packing_growth_on_discard(h, p, 0) == 2
    # the grown packing is a real packing of the instance without vertex 0
    assert max_packing_size([[1], [2], [3]]) == 1 + 2
    saved = p.copy()
    partial = []
    out = R.costly_discard_packing_update(h, p, partial, best=3)
    assert out.forced_vertices == [0]
    assert p == saved


def test_packing_update_vertex_blocking_nothing_not_forced():
    h = Hypergraph([[0, 1], [0, 2], [0, 3]], 4)
    p = B.build_packing(h)
    assert R.packing_growth_on_discard(h, p, 1) == 0
    out = R.costly_discard_packing_update(h, p, [], best=3)
    assert 1 not in out.forced_vertices


@pytest.mark.parametrize("seed", range(150))
def test_packing_growth_is_a_valid_packing_of_discarded_instance(seed):
    inst = corpus_instance(seed)
    h = inst.build()
    p = B.build_packing(h)
    saved = p.copy()
    for v in list(h.active_vertices):
        grown = R.packing_growth_on_discard(h, p, v)
        reduced = [[u for u in e if u != v] for e in inst.edges]
        if any(not e for e in reduced):
            assert grown == math.inf
            continue
        assert len(p) + grown <= max_packing_size(reduced)
    assert p == saved


# -- costly discard: repack -------------------------------------------------------------------------


REPACK_WITNESS = [[0, 1], [0, 2], [0, 3], [2, 3]]


def test_repack_forces_where_update_cannot():
    h = Hypergraph(REPACK_WITNESS, 4)
    assert naive_min_hitting_set(REPACK_WITNESS, 4) == 2
    p = B.build_packing(h)
    assert len(p) == 2
    assert R.packing_growth_on_discard(h, p, 0) == 0
    assert not R.costly_discard_packing_update(h, p, [], best=3).applied
    # after discarding 0 the edges {1}, {2}, {3} are disjoint
    assert max_packing_size([[1], [2], [3], [2, 3]]) == 3
    before = h.snapshot()
    assert R.repack_bound_on_discard(h, 0) == 3
    assert h.snapshot() == before
    partial = []
    out = R.costly_discard_repack(h, partial, best=3, c=3)
    assert out.forced_vertices == [0]


def test_repack_c_zero_is_noop():
    h = Hypergraph(REPACK_WITNESS, 4)
    assert not R.costly_discard_repack(h, [], best=3, c=0).applied


def test_repack_probes_restore_instance():
    h = corpus_instance(7).build()
    before = h.snapshot()
    for v in R.highest_degree_vertices(h, 3):
        R.repack_bound_on_discard(h, v)
        assert h.snapshot() == before


# -- safety of every rule ----------------------------------------------------------------------------


def apply_rule(name, h, partial, best):
    if name == "unit_edge":
        return R.unit_edge_rule(h, partial)
    if name == "edge_domination":
        return R.edge_domination_rule(h)
    if name == "vertex_domination":
        return R.vertex_domination_rule(h)
    if name == "costly_discard_efficiency":
        return R.costly_discard_efficiency(h, partial, best)
    if name == "costly_discard_packing_update":
        return R.costly_discard_packing_update(h, B.build_packing(h), partial, best)
    if name == "costly_discard_repack":
        return R.costly_discard_repack(h, partial, best, 3)
    raise KeyError(name)


RULES = [
    "unit_edge",
    "costly_discard_efficiency",
    "costly_discard_packing_update",
    "costly_discard_repack",
    "edge_domination",
    "vertex_domination",
]


@pytest.mark.parametrize("rule", RULES)
@pytest.mark.parametrize("seed", range(120))
def test_rule_preserves_optimum(rule, seed):
    inst = corpus_instance(seed)
    # a unit edge gives the unit rule something to do
    edges = inst.edges + ([[seed % inst.num_vertices]] if seed % 3 == 0 else [])
    n = inst.num_vertices
    opt = naive_min_hitting_set(edges, n)
    h = Hypergraph(edges, n)
    partial = []
    apply_rule(rule, h, partial, best=opt + 1)
    reduced = h.edges()
    assert len(partial) + naive_min_hitting_set(reduced, n) == opt
    # any hitting set of the reduced instance plus the forced vertices hits the original
    for sol_mask in range(0, 1 << n, max(1, (1 << n) // 64)):
        sol = [v for v in range(n) if sol_mask >> v & 1]
        if verify(reduced, sol):
            assert verify(edges, sol + partial)
