"""Branch-and-bound driver and run statistics."""

from __future__ import annotations

import json
import logging
import math
import sys
import time
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Iterable

from . import bounds as B
from . import reductions as R
from .hypergraph import Hypergraph
from .reductions import BOUND_ITEMS, REDUCTION_ITEMS, Infeasible, LoopItem

log = logging.getLogger(__name__)


class GreedyMode(str, Enum):
    OFF = "off"
    ONCE_PER_NODE = "once-per-node"
    EVERY_LOOP = "every-loop"
    BEFORE_EXPENSIVE = "before-expensive"


class LocalSearch(str, Enum):
    OFF = "off"
    ON_PACKING = "on-packing"
    ON_SUM_OVER_PACKING = "on-sum-over-packing"


BOUND_NAMES = tuple(item.value for item in BOUND_ITEMS)
REDUCTION_NAMES = tuple(item.value for item in REDUCTION_ITEMS)
LOOP_ITEM_NAMES = BOUND_NAMES + REDUCTION_NAMES
TIMING_KEYS = ("greedy",) + LOOP_ITEM_NAMES + ("local_search", "other")


@dataclass
class Settings:
    repack_count: int = 3
    greedy_mode: GreedyMode = GreedyMode.ONCE_PER_NODE
    enabled_bounds: frozenset[str] = frozenset(BOUND_NAMES)
    enabled_reductions: frozenset[str] = frozenset(REDUCTION_NAMES)
    local_search: LocalSearch = LocalSearch.OFF
    time_limit: float | None = None
    rng_seed: int = 0
    inclusion_first: bool = True

    def __post_init__(self):
        if self.repack_count < 0:
            raise ValueError("repack_count must be >= 0")
        self.greedy_mode = GreedyMode(self.greedy_mode)
        self.local_search = LocalSearch(self.local_search)
        self.enabled_bounds = frozenset(self.enabled_bounds)
        self.enabled_reductions = frozenset(self.enabled_reductions)
        unknown = (self.enabled_bounds - set(BOUND_NAMES)) | (
            self.enabled_reductions - set(REDUCTION_NAMES)
        )
        if unknown:
            raise ValueError(f"unknown bound/reduction names: {sorted(unknown)}")

    @classmethod
    def only_bounds(cls, names: Iterable[str], **kwargs) -> "Settings":
        return cls(enabled_bounds=frozenset(names), **kwargs)

    def to_dict(self) -> dict:
        return {
            "repack_count": self.repack_count,
            "greedy_mode": self.greedy_mode.value,
            "enabled_bounds": sorted(self.enabled_bounds),
            "enabled_reductions": sorted(self.enabled_reductions),
            "local_search": self.local_search.value,
            "time_limit": self.time_limit,
            "rng_seed": self.rng_seed,
            "inclusion_first": self.inclusion_first,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Settings":
        return cls(**d)


# fields that vary between otherwise identical runs
TIMING_FIELDS = ("runtime_by_operation", "wall_time", "upper_bound_trace_times")


@dataclass
class Report:
    solution: list[int]
    opt_size: int
    complete: bool
    tree_nodes: int = 0
    max_depth: int = 0
    initial_upper_bound: int | None = None
    initial_lower_bound: int | None = None
    prunes_by_bound: dict[str, int] = field(default_factory=dict)
    infeasible_prunes: int = 0
    loop_iterations: int = 0
    loop_reach_counts: dict[str, int] = field(default_factory=dict)
    forced_by_rule: dict[str, int] = field(default_factory=dict)
    removed_by_rule: dict[str, int] = field(default_factory=dict)
    runtime_by_operation: dict[str, float] = field(default_factory=dict)
    wall_time: float = 0.0
    upper_bound_trace: list[int] = field(default_factory=list)
    upper_bound_trace_times: list[float] = field(default_factory=list)
    settings: dict = field(default_factory=dict)
    instance: dict = field(default_factory=dict)

    @property
    def total_prunes(self) -> int:
        return sum(self.prunes_by_bound.values())

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))

    def without_timing(self) -> dict:
        d = self.to_dict()
        for key in TIMING_FIELDS:
            d.pop(key, None)
        return d


def prune_check(picked: int, bound: float, best: float) -> bool:
    return picked + bound >= best


def select_branching_vertex(inst: Hypergraph) -> int:
    """Active vertex of maximum degree, lowest id on ties."""
    vertex_edges = inst.vertex_edges
    best_v, best_d = -1, 0
    for v in inst.active_vertices:
        d = len(vertex_edges[v])
        if d > best_d:
            best_v, best_d = v, d
    if best_v < 0:
        raise ValueError("no active vertex with positive degree; nothing to branch on")
    return best_v


class _Timeout(Exception):
    pass


class _Pruned(Exception):
    pass


class Solver:
    """One branch-and-bound run over a single instance."""

    def __init__(self, inst: Hypergraph, settings: Settings | None = None):
        self.inst = inst
        self.settings = settings or Settings()
        n = inst.num_active_vertices
        self.best = n + 1  # sentinel: no solution recorded yet
        self.best_solution: list[int] | None = None
        self.tree_nodes = 0
        self.max_depth = 0
        self.loop_iterations = 0
        self.infeasible_prunes = 0
        self.prunes = dict.fromkeys(BOUND_NAMES, 0)
        self.reach = dict.fromkeys(LOOP_ITEM_NAMES, 0)
        self.forced = dict.fromkeys(("unit_edge", "costly_discard_efficiency",
                                     "costly_discard_packing_update", "costly_discard_repack"), 0)
        self.removed = dict.fromkeys(("edge_domination", "vertex_domination"), 0)
        self.times = dict.fromkeys(TIMING_KEYS, 0.0)
        self.trace: list[int] = []
        self.trace_times: list[float] = []
        self.initial_upper_bound: int | None = None
        self.initial_lower_bound: int | None = None
        self._t0 = 0.0
        self._deadline = math.inf

    # -- bookkeeping -------------------------------------------------------

    def _record(self, solution: list[int]) -> None:
        if len(solution) < self.best:
            self.best = len(solution)
            self.best_solution = sorted(solution)
            self.trace.append(self.best)
            self.trace_times.append(time.perf_counter() - self._t0)
            log.debug("new incumbent of size %d", self.best)

    def _incumbent(self) -> float:
        return math.inf if self.best_solution is None else self.best

    def _run_greedy(self, partial: list[int]) -> None:
        t = time.perf_counter()
        g = B.greedy_upper_bound(self.inst)
        self.times["greedy"] += time.perf_counter() - t
        if len(partial) + len(g) < self.best:
            self._record(partial + g)

    def _check_time(self) -> None:
        if time.perf_counter() > self._deadline:
            raise _Timeout

    # -- search ------------------------------------------------------------

    def solve(self) -> Report:
        inst = self.inst
        self._t0 = time.perf_counter()
        if self.settings.time_limit is not None:
            self._deadline = self._t0 + self.settings.time_limit
        mark = inst.journal_mark()
        complete = True
        old_limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old_limit, 4 * inst.num_vertices_total + 1000))
        try:
            if inst.num_active_edges > 0:
                self.initial_lower_bound = self._root_lower_bound()
            self._node([], 0)
        except _Timeout:
            complete = False
            log.info("time limit reached; returning incumbent of size %d", self.best)
        finally:
            inst.rollback_to(mark)
            sys.setrecursionlimit(old_limit)
        wall = time.perf_counter() - self._t0
        self.times["other"] = max(0.0, wall - sum(v for k, v in self.times.items() if k != "other"))
        if self.best_solution is None:
            # only reachable on timeout before any leaf with greedy disabled
            self.best_solution = list(inst.active_vertices)
            self.best = len(self.best_solution)
        return Report(
            solution=self.best_solution,
            opt_size=self.best,
            complete=complete,
            tree_nodes=self.tree_nodes,
            max_depth=self.max_depth,
            initial_upper_bound=self.initial_upper_bound,
            initial_lower_bound=self.initial_lower_bound,
            prunes_by_bound=dict(self.prunes),
            infeasible_prunes=self.infeasible_prunes,
            loop_iterations=self.loop_iterations,
            loop_reach_counts=dict(self.reach),
            forced_by_rule=dict(self.forced),
            removed_by_rule=dict(self.removed),
            runtime_by_operation=dict(self.times),
            wall_time=wall,
            upper_bound_trace=list(self.trace),
            upper_bound_trace_times=list(self.trace_times),
            settings=self.settings.to_dict(),
            instance={
                "num_vertices": inst.num_vertices_total,
                "num_edges": inst.num_edges_total,
                "size": inst.total_size,
            },
        )

    def _root_lower_bound(self) -> int:
        inst = self.inst
        lb = B.max_degree_bound(inst)
        lb = max(lb, B.compute_efficiency(inst).bound)
        lb = max(lb, B.sum_over_packing_bound(inst, B.build_packing(inst)))
        return lb

    def _node(self, partial: list[int], depth: int) -> None:
        self._check_time()
        self.tree_nodes += 1
        self.max_depth = max(self.max_depth, depth)
        inst = self.inst
        mark = inst.journal_mark()
        entry_len = len(partial)
        try:
            if self.settings.greedy_mode is GreedyMode.ONCE_PER_NODE:
                self._run_greedy(partial)
                if self.initial_upper_bound is None:
                    self.initial_upper_bound = self.best
            try:
                self._reduction_loop(partial)
            except (_Pruned, Infeasible):
                return
            if inst.num_active_edges == 0:
                self._record(partial)
                return
            v = select_branching_vertex(inst)
            branches = (self._include, self._exclude)
            if not self.settings.inclusion_first:
                branches = branches[::-1]
            for branch in branches:
                branch(v, partial, depth)
        finally:
            inst.rollback_to(mark)
            del partial[entry_len:]

    def _include(self, v: int, partial: list[int], depth: int) -> None:
        inst = self.inst
        mark = inst.journal_mark()
        inst.select_vertex(v)
        partial.append(v)
        try:
            self._node(partial, depth + 1)
        finally:
            partial.pop()
            inst.rollback_to(mark)

    def _exclude(self, v: int, partial: list[int], depth: int) -> None:
        inst = self.inst
        edge_vertices = inst.edge_vertices
        for f in inst.vertex_edges[v]:
            if len(edge_vertices[f]) == 1:
                # discarding v would empty this edge
                self.infeasible_prunes += 1
                return
        mark = inst.journal_mark()
        inst.discard_vertex(v)
        try:
            self._node(partial, depth + 1)
        finally:
            inst.rollback_to(mark)

    def _timed(self, key: str, fn, *args):
        t = time.perf_counter()
        try:
            return fn(*args)
        finally:
            self.times[key] += time.perf_counter() - t

    def _bound_prune(self, name: str, value: float, picked: int) -> None:
        if prune_check(picked, value, self.best):
            self.prunes[name] += 1
            raise _Pruned

    def _reduction_loop(self, partial: list[int]) -> None:
        inst = self.inst
        s = self.settings
        bounds_on = s.enabled_bounds
        red_on = s.enabled_reductions
        while inst.num_active_edges > 0:
            self._check_time()
            self.loop_iterations += 1
            if s.greedy_mode is GreedyMode.EVERY_LOOP:
                self._run_greedy(partial)
                if self.initial_upper_bound is None:
                    self.initial_upper_bound = self.best
            picked = len(partial)
            eff = None
            packing = None

            if "max_degree" in bounds_on:
                self.reach["max_degree"] += 1
                b = self._timed("max_degree", B.max_degree_bound, inst)
                self._bound_prune("max_degree", b, picked)
            if "efficiency" in bounds_on:
                self.reach["efficiency"] += 1
                eff = self._timed("efficiency", B.compute_efficiency, inst)
                self._bound_prune("efficiency", eff.bound, picked)
            if "packing" in bounds_on:
                self.reach["packing"] += 1
                packing = self._timed("packing", self._packing)
                self._bound_prune("packing", len(packing.edges), picked)
            if "sum_over_packing" in bounds_on:
                self.reach["sum_over_packing"] += 1
                sop_packing = packing
                if sop_packing is None:
                    sop_packing = packing = self._timed("packing", self._packing)
                if s.local_search is LocalSearch.ON_SUM_OVER_PACKING:
                    sop_packing = self._timed("local_search", B.local_search_improve, inst, sop_packing)
                b = self._timed("sum_over_packing", B.sum_over_packing_bound, inst, sop_packing)
                self._bound_prune("sum_over_packing", b, picked)

            if "unit_edge" in red_on:
                self.reach["unit_edge"] += 1
                out = self._timed("unit_edge", R.unit_edge_rule, inst, partial)
                if self._applied(out):
                    continue
            if "costly_discard_efficiency" in red_on:
                self.reach["costly_discard_efficiency"] += 1
                if eff is None:
                    eff = self._timed("efficiency", B.compute_efficiency, inst)
                out = self._timed("costly_discard_efficiency", R.costly_discard_efficiency,
                                  inst, partial, self._incumbent(), eff)
                if self._applied(out):
                    continue
            if "costly_discard_packing_update" in red_on:
                self.reach["costly_discard_packing_update"] += 1
                if packing is None:
                    packing = self._timed("packing", self._packing)
                out = self._timed("costly_discard_packing_update", R.costly_discard_packing_update,
                                  inst, packing, partial, self._incumbent())
                if self._applied(out):
                    continue
            if s.greedy_mode is GreedyMode.BEFORE_EXPENSIVE:
                self._run_greedy(partial)
                if self.initial_upper_bound is None:
                    self.initial_upper_bound = self.best
            if "costly_discard_repack" in red_on:
                self.reach["costly_discard_repack"] += 1
                out = self._timed("costly_discard_repack", R.costly_discard_repack,
                                  inst, partial, self._incumbent(), s.repack_count)
                if self._applied(out):
                    continue
            if "edge_domination" in red_on:
                self.reach["edge_domination"] += 1
                out = self._timed("edge_domination", R.edge_domination_rule, inst)
                if self._applied(out):
                    continue
            if "vertex_domination" in red_on:
                self.reach["vertex_domination"] += 1
                out = self._timed("vertex_domination", R.vertex_domination_rule, inst)
                if self._applied(out):
                    continue
            break

    def _packing(self) -> B.Packing:
        p = B.build_packing(self.inst)
        if self.settings.local_search is LocalSearch.ON_PACKING:
            t = time.perf_counter()
            p = B.local_search_improve(self.inst, p)
            # local search time is booked separately from packing construction
            dt = time.perf_counter() - t
            self.times["local_search"] += dt
            self.times["packing"] -= dt
        return p

    def _applied(self, out: R.ReductionOutcome) -> bool:
        if not out.applied:
            return False
        name = out.rule.value
        if name in self.forced:
            self.forced[name] += len(out.forced_vertices)
        if name in self.removed:
            self.removed[name] += out.removed
        return True


def solve(inst: Hypergraph, settings: Settings | None = None) -> Report:
    """Minimum hitting set of the current state of ``inst``.

    The instance is back in its entry state when this returns.
    """
    return Solver(inst, settings).solve()
