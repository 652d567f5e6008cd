"""Shared corpus and independent oracles for the test suite."""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

from hittingset.instances import InstanceFile, brute_force_oracle, generate_random

CORPUS_SIZE = 1000


def corpus_instance(seed: int) -> InstanceFile:
    """Seeded random instance with n <= 12, m <= 20 and edge sizes 2..5."""
    rng = random.Random(10_000 + seed)
    n = rng.randint(5, 12)
    m = rng.randint(1, 20)
    return generate_random(n, m, 2, 5, seed=seed)


@lru_cache(maxsize=None)
def corpus_with_opt() -> tuple[tuple[InstanceFile, int], ...]:
    out = []
    for seed in range(CORPUS_SIZE):
        inst = corpus_instance(seed)
        opt, _ = brute_force_oracle(inst.edges, inst.num_vertices)
        out.append((inst, opt))
    return tuple(out)


def max_packing_size(edges: list[list[int]]) -> int:
    """Largest set of pairwise disjoint edges, by exhaustive search."""
    sets = [frozenset(e) for e in edges]
    best = 0

    def grow(start: int, used: frozenset, size: int) -> None:
        nonlocal best
        best = max(best, size)
        if size + len(sets) - start <= best:
            return
        for i in range(start, len(sets)):
            if used.isdisjoint(sets[i]):
                grow(i + 1, used | sets[i], size + 1)

    grow(0, frozenset(), 0)
    return best


def naive_min_hitting_set(edges: list[list[int]], n: int) -> int:
    """Minimum over all 2^n subsets; independent of the oracle's search order."""
    best = n + 1
    for mask in range(1 << n):
        if all(any(mask >> v & 1 for v in e) for e in edges):
            best = min(best, bin(mask).count("1"))
    return best if edges else 0


def all_packings(edges: list[list[int]]):
    """Every set of pairwise disjoint edge indices (small inputs only)."""
    sets = [set(e) for e in edges]
    for r in range(len(edges) + 1):
        for combo in itertools.combinations(range(len(edges)), r):
            used: set[int] = set()
            ok = True
            for i in combo:
                if not used.isdisjoint(sets[i]):
                    ok = False
                    break
                used |= sets[i]
            if ok:
                yield list(combo)
