"""Instance files, generators and the brute-force oracle.

Instance files are JSON documents with two fields::

    {"num_vertices": 3, "edges": [[0, 1], [0, 2], [1, 2]]}

Vertex ids are integers in ``[0, num_vertices)``; every edge is non-empty.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .hypergraph import Hypergraph, InfeasibleInstanceError, InstanceFormatError


@dataclass
class InstanceFile:
    num_vertices: int
    edges: list[list[int]]

    def to_json(self) -> str:
        # one edge per line keeps files diffable and hand-editable
        lines = ",\n    ".join(json.dumps(e) for e in self.edges)
        body = f"\n    {lines}\n  " if self.edges else ""
        return f'{{\n  "num_vertices": {self.num_vertices},\n  "edges": [{body}]\n}}\n'

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    def build(self) -> Hypergraph:
        return Hypergraph(self.edges, self.num_vertices)

    @classmethod
    def from_hypergraph(cls, inst: Hypergraph) -> "InstanceFile":
        return cls(inst.num_vertices_total, inst.original_edges())


def _locate(text: str, needle_index: int) -> str:
    """Best-effort line number of the ``needle_index``-th edge in the raw text."""
    pos = text.find('"edges"')
    if pos < 0:
        return ""
    depth = 0
    count = -1
    for i in range(text.index("[", pos), len(text)):
        c = text[i]
        if c == "[":
            depth += 1
            if depth == 2:
                count += 1
                if count == needle_index:
                    return f"line {text.count(chr(10), 0, i) + 1}: "
        elif c == "]":
            depth -= 1
            if depth == 0:
                break
    return ""


def loads_instance(text: str, source: str = "<string>") -> InstanceFile:
    """Parse and validate instance text; errors name the offending field."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(
            f"{source}: line {exc.lineno}, column {exc.colno}: malformed JSON: {exc.msg}"
        ) from None
    if not isinstance(doc, dict):
        raise InstanceFormatError(f"{source}: top level must be an object")
    for key in ("num_vertices", "edges"):
        if key not in doc:
            raise InstanceFormatError(f"{source}: missing field {key!r}")
    n = doc["num_vertices"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise InstanceFormatError(f"{source}: field 'num_vertices' must be a non-negative integer")
    edges = doc["edges"]
    if not isinstance(edges, list):
        raise InstanceFormatError(f"{source}: field 'edges' must be a list")
    for i, edge in enumerate(edges):
        where = f"{source}: {_locate(text, i)}edges[{i}]"
        if not isinstance(edge, list):
            raise InstanceFormatError(f"{where}: edge must be a list of vertex ids")
        if not edge:
            raise InfeasibleInstanceError(f"{where}: empty edge: instance infeasible")
        for j, v in enumerate(edge):
            if not isinstance(v, int) or isinstance(v, bool):
                raise InstanceFormatError(f"{where}[{j}]: vertex id {v!r} is not an integer")
            if not 0 <= v < n:
                raise InstanceFormatError(
                    f"{where}[{j}]: vertex id out of range: {v} not in [0, {n})"
                )
    return InstanceFile(n, [list(e) for e in edges])


def read_instance(path: str | Path) -> InstanceFile:
    path = Path(path)
    return loads_instance(path.read_text(encoding="utf-8"), str(path))


def parse_instance(path: str | Path) -> Hypergraph:
    return read_instance(path).build()


def generate_random(
    n: int, m: int, min_size: int, max_size: int, seed: int | None = None
) -> InstanceFile:
    """``m`` edges, each of uniform size in ``[min_size, max_size]`` over uniform vertices."""
    if n <= 0 or m <= 0:
        raise ValueError("n and m must be positive")
    if not 1 <= min_size <= max_size:
        raise ValueError("need 1 <= min_size <= max_size")
    if max_size > n:
        raise ValueError(f"max_size {max_size} exceeds number of vertices {n}")
    rng = random.Random(seed)
    edges = []
    for _ in range(m):
        size = rng.randint(min_size, max_size)
        edges.append(sorted(rng.sample(range(n), size)))
    return InstanceFile(n, edges)


def appendix_family(k: int, n: int) -> InstanceFile:
    """Instance family separating the efficiency and packing-based bounds.

    Vertices: ``n`` hubs; for every center edge ``k`` link vertices, each
    shared with one left edge; and one vertex per pair of left edges.

    * center edge ``i``: hub ``i`` plus its ``k`` link vertices (pairwise disjoint)
    * right edges (``n`` of them): all hubs, so every hub has degree ``n + 1``
    * left edges (``k * n``): one link vertex each, and every two left edges
      share a private vertex of degree two

    Edge order: center, right, left.
    """
    if k < 0 or n < 1:
        raise ValueError("need k >= 0 and n >= 1")
    hubs = list(range(n))
    next_id = n
    links = []
    for _ in range(n):
        links.append(list(range(next_id, next_id + k)))
        next_id += k
    num_left = k * n
    left = [[links[j // k][j % k]] if k else [] for j in range(num_left)]
    for a, b in itertools.combinations(range(num_left), 2):
        left[a].append(next_id)
        left[b].append(next_id)
        next_id += 1
    center = [[hubs[i]] + links[i] for i in range(n)]
    right = [list(hubs) for _ in range(n)]
    edges = center + right + [sorted(e) for e in left]
    return InstanceFile(next_id, edges)


def verify(edges: Iterable[Iterable[int]], solution: Iterable[int]) -> bool:
    """Does ``solution`` hit every edge?"""
    chosen = set(solution)
    return all(not chosen.isdisjoint(e) for e in edges)


def verify_instance(inst: Hypergraph, solution: Iterable[int]) -> bool:
    return verify(inst.edges(), solution)


class OracleRefused(ValueError):
    pass


def brute_force_oracle(
    edges: Sequence[Iterable[int]], n: int, cap: int = 20
) -> tuple[int, list[int]]:
    """Exact optimum by enumerating vertex subsets in order of increasing size.

    Only vertices occurring in some edge are enumerated.
    """
    if n > cap:
        raise OracleRefused(f"oracle refuses instances with more than {cap} vertices (got {n})")
    masks = []
    for e in edges:
        mask = 0
        for v in e:
            mask |= 1 << v
        if mask == 0:
            raise InfeasibleInstanceError("empty edge: instance infeasible")
        masks.append(mask)
    if not masks:
        return 0, []
    used = sorted({v for e in edges for v in e})
    for size in range(1, len(used) + 1):
        for combo in itertools.combinations(used, size):
            chosen = 0
            for v in combo:
                chosen |= 1 << v
            if all(mask & chosen for mask in masks):
                return size, list(combo)
    raise AssertionError("unreachable: the set of all used vertices is a hitting set")


def oracle_for(inst: Hypergraph, cap: int = 20) -> tuple[int, list[int]]:
    """Oracle on the current (possibly reduced) state of ``inst``."""
    return brute_force_oracle(inst.edges(), inst.num_vertices_total, cap)
