"""Mutable hypergraph with reversible deletions.

The solver keeps a single instance for the whole search.  Every change goes
through :class:`Hypergraph` and is recorded on one shared journal, so any
earlier state can be restored by rolling back to a mark.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence


class InstanceError(ValueError):
    """Base class for invalid hitting set instances."""


class InfeasibleInstanceError(InstanceError):
    """The instance contains an empty edge, so no hitting set exists."""


class InstanceFormatError(InstanceError):
    """Malformed instance data (bad ids, wrong types)."""


class OrderedSubsetList:
    """Subset of a fixed ascending ground sequence with O(1) delete and undo.

    Elements live in a doubly linked list laid out over two index arrays.
    Deleting unlinks a node but leaves its own pointers untouched, so it can
    be relinked in place as long as undos happen in LIFO order.
    """

    __slots__ = ("_items", "_index", "_prev", "_next", "_alive", "_deleted", "_size")

    def __init__(self, elements: Iterable[int] = ()):
        items = sorted(set(elements))
        n = len(items)
        self._items = [0] + items + [0]
        self._index = {x: i + 1 for i, x in enumerate(items)}
        # node 0 is the head sentinel, node n + 1 the tail sentinel
        self._prev = list(range(-1, n + 1))
        self._next = list(range(1, n + 3))
        self._alive = [False] + [True] * n + [False]
        self._deleted: list[int] = []
        self._size = n

    def __len__(self) -> int:
        return self._size

    def __contains__(self, x: int) -> bool:
        i = self._index.get(x)
        return i is not None and self._alive[i]

    def __iter__(self) -> Iterator[int]:
        items, nxt = self._items, self._next
        end = len(items) - 1
        i = nxt[0]
        while i != end:
            yield items[i]
            i = nxt[i]

    def iterrev(self) -> Iterator[int]:
        items, prev = self._items, self._prev
        i = prev[len(items) - 1]
        while i != 0:
            yield items[i]
            i = prev[i]

    def to_list(self) -> list[int]:
        return list(self)

    def ground(self) -> list[int]:
        """The full ground sequence, deleted elements included."""
        return self._items[1:-1]

    def first(self) -> int:
        i = self._next[0]
        if i == len(self._items) - 1:
            raise IndexError("first() on empty OrderedSubsetList")
        return self._items[i]

    def delete(self, x: int) -> None:
        i = self._index[x]
        if not self._alive[i]:
            raise KeyError(f"{x} already deleted")
        p, n = self._prev[i], self._next[i]
        self._next[p] = n
        self._prev[n] = p
        self._alive[i] = False
        self._deleted.append(i)
        self._size -= 1

    def undo(self) -> int:
        """Reinsert the most recently deleted element and return it."""
        i = self._deleted.pop()
        p, n = self._prev[i], self._next[i]
        self._next[p] = i
        self._prev[n] = i
        self._alive[i] = True
        self._size += 1
        return self._items[i]

    @property
    def num_deleted(self) -> int:
        return len(self._deleted)

    def __repr__(self) -> str:
        return f"OrderedSubsetList({self.to_list()!r})"


_VERTEX = 0
_EDGE = 1


class Hypergraph:
    """Current instance: vertex lists per edge, edge lists per vertex.

    Vertex ids are ``0..num_vertices_total-1`` and edge ids
    ``0..num_edges_total-1`` in input order.  A discarded vertex keeps its
    edge list frozen (and an deleted edge its vertex list), which is what
    lets rollback relink everything in place.
    """

    def __init__(self, edges: Sequence[Iterable[int]], num_vertices: int):
        if num_vertices < 0:
            raise InstanceFormatError("number of vertices must be non-negative")
        edge_sets: list[list[int]] = []
        for f, edge in enumerate(edges):
            edge = list(edge)
            for v in edge:
                if not isinstance(v, int) or isinstance(v, bool):
                    raise InstanceFormatError(f"edge {f}: vertex id {v!r} is not an integer")
                if v < 0 or v >= num_vertices:
                    raise InstanceFormatError(
                        f"edge {f}: vertex id {v} out of range [0, {num_vertices})"
                    )
            if not edge:
                raise InfeasibleInstanceError(f"empty edge {f}: instance infeasible")
            edge_sets.append(sorted(set(edge)))

        incident: list[list[int]] = [[] for _ in range(num_vertices)]
        for f, members in enumerate(edge_sets):
            for v in members:
                incident[v].append(f)

        self.num_vertices_total = num_vertices
        self.num_edges_total = len(edge_sets)
        self.edge_vertices = [OrderedSubsetList(members) for members in edge_sets]
        self.vertex_edges = [OrderedSubsetList(fs) for fs in incident]
        self.active_vertices = OrderedSubsetList(range(num_vertices))
        self.active_edges = OrderedSubsetList(range(len(edge_sets)))
        self.journal: list[tuple[int, int]] = []
        self.total_size = sum(len(m) for m in edge_sets)

    @classmethod
    def build(cls, edges: Sequence[Iterable[int]], n: int) -> "Hypergraph":
        return cls(edges, n)

    # -- queries -----------------------------------------------------------

    def degree(self, v: int) -> int:
        return len(self.vertex_edges[v])

    def edge_size(self, f: int) -> int:
        return len(self.edge_vertices[f])

    @property
    def num_active_vertices(self) -> int:
        return len(self.active_vertices)

    @property
    def num_active_edges(self) -> int:
        return len(self.active_edges)

    def is_vertex_active(self, v: int) -> bool:
        return v in self.active_vertices

    def is_edge_active(self, f: int) -> bool:
        return f in self.active_edges

    def edges(self) -> list[list[int]]:
        """Vertex lists of all active edges, in edge id order."""
        return [self.edge_vertices[f].to_list() for f in self.active_edges]

    def original_edges(self) -> list[list[int]]:
        return [ev.ground() for ev in self.edge_vertices]

    def snapshot(self) -> tuple:
        """Full serialization of the live state, for equality checks."""
        return (
            tuple(self.active_vertices),
            tuple(self.active_edges),
            tuple(tuple(ev) for ev in self.edge_vertices),
            tuple(tuple(ve) for ve in self.vertex_edges),
            self.total_size,
            len(self.journal),
        )

    # -- modifications -----------------------------------------------------

    def discard_vertex(self, v: int) -> None:
        """Remove ``v`` from the instance and from every edge containing it."""
        for f in self.vertex_edges[v]:
            self.edge_vertices[f].delete(v)
        self.active_vertices.delete(v)
        self.total_size -= len(self.vertex_edges[v])
        self.journal.append((_VERTEX, v))

    def delete_edge(self, f: int) -> None:
        for v in self.edge_vertices[f]:
            self.vertex_edges[v].delete(f)
        self.active_edges.delete(f)
        self.total_size -= len(self.edge_vertices[f])
        self.journal.append((_EDGE, f))

    def select_vertex(self, v: int) -> None:
        """Put ``v`` into the solution: delete its edges, then ``v`` itself."""
        for f in self.vertex_edges[v].to_list():
            self.delete_edge(f)
        self.discard_vertex(v)

    def journal_mark(self) -> int:
        return len(self.journal)

    def rollback_to(self, mark: int) -> None:
        journal = self.journal
        if mark < 0 or mark > len(journal):
            raise RuntimeError(f"stale journal mark {mark} (journal length {len(journal)})")
        edge_vertices, vertex_edges = self.edge_vertices, self.vertex_edges
        while len(journal) > mark:
            kind, x = journal.pop()
            if kind == _VERTEX:
                self.active_vertices.undo()
                edges = vertex_edges[x]
                for f in edges:
                    edge_vertices[f].undo()
                self.total_size += len(edges)
            else:
                self.active_edges.undo()
                verts = edge_vertices[x]
                for v in verts:
                    vertex_edges[v].undo()
                self.total_size += len(verts)

    def __repr__(self) -> str:
        return (
            f"Hypergraph(n={self.num_vertices_total}, m={self.num_edges_total}, "
            f"active_vertices={self.num_active_vertices}, active_edges={self.num_active_edges})"
        )


def build(edges: Sequence[Iterable[int]], n: int) -> Hypergraph:
    return Hypergraph(edges, n)
