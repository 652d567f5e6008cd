"""Set trie over sorted integer sets with subset/superset existence queries."""

from __future__ import annotations

from bisect import insort
from typing import Sequence


class _Node:
    __slots__ = ("children", "keys", "end")

    def __init__(self):
        self.children: dict[int, _Node] = {}
        self.keys: list[int] = []  # ascending child labels
        self.end = False


def _check_ascending(s: Sequence[int]) -> None:
    for a, b in zip(s, s[1:]):
        if a >= b:
            raise ValueError(f"set must be strictly ascending, got {list(s)!r}")


class SetTrie:
    """Trie whose root-to-flagged-node paths are the stored sets.

    Every node lies on the path of some stored set (there is no deletion),
    which the superset query relies on.
    """

    def __init__(self, sets: Sequence[Sequence[int]] = ()):
        self.root = _Node()
        self.num_sets = 0
        self.num_nodes = 1
        for s in sets:
            self.add(s)

    def __len__(self) -> int:
        return self.num_sets

    def add(self, s: Sequence[int], check: bool = True) -> None:
        if check:
            _check_ascending(s)
        node = self.root
        for x in s:
            child = node.children.get(x)
            if child is None:
                child = _Node()
                node.children[x] = child
                insort(node.keys, x)
                self.num_nodes += 1
            node = child
        if not node.end:
            node.end = True
            self.num_sets += 1

    def __contains__(self, s: Sequence[int]) -> bool:
        node = self.root
        for x in s:
            node = node.children.get(x)
            if node is None:
                return False
        return node.end

    def has_subset(self, s: Sequence[int]) -> bool:
        """Is some stored set contained in ``s``?"""
        if self.root.end:
            return True
        n = len(s)
        stack = [(self.root, 0)]
        while stack:
            node, i = stack.pop()
            children = node.children
            for j in range(i, n):
                child = children.get(s[j])
                if child is not None:
                    if child.end:
                        return True
                    stack.append((child, j + 1))
        return False

    def has_superset(self, s: Sequence[int]) -> bool:
        """Is some stored set a superset of ``s``?"""
        n = len(s)
        if n == 0:
            return self.root.end or bool(self.root.children)
        stack = [(self.root, 0)]
        while stack:
            node, i = stack.pop()
            target = s[i]
            for key in node.keys:
                if key > target:
                    break
                child = node.children[key]
                if key == target:
                    if i + 1 == n:
                        return True
                    stack.append((child, i + 1))
                else:
                    stack.append((child, i))
        return False
