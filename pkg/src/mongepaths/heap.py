# Addressable pairing heap used as the priority queue of every structure.

from __future__ import annotations

import math
from typing import Hashable


class _Node:
    __slots__ = ("item", "key", "child", "sibling", "prev")

    def __init__(self, item, key):
        self.item = item
        self.key = key
        self.child = None
        self.sibling = None
        self.prev = None  # parent if leftmost child, else left sibling


def _link(a: _Node, b: _Node) -> _Node:
    if b.key < a.key:
        a, b = b, a
    b.prev = a
    b.sibling = a.child
    if a.child is not None:
        a.child.prev = b
    a.child = b
    return a


class PairingHeap:
    """Min-heap over distinct hashable items with decrease-key.

    ``decrease_key`` is a no-op when the new key is not smaller than the
    current one, so callers can relax unconditionally.
    """

    def __init__(self):
        self._root: _Node | None = None
        self._nodes: dict[Hashable, _Node] = {}
        self.ops = 0

    def __len__(self):
        return len(self._nodes)

    def __contains__(self, item):
        return item in self._nodes

    def __bool__(self):
        return self._root is not None

    def key(self, item):
        return self._nodes[item].key

    def insert(self, item, key) -> None:
        if item in self._nodes:
            raise KeyError(f"{item!r} already queued")
        self.ops += 1
        node = _Node(item, key)
        self._nodes[item] = node
        self._root = node if self._root is None else _link(self._root, node)

    def min_key(self):
        return math.inf if self._root is None else self._root.key

    def peek(self):
        if self._root is None:
            raise IndexError("peek into an empty heap")
        return self._root.item, self._root.key

    def decrease_key(self, item, key) -> bool:
        node = self._nodes[item]
        if not key < node.key:
            return False
        self.ops += 1
        node.key = key
        if node is self._root:
            return True
        # cut the subtree rooted at node and meld it with the root
        if node.prev.child is node:
            node.prev.child = node.sibling
        else:
            node.prev.sibling = node.sibling
        if node.sibling is not None:
            node.sibling.prev = node.prev
        node.sibling = node.prev = None
        self._root = _link(self._root, node)
        return True

    def push_or_decrease(self, item, key) -> None:
        if item in self._nodes:
            self.decrease_key(item, key)
        else:
            self.insert(item, key)

    def extract_min(self):
        root = self._root
        if root is None:
            raise IndexError("extract from an empty heap")
        self.ops += 1
        del self._nodes[root.item]
        self._root = self._merge_pairs(root.child)
        if self._root is not None:
            self._root.prev = None
            self._root.sibling = None
        return root.item, root.key

    @staticmethod
    def _merge_pairs(first: _Node | None) -> _Node | None:
        if first is None:
            return None
        # left-to-right pairing pass, then right-to-left accumulation
        pairs = []
        node = first
        while node is not None:
            a = node
            b = node.sibling
            node = b.sibling if b is not None else None
            a.sibling = a.prev = None
            if b is not None:
                b.sibling = b.prev = None
                a = _link(a, b)
            pairs.append(a)
        acc = pairs.pop()
        while pairs:
            acc = _link(pairs.pop(), acc)
        return acc

    def items(self):
        return ((item, n.key) for item, n in self._nodes.items())
