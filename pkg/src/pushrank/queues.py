"""Scheduling queues for the push loop."""
from __future__ import annotations

from collections import deque


class IndexedMaxHeap:
    """Binary max-heap of nodes keyed by a float priority, with a position index.

    The index lets a queued node's priority change in place in O(log q).
    Among equal priorities the smaller node id comes out first.  Internally
    entries are ``(-priority, node)`` tuples in a min-heap.
    """

    __slots__ = ("_heap", "_pos", "ops")

    def __init__(self):
        self._heap: list[tuple[float, int]] = []
        self._pos: dict[int, int] = {}
        self.ops = 0

    def __len__(self) -> int:
        return len(self._heap)

    def __bool__(self) -> bool:
        return bool(self._heap)

    def __contains__(self, node: object) -> bool:
        return node in self._pos

    def nodes(self) -> list[int]:
        return [node for _, node in self._heap]

    def priority(self, node: int) -> float:
        return -self._heap[self._pos[node]][0]

    def peek(self) -> tuple[int, float]:
        key, node = self._heap[0]
        return node, -key

    def push(self, node: int, priority: float) -> None:
        """Insert ``node`` or move it to ``priority`` if already queued."""
        self.ops += 1
        entry = (-priority, node)
        pos = self._pos.get(node)
        if pos is None:
            self._heap.append(entry)
            self._sift_up(len(self._heap) - 1, entry)
            return
        old = self._heap[pos]
        if entry < old:
            self._sift_up(pos, entry)
        else:
            self._sift_down(pos, entry)

    def pop(self) -> int:
        if not self._heap:
            raise IndexError("pop from an empty heap")
        self.ops += 1
        heap = self._heap
        node = heap[0][1]
        del self._pos[node]
        last = heap.pop()
        if heap:
            self._sift_down(0, last)
        return node

    def remove(self, node: int) -> None:
        self.ops += 1
        heap = self._heap
        pos = self._pos.pop(node)
        last = heap.pop()
        if pos == len(heap):
            return
        if last < heap[pos]:
            self._sift_up(pos, last)
        else:
            self._sift_down(pos, last)

    def _sift_up(self, pos: int, entry: tuple[float, int]) -> None:
        heap, index = self._heap, self._pos
        while pos > 0:
            parent = (pos - 1) >> 1
            above = heap[parent]
            if entry < above:
                heap[pos] = above
                index[above[1]] = pos
                pos = parent
            else:
                break
        heap[pos] = entry
        index[entry[1]] = pos

    def _sift_down(self, pos: int, entry: tuple[float, int]) -> None:
        heap, index = self._heap, self._pos
        size = len(heap)
        child = 2 * pos + 1
        while child < size:
            right = child + 1
            if right < size and heap[right] < heap[child]:
                child = right
            below = heap[child]
            if below < entry:
                heap[pos] = below
                index[below[1]] = pos
                pos = child
                child = 2 * pos + 1
            else:
                break
        heap[pos] = entry
        index[entry[1]] = pos


class FifoQueue:
    """First-in first-out queue that refuses nodes already waiting in it."""

    __slots__ = ("_order", "_members", "ops")

    def __init__(self):
        self._order: deque[int] = deque()
        self._members: set[int] = set()
        self.ops = 0

    def __len__(self) -> int:
        return len(self._members)

    def __bool__(self) -> bool:
        return bool(self._members)

    def __contains__(self, node: object) -> bool:
        return node in self._members

    def nodes(self) -> list[int]:
        return list(self._order)

    def push(self, node: int, priority: float = 0.0) -> bool:
        """Enqueue ``node`` unless it is already queued; ``priority`` is ignored."""
        if node in self._members:
            return False
        self.ops += 1
        self._members.add(node)
        self._order.append(node)
        return True

    def pop(self) -> int:
        if not self._order:
            raise IndexError("pop from an empty queue")
        self.ops += 1
        node = self._order.popleft()
        self._members.remove(node)
        return node

    def remove(self, node: int) -> None:
        # O(q), only used when a node is pushed out of turn
        self.ops += 1
        self._members.remove(node)
        self._order.remove(node)
