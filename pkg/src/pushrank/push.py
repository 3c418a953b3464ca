"""The push algorithm for spectral rankings of substochastic matrices.

The state keeps an approximation ``p`` and a residual ``r`` such that at all
times

    p + (1 - alpha) r (I - alpha M)^-1 == (1 - alpha) v (I - alpha M)^-1

Pushing ``x`` moves ``(1 - alpha) r_x`` into ``p_x``, zeroes ``r_x`` and adds
``alpha r_x m_xy`` to every successor ``y``.  ``||r||_1`` bounds the absolute
l1 error of ``p``; ``||r||_1 / ||p||_1`` bounds the relative error because
``p`` approaches the ranking from below.

Vectors live in Python lists indexed by discovery order, so memory follows
the visited neighbourhood rather than the size of the graph.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .graph import SparseVector, WeightedGraph
from .queues import FifoQueue, IndexedMaxHeap


class Criterion(enum.Enum):
    ABSOLUTE = "abs"
    RELATIVE = "rel"


class QueueKind(enum.Enum):
    PRIORITY = "priority"
    FIFO = "fifo"


@dataclass(frozen=True)
class EngineConfig:
    alpha: float
    epsilon: float
    criterion: Criterion = Criterion.RELATIVE
    queue: QueueKind = QueueKind.PRIORITY
    max_pushes: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError(f"alpha must lie in [0, 1), got {self.alpha}")
        if not self.epsilon > 0.0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.max_pushes is not None and self.max_pushes < 1:
            raise ValueError("max_pushes must be positive")
        object.__setattr__(self, "criterion", Criterion(self.criterion))
        object.__setattr__(self, "queue", QueueKind(self.queue))


@dataclass
class PushStats:
    pushes: int = 0
    arcs_traversed: int = 0
    queue_ops: int = 0
    visited: int = 0


@dataclass
class RankResult:
    p: SparseVector
    p_norm: float
    r_norm: float
    stats: PushStats
    exhausted: bool = False
    trace: list[int] | None = field(default=None, repr=False)

    @property
    def absolute_bound(self) -> float:
        return self.r_norm

    @property
    def relative_bound(self) -> float:
        return bounds_from_norms(self.p_norm, self.r_norm)[1]


def bounds_from_norms(p_norm: float, r_norm: float) -> tuple[float, float]:
    """(absolute, relative) l1 error bounds; relative is inf while ``p`` is empty."""
    r_norm = max(r_norm, 0.0)
    if p_norm == 0.0:
        return r_norm, (0.0 if r_norm == 0.0 else math.inf)
    return r_norm, r_norm / p_norm


def push_threshold(cfg: EngineConfig, p_norm: float, n: int) -> float:
    """Residual level a node must exceed to be worth pushing.

    If every ``r_x`` is at or below it, ``||r||_1 <= eps * ||p||_1`` (relative)
    or ``||r||_1 <= eps`` (absolute).
    """
    if n < 1:
        raise ValueError("n must be positive")
    if cfg.criterion is Criterion.RELATIVE:
        return cfg.epsilon * p_norm / n
    return cfg.epsilon / n


class PushState:
    """Mutable ``(p, r)`` pair plus queue, discovery map and counters.

    ``absorbing`` maps nodes whose ranking is known to the l1 norm of that
    ranking.  Such nodes collect residual but are never queued; for
    convergence their residual counts toward ``p`` (weighted by the norm)
    instead of toward ``r``.  This is the hook the hub and self-hub runs use.
    """

    def __init__(self, graph: WeightedGraph, v: SparseVector, config: EngineConfig, *,
                 absorbing: dict[int, float] | None = None, trace: bool = False):
        if not isinstance(v, SparseVector):
            v = SparseVector(v)
        if len(v) == 0:
            raise ValueError("preference vector is empty")
        if not v.is_distribution():
            raise ValueError(f"preference vector is not a distribution (l1 norm {v.l1!r})")
        if v.max_node() >= graph.n:
            raise ValueError(f"preference vector mentions node {v.max_node()} but n = {graph.n}")
        if not graph.is_substochastic():
            raise ValueError(f"matrix is not substochastic (max row sum {graph.max_row_sum!r})")
        self.graph = graph
        self.config = config
        self.n = graph.n
        self.stats = PushStats()
        self.trace: list[int] | None = [] if trace else None
        self.queue = IndexedMaxHeap() if config.queue is QueueKind.PRIORITY else FifoQueue()
        self._priority = config.queue is QueueKind.PRIORITY

        # discovery order: node <-> local slot
        self._index: dict[int, int] = {}
        self._nodes: list[int] = []
        self._p: list[float] = []
        self._r: list[float] = []
        self._rows: dict[int, tuple[list[int], list[float], float]] = {}

        self._absorbing = dict(absorbing or {})
        self._absorbed_r = 0.0
        self._absorbed_p = 0.0

        self.p_norm = 0.0
        for node, value in v.items():
            self._r[self._touch(node)] = value
            if node in self._absorbing:
                self._absorbed_r += value
                self._absorbed_p += value * self._absorbing[node]
            else:
                self.queue.push(node, value)
        self.r_norm = v.l1

    # -- bookkeeping -------------------------------------------------------

    def _touch(self, node: int) -> int:
        slot = self._index.get(node)
        if slot is None:
            slot = len(self._nodes)
            self._index[node] = slot
            self._nodes.append(node)
            self._p.append(0.0)
            self._r.append(0.0)
        return slot

    def _row(self, x: int) -> tuple[list[int], list[float], float]:
        row = self._rows.get(x)
        if row is None:
            targets, weights = self.graph.successors(x)
            row = self._rows[x] = (targets.tolist(), weights.tolist(), float(self.graph.row_sums[x]))
        return row

    def residual(self, node: int) -> float:
        slot = self._index.get(node)
        return 0.0 if slot is None else self._r[slot]

    def approximation(self, node: int) -> float:
        slot = self._index.get(node)
        return 0.0 if slot is None else self._p[slot]

    @property
    def p(self) -> SparseVector:
        return SparseVector(zip(self._nodes, self._p))

    @property
    def r(self) -> SparseVector:
        return SparseVector(zip(self._nodes, self._r))

    def to_dense(self) -> tuple[np.ndarray, np.ndarray]:
        """``p`` and ``r`` as length-n arrays (for checking against the dense oracle)."""
        nodes = np.array(self._nodes, dtype=np.int64)
        p, r = np.zeros(self.n), np.zeros(self.n)
        p[nodes] = self._p
        r[nodes] = self._r
        return p, r

    @property
    def discovery(self) -> list[int]:
        """Visited nodes in first-touch order (slot ``i`` holds ``discovery[i]``)."""
        return list(self._nodes)

    def recomputed_norms(self) -> tuple[float, float]:
        return math.fsum(self._p), math.fsum(self._r)

    def convergence_norms(self) -> tuple[float, float]:
        """Norms of ``p`` and ``r`` as seen by the stopping rule."""
        return self.p_norm + self._absorbed_p, self.r_norm - self._absorbed_r

    def threshold(self) -> float:
        return push_threshold(self.config, self.convergence_norms()[0], self.n)

    def error_bounds(self) -> tuple[float, float]:
        return bounds_from_norms(*self.convergence_norms())

    # -- the algorithm -----------------------------------------------------

    def select_next(self) -> int | None:
        """Dequeue the next node to push, or ``None`` if nothing passes the threshold."""
        thr = self.threshold()
        queue = self.queue
        if self._priority:
            if queue and queue.peek()[1] > thr:
                return queue.pop()
            return None
        r, index = self._r, self._index
        while queue:
            node = queue.pop()
            if r[index[node]] > thr:
                return node
        return None

    def has_pending(self) -> bool:
        thr = self.threshold()
        if self._priority:
            return bool(self.queue) and self.queue.peek()[1] > thr
        r, index = self._r, self._index
        return any(r[index[x]] > thr for x in self.queue.nodes())

    def push(self, x: int) -> float:
        """Push ``x`` and return the residual that was moved."""
        slot = self._index.get(x)
        rx = 0.0 if slot is None else self._r[slot]
        if not rx > 0.0:
            raise ValueError(f"node {x} has no residual to push")
        queue = self.queue
        if x in queue:
            queue.remove(x)
        alpha = self.config.alpha
        r = self._r
        r[slot] = 0.0
        self._p[slot] += (1.0 - alpha) * rx
        self.p_norm += (1.0 - alpha) * rx
        absorbing = self._absorbing
        if x in absorbing:
            self._absorbed_r -= rx
            self._absorbed_p -= rx * absorbing[x]

        targets, weights, row_sum = self._row(x)
        stats = self.stats
        stats.pushes += 1
        stats.arcs_traversed += len(targets)
        if self.trace is not None:
            self.trace.append(x)

        self.r_norm -= rx
        if alpha > 0.0 and targets:
            scale = alpha * rx
            self.r_norm += scale * row_sum
            thr = self.threshold()
            index = self._index
            priority = self._priority
            for y, w in zip(targets, weights):
                amount = scale * w
                ly = index.get(y)
                if ly is None:
                    ly = self._touch(y)
                ry = r[ly] + amount
                r[ly] = ry
                if y in absorbing:
                    self._absorbed_r += amount
                    self._absorbed_p += amount * absorbing[y]
                elif priority:
                    if ry > thr or y in queue:
                        queue.push(y, ry)
                elif ry > thr:
                    queue.push(y)
        if self.r_norm < 0.0:
            self.r_norm = 0.0
        return rx

    def step(self) -> int | None:
        x = self.select_next()
        if x is not None:
            self.push(x)
        return x

    def run(self) -> bool:
        """Push until nothing passes the threshold; return True if ``max_pushes`` cut it short."""
        limit = self.config.max_pushes
        while True:
            if limit is not None and self.stats.pushes >= limit:
                return self.has_pending()
            x = self.select_next()
            if x is None:
                return False
            self.push(x)

    def _finish_stats(self) -> PushStats:
        self.stats.queue_ops = self.queue.ops
        self.stats.visited = len(self._nodes)
        return self.stats

    def result(self, exhausted: bool = False) -> RankResult:
        p_norm, r_norm = self.recomputed_norms()
        return RankResult(self.p, p_norm, r_norm, self._finish_stats(), exhausted,
                          None if self.trace is None else list(self.trace))


def init(graph: WeightedGraph, v: SparseVector, cfg: EngineConfig, **kwargs) -> PushState:
    return PushState(graph, v, cfg, **kwargs)


def error_bounds(state: PushState) -> tuple[float, float]:
    return state.error_bounds()


def run(graph: WeightedGraph, v: SparseVector, cfg: EngineConfig, *, trace: bool = False) -> RankResult:
    """Approximate ``(1 - alpha) v (I - alpha M)^-1`` by pushing until the criterion holds."""
    state = PushState(graph, v, cfg, trace=trace)
    exhausted = state.run()
    return state.result(exhausted)


__all__ = [
    "Criterion", "QueueKind", "EngineConfig", "PushStats", "RankResult", "PushState",
    "push_threshold", "bounds_from_norms", "error_bounds", "init", "run",
]
