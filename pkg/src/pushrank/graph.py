"""Sparse vectors and immutable arc-weighted digraphs (substochastic matrices).

A :class:`WeightedGraph` stores the matrix ``M`` in compressed row form:
``indptr`` offsets into the packed ``indices``/``weights`` arrays, with the
targets of every row sorted by id.  Rows are row vectors, so ``M[x, y]`` is
the weight of the arc ``x -> y``.
"""
from __future__ import annotations

import hashlib
import math
from collections import deque
from typing import Iterable, Iterator, Mapping

import numpy as np

#: absolute slack for "row sum <= 1" checks
ROW_SUM_TOL = 1e-12


class EdgeListError(ValueError):
    """Malformed edge-list input; ``lineno`` is 1-based (0 when not line-specific)."""

    def __init__(self, message: str, lineno: int = 0):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno else message)


class SparseVector:
    """Nonnegative vector keyed by node id; absent keys are zero.

    Insertion order of the entries is preserved, which matters for seeding
    queues deterministically from a preference vector.
    """

    __slots__ = ("_entries", "_l1")

    def __init__(self, entries: Mapping[int, float] | Iterable[tuple[int, float]] | None = None):
        items = entries.items() if isinstance(entries, Mapping) else (entries or ())
        data: dict[int, float] = {}
        for node, value in items:
            node = int(node)
            value = float(value)
            if node < 0:
                raise ValueError(f"negative node id {node}")
            if not value >= 0.0 or math.isinf(value):
                raise ValueError(f"entry {node} has invalid value {value!r}")
            if node in data:
                raise ValueError(f"duplicate entry for node {node}")
            if value > 0.0:
                data[node] = value
        self._entries = data
        self._l1 = math.fsum(data.values())

    @classmethod
    def indicator(cls, node: int, value: float = 1.0) -> "SparseVector":
        return cls({node: value})

    @classmethod
    def uniform(cls, n: int) -> "SparseVector":
        if n < 1:
            raise ValueError("uniform vector needs n >= 1")
        return cls((x, 1.0 / n) for x in range(n))

    @classmethod
    def from_dense(cls, values) -> "SparseVector":
        arr = np.asarray(values, dtype=float)
        nz = np.flatnonzero(arr)
        return cls(zip(nz.tolist(), arr[nz].tolist()))

    @property
    def l1(self) -> float:
        return self._l1

    def __getitem__(self, node: int) -> float:
        return self._entries.get(node, 0.0)

    def __contains__(self, node: object) -> bool:
        return node in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[int]:
        return iter(self._entries)

    def items(self):
        return self._entries.items()

    def support(self) -> list[int]:
        return list(self._entries)

    def max_node(self) -> int:
        return max(self._entries, default=-1)

    def scaled(self, factor: float) -> "SparseVector":
        if factor < 0:
            raise ValueError("negative scale factor")
        return SparseVector((x, v * factor) for x, v in self._entries.items())

    def plus(self, other: "SparseVector", factor: float = 1.0) -> "SparseVector":
        """Return ``self + factor * other``."""
        out = dict(self._entries)
        for x, v in other.items():
            out[x] = out.get(x, 0.0) + factor * v
        return SparseVector(out)

    def normalized(self) -> "SparseVector":
        if self._l1 == 0:
            raise ValueError("cannot normalize the zero vector")
        return self.scaled(1.0 / self._l1)

    def is_distribution(self, tol: float = 1e-12) -> bool:
        return abs(self._l1 - 1.0) <= tol

    def to_dense(self, n: int) -> np.ndarray:
        out = np.zeros(n)
        for x, v in self._entries.items():
            out[x] = v
        return out

    def l1_distance(self, other: "SparseVector") -> float:
        keys = self._entries.keys() | other._entries.keys()
        return math.fsum(abs(self[x] - other[x]) for x in keys)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseVector):
            return NotImplemented
        return self._entries == other._entries

    def __repr__(self) -> str:
        body = ", ".join(f"{x}: {v!r}" for x, v in sorted(self._entries.items()))
        return f"SparseVector({{{body}}})"


class WeightedGraph:
    """Immutable sparse nonnegative matrix viewed as an arc-weighted digraph.

    Row sums are cached.  Nothing here forces ``row_sums <= 1``; callers that
    need a substochastic matrix check :meth:`is_substochastic` (the engines do).
    """

    __slots__ = ("n", "indptr", "indices", "weights", "row_sums")

    def __init__(self, n: int, indptr, indices, weights, row_sums=None):
        n = int(n)
        if n < 0:
            raise ValueError("negative node count")
        indptr = np.array(indptr, dtype=np.int64)
        indices = np.array(indices, dtype=np.int64)
        weights = np.array(weights, dtype=np.float64)
        if indptr.shape != (n + 1,) or indptr[0] != 0 or np.any(np.diff(indptr) < 0):
            raise ValueError("bad row offsets")
        if indices.shape != weights.shape or indices.shape[0] != indptr[-1]:
            raise ValueError("arc arrays do not match row offsets")
        if indices.size:
            if indices.min() < 0 or indices.max() >= n:
                raise ValueError("arc target out of range")
            if not np.all(weights > 0) or not np.all(np.isfinite(weights)):
                raise ValueError("arc weights must be positive and finite")
        rows = np.repeat(np.arange(n), np.diff(indptr))
        if np.any((rows[1:] == rows[:-1]) & (np.diff(indices) <= 0)):
            raise ValueError("row targets must be sorted and unique")
        if row_sums is None:
            row_sums = np.bincount(rows, weights=weights, minlength=n)
        else:
            row_sums = np.array(row_sums, dtype=np.float64)
            if row_sums.shape != (n,):
                raise ValueError("row_sums has wrong shape")
        for arr in (indptr, indices, weights, row_sums):
            arr.flags.writeable = False
        self.n = n
        self.indptr = indptr
        self.indices = indices
        self.weights = weights
        self.row_sums = row_sums

    @classmethod
    def from_arcs(cls, arcs: Iterable[tuple[int, int, float]], n: int | None = None) -> "WeightedGraph":
        """Build from ``(src, dst, weight)`` triples; duplicate arcs are an error."""
        seen: dict[tuple[int, int], float] = {}
        for src, dst, w in arcs:
            src, dst, w = int(src), int(dst), float(w)
            if src < 0 or dst < 0:
                raise ValueError(f"negative node id in arc {src}->{dst}")
            if not w > 0 or math.isinf(w):
                raise ValueError(f"arc {src}->{dst} has invalid weight {w!r}")
            if (src, dst) in seen:
                raise ValueError(f"duplicate arc {src}->{dst}")
            seen[src, dst] = w
        top = 1 + max((max(s, d) for s, d in seen), default=-1)
        if n is None:
            n = top
        elif n < top:
            raise ValueError(f"n={n} too small for node id {top - 1}")
        keys = sorted(seen)
        counts = np.bincount([s for s, _ in keys], minlength=n) if keys else np.zeros(n, dtype=np.int64)
        indptr = np.concatenate(([0], np.cumsum(counts)))
        return cls(n, indptr, [d for _, d in keys], [seen[k] for k in keys])

    def successors(self, x: int) -> tuple[np.ndarray, np.ndarray]:
        a, b = self.indptr[x], self.indptr[x + 1]
        return self.indices[a:b], self.weights[a:b]

    def outdegree(self, x: int) -> int:
        return int(self.indptr[x + 1] - self.indptr[x])

    def is_dangling(self, x: int) -> bool:
        return self.indptr[x + 1] == self.indptr[x]

    def dangling_nodes(self) -> np.ndarray:
        return np.flatnonzero(np.diff(self.indptr) == 0)

    @property
    def num_arcs(self) -> int:
        return int(self.indices.size)

    def arcs(self) -> Iterator[tuple[int, int, float]]:
        src = np.repeat(np.arange(self.n), np.diff(self.indptr))
        yield from zip(src.tolist(), self.indices.tolist(), self.weights.tolist())

    @property
    def max_row_sum(self) -> float:
        return float(self.row_sums.max()) if self.n else 0.0

    def is_substochastic(self, tol: float = ROW_SUM_TOL) -> bool:
        return self.max_row_sum <= 1.0 + tol

    def natural_walk(self) -> "WeightedGraph":
        """Every arc ``x -> y`` gets weight ``1/outdegree(x)``; dangling rows stay zero."""
        deg = np.diff(self.indptr)
        inv = np.divide(1.0, deg, out=np.zeros(self.n), where=deg > 0)
        # row sums are 1 by definition; summing d copies of fl(1/d) can miss by an ulp
        return WeightedGraph(self.n, self.indptr, self.indices, np.repeat(inv, deg),
                             row_sums=(deg > 0).astype(float))

    def normalize_unit_norm(self) -> tuple["WeightedGraph", float]:
        """Scale all weights by ``1/max row sum``; returns the graph and the scale.

        The damping factor is not touched: ranking ``(M, alpha)`` corresponds
        to ``(scale * M, alpha / scale)``, which is left to the caller.
        """
        top = self.max_row_sum
        if top <= 0:
            raise ValueError("graph has no arcs; cannot normalize")
        scale = 1.0 / top
        if scale == 1.0:
            return self, 1.0
        return WeightedGraph(self.n, self.indptr, self.indices, self.weights * scale), scale

    def reachable(self, sources: Iterable[int]) -> np.ndarray:
        """Boolean mask of nodes reachable (walks of length >= 0) from ``sources``."""
        seen = np.zeros(self.n, dtype=bool)
        todo = deque()
        for s in sources:
            if not seen[s]:
                seen[s] = True
                todo.append(s)
        indptr, indices = self.indptr, self.indices
        while todo:
            x = todo.popleft()
            for y in indices[indptr[x]:indptr[x + 1]].tolist():
                if not seen[y]:
                    seen[y] = True
                    todo.append(y)
        return seen

    def to_dense(self) -> np.ndarray:
        m = np.zeros((self.n, self.n))
        src = np.repeat(np.arange(self.n), np.diff(self.indptr))
        m[src, self.indices] = self.weights
        return m

    def to_edge_list(self) -> str:
        return "".join(f"{s} {d} {w!r}\n" for s, d, w in self.arcs())

    def digest(self) -> str:
        """SHA-256 over the node count and the canonical weighted edge list."""
        h = hashlib.sha256(f"n={self.n}\n".encode())
        h.update(self.to_edge_list().encode())
        return h.hexdigest()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices)
                and np.array_equal(self.weights, other.weights))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self.n}, arcs={self.num_arcs})"


def from_edge_list(text: str | Iterable[str], weighted: bool | None = None) -> WeightedGraph:
    """Parse ``src dst [weight]`` lines; ``#`` lines and blank lines are skipped.

    ``weighted=True`` demands a weight on every line, ``False`` forbids it, and
    ``None`` accepts either (missing weights become the placeholder 1).
    """
    lines = text.splitlines() if isinstance(text, str) else text
    arcs: dict[tuple[int, int], float] = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) not in (2, 3):
            raise EdgeListError(f"expected 'src dst [weight]', got {line!r}", lineno)
        if weighted is True and len(fields) != 3:
            raise EdgeListError("missing weight", lineno)
        if weighted is False and len(fields) != 2:
            raise EdgeListError("unexpected weight in unweighted edge list", lineno)
        try:
            src, dst = int(fields[0]), int(fields[1])
            w = float(fields[2]) if len(fields) == 3 else 1.0
        except ValueError:
            raise EdgeListError(f"cannot parse {line!r}", lineno) from None
        if src < 0 or dst < 0:
            raise EdgeListError("negative node id", lineno)
        if not w > 0 or math.isinf(w):
            raise EdgeListError(f"weight must be positive and finite, got {fields[2]}", lineno)
        if (src, dst) in arcs:
            raise EdgeListError(f"duplicate arc {src} -> {dst}", lineno)
        arcs[src, dst] = w
    if not arcs:
        raise EdgeListError("edge list contains no arcs")
    return WeightedGraph.from_arcs((s, d, w) for (s, d), w in arcs.items())


def natural_walk(g: WeightedGraph) -> WeightedGraph:
    return g.natural_walk()


def normalize_unit_norm(g: WeightedGraph) -> tuple[WeightedGraph, float]:
    return g.normalize_unit_norm()
