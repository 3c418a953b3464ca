"""Random test graphs."""
from __future__ import annotations

import numpy as np

from .graph import SparseVector, WeightedGraph


def _from_rows(n: int, rows: list[np.ndarray], weights: list[np.ndarray]) -> WeightedGraph:
    counts = np.array([len(r) for r in rows], dtype=np.int64)
    indptr = np.concatenate(([0], np.cumsum(counts)))
    indices = np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64)
    w = np.concatenate(weights) if weights else np.zeros(0)
    return WeightedGraph(n, indptr, indices, w)


def random_substochastic(rng: np.random.Generator, n: int, mean_degree: float = 4.0,
                         dangling: float = 0.1, leak: float = 0.3) -> WeightedGraph:
    """Random graph with positive weights and ``||M||_1 = 1``.

    About a ``dangling`` fraction of nodes get no arcs; about a ``leak``
    fraction of the others get a row sum strictly below one.
    """
    rows, weights = [], []
    for _ in range(n):
        if rng.random() < dangling:
            deg = 0
        else:
            deg = int(min(n, max(1, rng.poisson(mean_degree))))
        targets = np.sort(rng.choice(n, size=deg, replace=False)) if deg else np.zeros(0, dtype=np.int64)
        w = rng.uniform(0.1, 1.0, size=deg)
        if deg:
            w /= w.sum()
            if rng.random() < leak:
                w *= rng.uniform(0.2, 1.0)
        rows.append(targets.astype(np.int64))
        weights.append(w)
    g = _from_rows(n, rows, weights)
    if g.num_arcs == 0:
        return random_substochastic(rng, n, mean_degree, dangling, leak)
    return g.normalize_unit_norm()[0]


def random_natural_walk(rng: np.random.Generator, n: int, mean_degree: float = 4.0,
                        dangling: float = 0.2) -> WeightedGraph:
    g = random_substochastic(rng, n, mean_degree, dangling, leak=0.0)
    return g.natural_walk()


def local_random_graph(rng: np.random.Generator, n: int, degree: int = 10, window: int = 20) -> WeightedGraph:
    """Natural walk on a ring where each node links to ``degree`` random nodes
    within ``window`` positions of itself.

    Mass stays near the source, so a personalized ranking only touches a
    small neighbourhood even for large ``n``.
    """
    if 2 * window < degree:
        raise ValueError("window too small for the requested degree")
    offsets = np.concatenate((np.arange(-window, 0), np.arange(1, window + 1)))
    picks = np.argsort(rng.random((n, offsets.size)), axis=1)[:, :degree]
    targets = (np.arange(n)[:, None] + offsets[picks]) % n
    targets.sort(axis=1)
    indptr = np.arange(0, n * degree + 1, degree, dtype=np.int64)
    return WeightedGraph(n, indptr, targets.ravel(), np.full(n * degree, 1.0 / degree),
                         row_sums=np.ones(n))


def random_preference(rng: np.random.Generator, n: int, support: int = 3) -> SparseVector:
    k = int(min(n, max(1, support)))
    nodes = rng.choice(n, size=k, replace=False)
    w = rng.uniform(0.1, 1.0, size=k)
    w /= w.sum()
    return SparseVector(zip(nodes.tolist(), w.tolist()))
