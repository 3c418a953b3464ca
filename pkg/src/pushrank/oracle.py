"""Dense reference computations: exact spectral rankings, patched solves, path counts.

Everything here is O(n^2) memory or worse and meant for small graphs, tests,
and precomputing hub / patch vectors.  Vectors are row vectors, so the
ranking of ``v`` solves ``w (I - alpha M) = (1 - alpha) v``.
"""
from __future__ import annotations

import numpy as np

from .graph import SparseVector, WeightedGraph

#: largest graph the dense routines accept
MAX_ORACLE_NODES = 5000

#: the Neumann series stops once the tail bound falls below this
SERIES_TOL = 1e-15


class OracleSizeError(ValueError):
    pass


def _check(g: WeightedGraph, alpha: float) -> None:
    if g.n > MAX_ORACLE_NODES:
        raise OracleSizeError(f"graph has {g.n} nodes; the dense oracle is limited to {MAX_ORACLE_NODES}")
    if not 0.0 <= alpha < 1.0:
        raise ValueError(f"damping factor must lie in [0, 1), got {alpha}")


def _dense(v, n: int) -> np.ndarray:
    if isinstance(v, SparseVector):
        if v.max_node() >= n:
            raise ValueError("vector has entries outside the graph")
        return v.to_dense(n)
    arr = np.asarray(v, dtype=float)
    if arr.shape != (n,):
        raise ValueError(f"expected a vector of length {n}, got shape {arr.shape}")
    return arr


def _solve(m: np.ndarray, v: np.ndarray, alpha: float) -> np.ndarray:
    n = v.shape[0]
    # LAPACK gesv: LU with partial pivoting
    return np.linalg.solve((np.eye(n) - alpha * m).T, (1.0 - alpha) * v)


def _series(g: WeightedGraph, v: np.ndarray, alpha: float) -> np.ndarray:
    src = np.repeat(np.arange(g.n), np.diff(g.indptr))
    term = (1.0 - alpha) * v
    total = term.copy()
    if alpha == 0.0:
        return total
    while np.abs(term).sum() / (1.0 - alpha) >= SERIES_TOL:
        term = alpha * np.bincount(g.indices, weights=term[src] * g.weights, minlength=g.n)
        total += term
    return total


def _reach_mask(g: WeightedGraph, v: np.ndarray) -> np.ndarray:
    return g.reachable(np.flatnonzero(v).tolist())


def dense_rank(g: WeightedGraph, v, alpha: float, method: str = "solve") -> np.ndarray:
    """Return ``(1 - alpha) v (I - alpha M)^-1`` as a dense array.

    ``method`` is ``"solve"`` (direct LU solve) or ``"series"`` (summing the
    Neumann series).  For nonnegative ``v``, entries at nodes unreachable from
    the support of ``v`` are zero exactly rather than solver noise.
    """
    _check(g, alpha)
    vec = _dense(v, g.n)
    if method == "solve":
        out = _solve(g.to_dense(), vec, alpha)
    elif method == "series":
        out = _series(g, vec, alpha)
    else:
        raise ValueError(f"unknown method {method!r}")
    if np.all(vec >= 0):
        out[~_reach_mask(g, vec)] = 0.0
    return out


def patched_matrix(g: WeightedGraph, u) -> np.ndarray:
    """Materialize ``P``: ``M`` with every all-zero row replaced by ``u``."""
    uu = _dense(u, g.n)
    if abs(uu.sum() - 1.0) > 1e-12 or np.any(uu < 0):
        raise ValueError("patch vector must be a distribution")
    m = g.to_dense()
    m[g.dangling_nodes()] = uu
    return m


def dense_rank_patched(g: WeightedGraph, u, v, alpha: float) -> np.ndarray:
    _check(g, alpha)
    vec = _dense(v, g.n)
    uu = _dense(u, g.n)
    out = _solve(patched_matrix(g, uu), vec, alpha)
    if np.all(vec >= 0):
        mask = _reach_mask(g, vec)
        if mask[g.dangling_nodes()].any():
            mask |= _reach_mask(g, vec + uu)
        out[~mask] = 0.0
    return out


def rank_operator(g: WeightedGraph, alpha: float, u=None) -> np.ndarray:
    """Dense ``K = (1 - alpha)(I - alpha M)^-1`` so that the ranking of ``w`` is ``w @ K``.

    With ``u`` the patched matrix is used instead of ``M``.
    """
    _check(g, alpha)
    m = g.to_dense() if u is None else patched_matrix(g, u)
    return (1.0 - alpha) * np.linalg.inv(np.eye(g.n) - alpha * m)


def preference_for(g: WeightedGraph, w, alpha: float) -> np.ndarray:
    """Solve the inverse problem: the (possibly signed) preference whose ranking is ``w``."""
    _check(g, alpha)
    ww = _dense(w, g.n)
    return (ww - alpha * (ww @ g.to_dense())) / (1.0 - alpha)


def path_function(g: WeightedGraph, x: int, t: int) -> int:
    """Number of walks of length 0..t starting at ``x`` (vertices may repeat).

    Counts are Python integers, so they cannot overflow.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    indptr, indices = g.indptr, g.indices
    counts = {x: 1}
    total = 1
    for _ in range(t):
        nxt: dict[int, int] = {}
        for z, c in counts.items():
            for y in indices[indptr[z]:indptr[z + 1]].tolist():
                nxt[y] = nxt.get(y, 0) + c
        counts = nxt
        total += sum(counts.values())
        if not counts:
            break
    return total
