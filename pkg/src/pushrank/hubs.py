"""Push runs that short-circuit nodes whose ranking is already known.

A hub ``x`` has a precomputed ranking ``s_x = (1 - alpha) chi_x (I - alpha M)^-1``.
Residual reaching a hub is parked there instead of being pushed; at the end
``p' = p + sum_x r_x s_x``.  While running, the stopping rule looks at

    ||r'||_1 = sum of r over non-hubs
    ||p'||_1 = ||p||_1 + sum_x r_x ||s_x||_1
"""
from __future__ import annotations

import math
from typing import Iterable, Iterator, Mapping

from . import oracle
from .graph import SparseVector, WeightedGraph
from .push import EngineConfig, PushState, RankResult


class MissingHubVector(KeyError):
    pass


class HubSet(Mapping[int, SparseVector]):
    """Immutable map hub node -> precomputed ranking, with cached norms.

    ``alpha`` and ``digest`` record what the vectors were computed for, when known.
    """

    def __init__(self, vectors: Mapping[int, SparseVector | None], *,
                 alpha: float | None = None, digest: str | None = None):
        hubs: dict[int, SparseVector] = {}
        for node, vec in vectors.items():
            if vec is None:
                raise MissingHubVector(f"no ranking vector for hub {node}")
            hubs[int(node)] = vec if isinstance(vec, SparseVector) else SparseVector(vec)
        self._vectors = hubs
        self._norms = {x: s.l1 for x, s in hubs.items()}
        self.alpha = alpha
        self.digest = digest

    @classmethod
    def precompute(cls, graph: WeightedGraph, nodes: Iterable[int], alpha: float) -> "HubSet":
        """Exact hub vectors from the dense oracle."""
        vectors = {}
        for x in nodes:
            dense = oracle.dense_rank(graph, SparseVector.indicator(x), alpha)
            vectors[x] = SparseVector.from_dense(dense)
        return cls(vectors, alpha=alpha, digest=graph.digest())

    def __getitem__(self, node: int) -> SparseVector:
        return self._vectors[node]

    def __iter__(self) -> Iterator[int]:
        return iter(self._vectors)

    def __len__(self) -> int:
        return len(self._vectors)

    def norm(self, node: int) -> float:
        return self._norms[node]

    def norms(self) -> dict[int, float]:
        return dict(self._norms)


class HubPushState(PushState):
    def __init__(self, graph: WeightedGraph, v: SparseVector, config: EngineConfig, hubs: HubSet, **kwargs):
        for x in hubs:
            if not 0 <= x < graph.n:
                raise ValueError(f"hub {x} is not a node of the graph")
        super().__init__(graph, v, config, absorbing=hubs.norms(), **kwargs)
        self.hubs = hubs

    def result(self, exhausted: bool = False) -> RankResult:
        final = finalize_hubs(self, self.hubs)
        r_prime = math.fsum(r for node, r in zip(self._nodes, self._r) if node not in self.hubs)
        return RankResult(final, final.l1, r_prime, self._finish_stats(), exhausted,
                          None if self.trace is None else list(self.trace))


def finalize_hubs(state: PushState, hubs: Mapping[int, SparseVector]) -> SparseVector:
    """``p + sum over hubs of r_x * s_x``."""
    acc: dict[int, float] = dict(state.p.items())
    for x in hubs:
        rx = state.residual(x)
        if rx > 0.0:
            for y, s in hubs[x].items():
                acc[y] = acc.get(y, 0.0) + rx * s
    return SparseVector(acc)


def run_with_hubs(graph: WeightedGraph, v: SparseVector, cfg: EngineConfig, hubs: HubSet, *,
                  trace: bool = False) -> RankResult:
    """Push run that never queues a hub; the returned ``p`` is the finalized ``p'``."""
    state = HubPushState(graph, v, cfg, hubs, trace=trace)
    exhausted = state.run()
    return state.result(exhausted)


class SelfHubState(PushState):
    """Ranking of ``chi_x`` where ``x`` becomes its own hub after the first push.

    Residual returning to ``x`` is parked.  Since ``p' = p + r_x p'``, the final
    answer is ``p / (1 - r_x)``.
    """

    def __init__(self, graph: WeightedGraph, x: int, config: EngineConfig, **kwargs):
        super().__init__(graph, SparseVector.indicator(x), config, absorbing={x: 0.0}, **kwargs)
        self.source = x
        self.push(x)

    def convergence_norms(self) -> tuple[float, float]:
        rx = self._absorbed_r
        return self.p_norm / (1.0 - rx), self.r_norm - rx

    def result(self, exhausted: bool = False) -> RankResult:
        rx = self.residual(self.source)
        if rx >= 1.0:
            raise RuntimeError(f"residual at the source reached {rx}; state is corrupt")
        factor = 1.0 / (1.0 - rx)
        p_norm, r_norm = self.recomputed_norms()
        r_prime = max(r_norm - rx, 0.0)
        # the error of p / (1 - r_x) is at most ||r'||_1 / (1 - r_x)
        return RankResult(self.p.scaled(factor), p_norm * factor, r_prime * factor,
                          self._finish_stats(), exhausted,
                          None if self.trace is None else list(self.trace))


def self_hub_run(graph: WeightedGraph, x: int, cfg: EngineConfig, *, trace: bool = False) -> RankResult:
    state = SelfHubState(graph, x, cfg, trace=trace)
    exhausted = state.run()
    return state.result(exhausted)
