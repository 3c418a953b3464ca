"""Rankings of the patched matrix without building it.

The patched matrix ``P`` is ``M`` with every all-zero (dangling) row replaced
by a distribution ``u``.  Instead of materializing those dense rows, the run
keeps a scalar ``theta`` with

    p + (1 - alpha)(r + theta u)(I - alpha P)^-1 == (1 - alpha) v (I - alpha P)^-1

A push on a dangling node moves ``(1 - alpha) r_x`` into ``p_x`` as usual but
routes the remaining ``alpha r_x`` into ``theta`` instead of successors.  With
``s`` the ranking of ``P`` for preference ``u``, the answer is ``p + theta s``.
"""
from __future__ import annotations

from .graph import SparseVector, WeightedGraph
from .push import EngineConfig, PushState, RankResult


class PatchPushState(PushState):
    def __init__(self, graph: WeightedGraph, v: SparseVector, u: SparseVector, config: EngineConfig,
                 s: SparseVector, **kwargs):
        if u is None or not u.is_distribution():
            raise ValueError("patch vector u must be a distribution")
        if u.max_node() >= graph.n:
            raise ValueError("patch vector mentions nodes outside the graph")
        if s is None:
            raise ValueError("the ranking s of the patched matrix is required")
        super().__init__(graph, v, config, **kwargs)
        self.u = u
        self.s = s
        self.s_norm = s.l1
        self.theta = 0.0

    def push(self, x: int) -> float:
        rx = super().push(x)
        if self.graph.is_dangling(x):
            self.theta += self.config.alpha * rx
        return rx

    def convergence_norms(self) -> tuple[float, float]:
        return self.p_norm + self.theta * self.s_norm, self.r_norm

    def result(self, exhausted: bool = False) -> RankResult:
        final = finalize_patch(self)
        _, r_norm = self.recomputed_norms()
        return RankResult(final, final.l1, r_norm, self._finish_stats(), exhausted,
                          None if self.trace is None else list(self.trace))


def finalize_patch(state: PatchPushState) -> SparseVector:
    """``p + theta * s``."""
    p = state.p
    if state.theta == 0.0:
        return p
    return p.plus(state.s, state.theta)


def run_with_patch(graph: WeightedGraph, v: SparseVector, u: SparseVector, cfg: EngineConfig,
                   s: SparseVector, *, trace: bool = False) -> RankResult:
    state = PatchPushState(graph, v, u, cfg, s, trace=trace)
    exhausted = state.run()
    return state.result(exhausted)
