"""Spectral rankings (personalized PageRank, pseudoranks) of substochastic
matrices by the push algorithm, with a dense reference oracle."""
from .graph import EdgeListError, SparseVector, WeightedGraph, from_edge_list, natural_walk, normalize_unit_norm
from .hubs import HubSet, finalize_hubs, run_with_hubs, self_hub_run
from .patch import finalize_patch, run_with_patch
from .push import Criterion, EngineConfig, PushState, PushStats, QueueKind, RankResult, push_threshold, run

__all__ = [
    "EdgeListError", "SparseVector", "WeightedGraph", "from_edge_list", "natural_walk", "normalize_unit_norm",
    "HubSet", "finalize_hubs", "run_with_hubs", "self_hub_run",
    "finalize_patch", "run_with_patch",
    "Criterion", "EngineConfig", "PushState", "PushStats", "QueueKind", "RankResult", "push_threshold", "run",
]
