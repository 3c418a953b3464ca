"""Command-line interface.

Exit codes: 0 ok, 1 input/output or data errors, 2 bad flags, 3 push budget
exhausted (partial output is still written), 4 graph too large for the dense
oracle.
"""
from __future__ import annotations

import argparse
import sys
import time
from typing import Sequence

import numpy as np

from . import oracle
from .formats import (VectorFileError, format_score, ranked_lines, read_hubs, read_patch,
                      read_vector, write_hubs, write_patch)
from .graph import EdgeListError, SparseVector, WeightedGraph, from_edge_list
from .hubs import HubSet, run_with_hubs, self_hub_run
from .patch import run_with_patch
from .push import Criterion, EngineConfig, QueueKind, RankResult, run

EXIT_IO, EXIT_USAGE, EXIT_EXHAUSTED, EXIT_TOO_LARGE = 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _warn(msg: str) -> None:
    print(f"pushrank: warning: {msg}", file=sys.stderr)


def _read_lines(path: str) -> list[str]:
    try:
        with open(path, encoding="utf-8", newline=None) as f:
            return f.read().splitlines()
    except OSError as e:
        raise CliError(EXIT_IO, f"cannot read {path}: {e.strerror}") from None


def load_graph(args) -> WeightedGraph:
    try:
        g = from_edge_list(_read_lines(args.graph))
    except EdgeListError as e:
        raise CliError(EXIT_IO, f"{args.graph}: {e}") from None
    if args.natural_walk:
        g = g.natural_walk()
    if args.normalize:
        try:
            g, scale = g.normalize_unit_norm()
        except ValueError as e:
            raise CliError(EXIT_IO, str(e)) from None
        print(f"scale\t{format_score(scale)}", file=sys.stderr)
    return g


def _distribution(spec: str, n: int, what: str) -> SparseVector:
    if spec == "uniform":
        return SparseVector.uniform(n)
    try:
        vec = read_vector(_read_lines(spec))
    except VectorFileError as e:
        raise CliError(EXIT_IO, f"{spec}: {e}") from None
    if len(vec) == 0:
        raise CliError(EXIT_IO, f"{spec}: {what} vector is empty")
    if vec.max_node() >= n:
        raise CliError(EXIT_IO, f"{spec}: node {vec.max_node()} is not in the graph (n={n})")
    if abs(vec.l1 - 1.0) > 1e-9:
        _warn(f"{what} vector {spec} had l1 norm {vec.l1!r}; renormalized")
    return vec.normalized()


def preference(args, g: WeightedGraph) -> SparseVector:
    if args.source is not None:
        if not 0 <= args.source < g.n:
            raise CliError(EXIT_USAGE, f"--source {args.source} is not a node (n={g.n})")
        return SparseVector.indicator(args.source)
    return _distribution(args.pref, g.n, "preference")


def _config(args, g: WeightedGraph) -> EngineConfig:
    max_pushes = args.max_pushes if args.max_pushes is not None else 10 * g.n
    try:
        return EngineConfig(args.alpha, args.eps, Criterion(args.criterion), QueueKind(args.queue), max_pushes)
    except ValueError as e:
        raise CliError(EXIT_USAGE, str(e)) from None


def _check_combinations(args) -> None:
    if args.self_hub and (args.pref is not None or args.hubs or args.patch_u):
        raise CliError(EXIT_USAGE, "--self-hub needs --source and excludes --hubs/--patch-u")
    if args.hubs and args.patch_u:
        raise CliError(EXIT_USAGE, "--hubs and --patch-u cannot be combined")
    if args.patch_s and not args.patch_u:
        raise CliError(EXIT_USAGE, "--patch-s requires --patch-u")


def _oracle_guard(fn, *a, **kw):
    try:
        return fn(*a, **kw)
    except oracle.OracleSizeError as e:
        raise CliError(EXIT_TOO_LARGE, str(e)) from None


def push_rank(args, g: WeightedGraph) -> RankResult:
    """Run whichever push variant the flags ask for."""
    _check_combinations(args)
    cfg = _config(args, g)
    v = preference(args, g)
    digest = g.digest()
    try:
        if args.self_hub:
            return self_hub_run(g, args.source, cfg)
        if args.hubs:
            hubs = read_hubs(_read_lines(args.hubs), alpha=args.alpha, digest=digest)
            return run_with_hubs(g, v, cfg, hubs)
        if args.patch_u:
            u = _distribution(args.patch_u, g.n, "patch")
            if args.patch_s:
                s = read_patch(_read_lines(args.patch_s), alpha=args.alpha, digest=digest)
            else:
                s = SparseVector.from_dense(_oracle_guard(oracle.dense_rank_patched, g, u, u, args.alpha))
            return run_with_patch(g, v, u, cfg, s)
        return run(g, v, cfg)
    except VectorFileError as e:
        raise CliError(EXIT_IO, str(e)) from None
    except ValueError as e:
        raise CliError(EXIT_IO, str(e)) from None


def _report_stats(result: RankResult, elapsed: float) -> None:
    st = result.stats
    rows = [("pushes", st.pushes), ("arcs_traversed", st.arcs_traversed), ("queue_ops", st.queue_ops),
            ("visited", st.visited), ("p_norm", format_score(result.p_norm)),
            ("r_norm", format_score(result.r_norm)),
            ("absolute_bound", format_score(result.absolute_bound)),
            ("relative_bound", format_score(result.relative_bound)),
            ("wall_time", f"{elapsed:.6f}")]
    for key, value in rows:
        print(f"{key}\t{value}", file=sys.stderr)


def cmd_rank(args) -> int:
    g = load_graph(args)
    t0 = time.perf_counter()
    result = push_rank(args, g)
    elapsed = time.perf_counter() - t0
    sys.stdout.writelines(ranked_lines(result.p))
    if args.stats:
        _report_stats(result, elapsed)
    if result.exhausted:
        print(f"pushrank: push budget exhausted after {result.stats.pushes} pushes; "
              f"l1 error bound {format_score(result.absolute_bound)}", file=sys.stderr)
        return EXIT_EXHAUSTED
    return 0


def _oracle_vector(args, g: WeightedGraph, v: SparseVector) -> np.ndarray:
    if getattr(args, "patch_u", None):
        u = _distribution(args.patch_u, g.n, "patch")
        return _oracle_guard(oracle.dense_rank_patched, g, u, v, args.alpha)
    return _oracle_guard(oracle.dense_rank, g, v, args.alpha)


def cmd_oracle(args) -> int:
    g = load_graph(args)
    if g.n > oracle.MAX_ORACLE_NODES:
        raise CliError(EXIT_TOO_LARGE, f"graph has {g.n} nodes; the dense oracle is limited to "
                                       f"{oracle.MAX_ORACLE_NODES}")
    v = preference(args, g)
    dense = _oracle_vector(args, g, v)
    dense[dense < 0] = 0.0
    sys.stdout.writelines(ranked_lines(SparseVector.from_dense(dense)))
    return 0


def cmd_compare(args) -> int:
    g = load_graph(args)
    if g.n > oracle.MAX_ORACLE_NODES:
        raise CliError(EXIT_TOO_LARGE, f"graph has {g.n} nodes; compare needs the dense oracle "
                                       f"(limit {oracle.MAX_ORACLE_NODES})")
    result = push_rank(args, g)
    v = SparseVector.indicator(args.source) if args.self_hub else preference(args, g)
    exact = _oracle_vector(args, g, v)
    distance = float(np.abs(exact - result.p.to_dense(g.n)).sum())
    bound = result.absolute_bound
    ok = distance <= bound + 1e-12
    print(f"distance\t{format_score(distance)}")
    print(f"bound\t{format_score(bound)}")
    print("PASS" if ok else "FAIL")
    if args.stats:
        _report_stats(result, float("nan"))
    if result.exhausted:
        return EXIT_EXHAUSTED
    return 0 if ok else EXIT_IO


def cmd_hubs_precompute(args) -> int:
    g = load_graph(args)
    try:
        nodes = sorted({int(x) for x in args.nodes.split(",") if x.strip()})
    except ValueError:
        raise CliError(EXIT_USAGE, f"--nodes must be a comma-separated list of ids, got {args.nodes!r}") from None
    if not nodes or any(not 0 <= x < g.n for x in nodes):
        raise CliError(EXIT_USAGE, f"--nodes must name nodes in [0, {g.n})")
    hubs = _oracle_guard(HubSet.precompute, g, nodes, args.alpha)
    with _output(args.out) as out:
        write_hubs(out, hubs, args.alpha, g.digest())
    return 0


def cmd_patch_precompute(args) -> int:
    g = load_graph(args)
    u = _distribution(args.u, g.n, "patch")
    s = SparseVector.from_dense(_oracle_guard(oracle.dense_rank_patched, g, u, u, args.alpha))
    with _output(args.out) as out:
        write_patch(out, s, args.alpha, g.digest())
    return 0


class _output:
    def __init__(self, path: str | None):
        self.path = path
        self.handle = None

    def __enter__(self):
        if self.path in (None, "-"):
            return sys.stdout
        try:
            self.handle = open(self.path, "w", encoding="utf-8", newline="\n")
        except OSError as e:
            raise CliError(EXIT_IO, f"cannot write {self.path}: {e.strerror}") from None
        return self.handle

    def __exit__(self, *exc):
        if self.handle is not None:
            self.handle.close()


def _alpha(text: str) -> float:
    try:
        a = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid alpha {text!r}") from None
    if not 0.0 <= a < 1.0:
        raise argparse.ArgumentTypeError(f"alpha must lie in [0, 1), got {text}")
    return a


def _graph_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", required=True, help="edge list: 'src dst [weight]' per line")
    p.add_argument("--alpha", type=_alpha, default=0.85, help="damping factor in [0, 1) (default 0.85)")
    p.add_argument("--natural-walk", action="store_true", help="reweight arcs to 1/outdegree")
    p.add_argument("--normalize", action="store_true",
                   help="divide weights by the largest row sum (alpha is not adjusted)")


def _pref_flags(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--source", type=int, help="rank from a single node")
    group.add_argument("--pref", help="preference TSV 'node<TAB>weight', or 'uniform'")


def _rank_flags(p: argparse.ArgumentParser) -> None:
    _graph_flags(p)
    _pref_flags(p)
    p.add_argument("--eps", type=float, default=1e-6, help="tolerance (default 1e-6)")
    p.add_argument("--queue", choices=[q.value for q in QueueKind], default="priority")
    p.add_argument("--criterion", choices=[c.value for c in Criterion], default="rel")
    p.add_argument("--max-pushes", type=int, default=None, help="push budget (default 10*n)")
    p.add_argument("--hubs", help="hub file with precomputed rankings")
    p.add_argument("--patch-u", help="patch dangling rows with this distribution ('uniform' allowed)")
    p.add_argument("--patch-s", help="precomputed ranking of the patched matrix for preference u")
    p.add_argument("--self-hub", action="store_true", help="treat the source as a hub after its first push")
    p.add_argument("--stats", action="store_true", help="print counters and error bounds to stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pushrank", description="Spectral rankings by the push algorithm.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rank", help="approximate a ranking by pushing")
    _rank_flags(p)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("compare", help="run the push algorithm and check it against the dense oracle")
    _rank_flags(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("oracle", help="exact ranking by a dense solve")
    _graph_flags(p)
    _pref_flags(p)
    p.add_argument("--patch-u", help="rank the matrix with dangling rows replaced by this distribution")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("hubs", help="hub vector files")
    hub_sub = p.add_subparsers(dest="action", required=True)
    q = hub_sub.add_parser("precompute", help="write exact rankings for the given nodes")
    _graph_flags(q)
    q.add_argument("--nodes", required=True, help="comma-separated node ids")
    q.add_argument("--out", help="output file (default stdout)")
    q.set_defaults(func=cmd_hubs_precompute)

    p = sub.add_parser("patch", help="patch vector files")
    patch_sub = p.add_subparsers(dest="action", required=True)
    q = patch_sub.add_parser("precompute", help="write the ranking of the patched matrix for preference u")
    _graph_flags(q)
    q.add_argument("--u", required=True, help="patch distribution TSV, or 'uniform'")
    q.add_argument("--out", help="output file (default stdout)")
    q.set_defaults(func=cmd_patch_precompute)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"pushrank: {e}", file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
