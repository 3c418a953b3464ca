import itertools
from fractions import Fraction

import numpy as np
import pytest

from pushrank import oracle
from pushrank.generators import random_natural_walk, random_substochastic
from pushrank.graph import SparseVector, WeightedGraph, from_edge_list

from conftest import exact_rank


def brute_force_walks(g: WeightedGraph, x: int, t: int) -> int:
    """Enumerate every vertex sequence of length <= t+1 starting at x and keep the walks."""
    arcs = {(s, d) for s, d, _ in g.arcs()}
    count = 0
    for length in range(t + 1):
        for rest in itertools.product(range(g.n), repeat=length):
            seq = (x,) + rest
            if all((a, b) in arcs for a, b in zip(seq, seq[1:])):
                count += 1
    return count


class TestDenseRank:
    @pytest.mark.parametrize("method", ["solve", "series"])
    def test_alpha_zero_is_identity(self, cycle3, method):
        v = np.array([0.2, 0.3, 0.5])
        assert np.array_equal(oracle.dense_rank(cycle3, v, 0.0, method=method), v)

    @pytest.mark.parametrize("method", ["solve", "series"])
    def test_nilpotent_two_node(self, graph_a, method):
        # M = [[0,1],[0,0]]: the series stops after two terms, (1-a)(1, a) = (0.5, 0.25)
        got = oracle.dense_rank(graph_a, SparseVector.indicator(0), 0.5, method=method)
        assert np.allclose(got, [0.5, 0.25], rtol=0, atol=1e-15)

    @pytest.mark.parametrize("method", ["solve", "series"])
    def test_self_loop(self, self_loop, method):
        got = oracle.dense_rank(self_loop, [1.0], 0.5, method=method)
        assert abs(got[0] - 1.0) <= 1e-14

    def test_three_cycle_matches_rational_solve(self, cycle3):
        want = exact_rank([[0, 1, 0], [0, 0, 1], [1, 0, 0]], [1, 0, 0], Fraction(1, 2))
        assert want == [Fraction(4, 7), Fraction(2, 7), Fraction(1, 7)]
        got = oracle.dense_rank(cycle3, SparseVector.indicator(0), 0.5)
        assert np.allclose(got, [float(w) for w in want], rtol=0, atol=1e-15)

    def test_unreachable_entries_are_exact_zeros(self):
        g = from_edge_list("0 1\n2 0\n2 1\n").natural_walk()
        got = oracle.dense_rank(g, SparseVector.indicator(0), 0.85)
        assert got[2] == 0.0

    def test_size_guard(self):
        n = oracle.MAX_ORACLE_NODES + 1
        g = WeightedGraph(n, np.zeros(n + 1, dtype=np.int64), [], [])
        with pytest.raises(oracle.OracleSizeError):
            oracle.dense_rank(g, SparseVector.indicator(0), 0.5)

    @pytest.mark.parametrize("alpha", [0.25, 0.5, 0.85, 0.99])
    def test_solve_and_series_agree(self, rng, alpha):
        for _ in range(20):
            n = int(rng.integers(2, 101))
            g = random_substochastic(rng, n, rng.uniform(1, 8))
            v = rng.random(n) * (rng.random(n) < 0.2)
            v[rng.integers(n)] += 1.0
            v /= v.sum()
            a = oracle.dense_rank(g, v, alpha, method="solve")
            b = oracle.dense_rank(g, v, alpha, method="series")
            assert np.abs(a - b).sum() <= 1e-12

    def test_linearity(self, rng):
        for _ in range(20):
            n = int(rng.integers(2, 60))
            g = random_substochastic(rng, n, 4)
            v1, v2 = rng.random(n), rng.random(n)
            a, b = rng.uniform(0, 3, size=2)
            lhs = oracle.dense_rank(g, a * v1 + b * v2, 0.85)
            rhs = a * oracle.dense_rank(g, v1, 0.85) + b * oracle.dense_rank(g, v2, 0.85)
            assert np.abs(lhs - rhs).sum() <= 1e-12 * max(1.0, np.abs(lhs).sum())

    def test_inverse_problem_round_trip(self, rng):
        for alpha in (0.25, 0.5, 0.85, 0.99):
            n = int(rng.integers(2, 60))
            g = random_substochastic(rng, n, 4)
            w = rng.random(n)
            v_hat = oracle.preference_for(g, w, alpha)
            back = oracle.dense_rank(g, v_hat, alpha)
            assert np.abs(back - w).max() <= 1e-10

    def test_inverse_of_scaled_indicator(self, cycle3):
        # preference giving (1-a) chi_x as ranking is chi_x - a * sum_y m_xy chi_y
        alpha = 0.5
        v_hat = oracle.preference_for(cycle3, [1 - alpha, 0, 0], alpha)
        assert np.allclose(v_hat, [1.0, -0.5, 0.0], rtol=0, atol=1e-15)

    def test_norm_bound(self, rng):
        for _ in range(30):
            n = int(rng.integers(2, 80))
            g = random_substochastic(rng, n, 4, dangling=0.2)
            v = SparseVector.indicator(int(rng.integers(n)))
            assert oracle.dense_rank(g, v, 0.85).sum() <= 1.0 + 1e-12

    def test_norm_equality_on_stochastic(self, rng):
        g = random_natural_walk(rng, 50, 5, dangling=0.0)
        got = oracle.dense_rank(g, SparseVector.uniform(50), 0.85)
        assert abs(got.sum() - 1.0) <= 1e-12


class TestPatched:
    def test_two_node_worked_case(self, graph_a):
        u = [0.5, 0.5]
        want = exact_rank([[0, 1], ["1/2", "1/2"]], [1, 0], Fraction(1, 2))
        assert want == [Fraction(3, 5), Fraction(2, 5)]
        got = oracle.dense_rank_patched(graph_a, u, [1.0, 0.0], 0.5)
        assert np.allclose(got, [0.6, 0.4], rtol=0, atol=1e-15)

    def test_preference_equal_to_patch(self, graph_a):
        want = exact_rank([[0, 1], ["1/2", "1/2"]], ["1/2", "1/2"], Fraction(1, 2))
        assert want == [Fraction(2, 5), Fraction(3, 5)]
        got = oracle.dense_rank_patched(graph_a, [0.5, 0.5], [0.5, 0.5], 0.5)
        assert np.allclose(got, [0.4, 0.6], rtol=0, atol=1e-15)
        assert abs(got.sum() - 1.0) <= 1e-15

    def test_no_dangling_rows(self, cycle3):
        v = [0.2, 0.3, 0.5]
        a = oracle.dense_rank_patched(cycle3, [1.0, 0, 0], v, 0.85)
        b = oracle.dense_rank(cycle3, v, 0.85)
        assert np.array_equal(a, b)

    def test_patch_must_be_distribution(self, graph_a):
        with pytest.raises(ValueError):
            oracle.dense_rank_patched(graph_a, [0.5, 0.2], [1.0, 0.0], 0.5)


class TestPathFunction:
    def test_empty_path(self, cycle3):
        assert oracle.path_function(cycle3, 1, 0) == 1

    def test_single_arc(self, graph_a):
        assert oracle.path_function(graph_a, 0, 1) == 2

    def test_three_cycle(self, cycle3):
        assert brute_force_walks(cycle3, 0, 3) == 4
        assert oracle.path_function(cycle3, 0, 3) == 4

    def test_against_enumeration(self, rng):
        for _ in range(15):
            n = int(rng.integers(1, 7))
            g = random_substochastic(rng, n, 2.5, dangling=0.2)
            x = int(rng.integers(n))
            for t in range(5):
                assert oracle.path_function(g, x, t) == brute_force_walks(g, x, t)

    def test_recurrence_and_monotone(self, rng):
        for _ in range(20):
            n = int(rng.integers(1, 21))
            g = random_substochastic(rng, n, 3, dangling=0.2)
            for x in range(n):
                prev = 0
                for t in range(6):
                    pt = oracle.path_function(g, x, t)
                    assert pt >= prev
                    prev = pt
                    succ = g.successors(x)[0].tolist()
                    assert oracle.path_function(g, x, t + 1) == 1 + sum(
                        oracle.path_function(g, y, t) for y in succ)

    def test_large_counts_do_not_overflow(self):
        g = from_edge_list("0 0\n0 1\n1 0\n1 1\n")
        assert oracle.path_function(g, 0, 70) == 2 ** 71 - 1
