from fractions import Fraction

import numpy as np
import pytest

from pushrank.graph import WeightedGraph, from_edge_list


def exact_rank(matrix, v, alpha):
    """(1 - alpha) v (I - alpha M)^-1 in exact rational arithmetic (Gauss-Jordan).

    ``matrix``, ``v`` and ``alpha`` may hold ints, Fractions or decimal strings.
    """
    n = len(v)
    a = Fraction(alpha)
    m = [[Fraction(x) for x in row] for row in matrix]
    # row-vector system w (I - aM) = (1-a) v  <=>  (I - aM)^T w^T = (1-a) v^T
    aug = [[(1 if i == j else 0) - a * m[j][i] for j in range(n)] + [(1 - a) * Fraction(v[i])]
           for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        lead = aug[col][col]
        aug[col] = [x / lead for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n] for row in aug]


@pytest.fixture
def graph_a() -> WeightedGraph:
    """0 -> 1 with node 1 dangling, natural walk."""
    return from_edge_list("0 1\n").natural_walk()


@pytest.fixture
def cycle3() -> WeightedGraph:
    return from_edge_list("0 1\n1 2\n2 0\n").natural_walk()


@pytest.fixture
def cycle2() -> WeightedGraph:
    return from_edge_list("0 1\n1 0\n").natural_walk()


@pytest.fixture
def self_loop() -> WeightedGraph:
    return from_edge_list("0 0 1\n")


@pytest.fixture
def rng():
    return np.random.default_rng(20241017)


@pytest.fixture
def verdict(request):
    """Record a one-line PASS/FAIL for an acceptance criterion, then assert it."""
    lines = request.config.stash.setdefault(_VERDICTS, [])

    def record(number: int, title: str, ok: bool, detail: str = "") -> None:
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
        lines.append(line)
        print(line)
        assert ok, line
    return record


_VERDICTS = pytest.StashKey[list]()


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_VERDICTS, [])
    if lines:
        terminalreporter.section("acceptance")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
