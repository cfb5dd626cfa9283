import numpy as np
import pytest

from rwmeet.generators import params_for_target_degree
from rwmeet.graph import WeightedGraph, check_assumptions

ACCEPTANCE = {}


def record(criterion: int, ok: bool, detail: str):
    ACCEPTANCE[criterion] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def complete_graph(n):
    return WeightedGraph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def path_graph(n):
    return WeightedGraph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    return WeightedGraph(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves):
    return WeightedGraph(leaves + 1, [(0, j) for j in range(1, leaves + 1)])


def random_graph(rng, n_lo, n_hi, degrees=(4, 6, 8), kind=None):
    """Connected non-bipartite BA, ER or randomly weighted graph."""
    while True:
        n = int(rng.integers(n_lo, n_hi + 1))
        k = kind if kind is not None else int(rng.integers(3))
        model = "BA" if k == 0 or (k == 2 and rng.random() < 0.5) else "ER"
        d = float(rng.choice(degrees))
        if d > n - 1:
            continue
        try:
            g = params_for_target_degree(model, n, d, seed=int(rng.integers(1 << 62))).generate()
        except Exception:
            continue
        if k == 2:
            g = WeightedGraph(n, [(i, j, float(rng.uniform(0.2, 3.0))) for i, j, _ in g.edges])
        if check_assumptions(g).ok:
            return g


def corpus(seed, count, n_lo, n_hi, degrees=(4, 6, 8)):
    rng = np.random.default_rng(seed)
    return [random_graph(rng, n_lo, n_hi, degrees, kind=i % 3) for i in range(count)]


@pytest.fixture(scope="session")
def small_corpus():
    """50 mixed BA / ER / weighted graphs with n <= 30."""
    return corpus(2024, 50, 8, 30)


@pytest.fixture(scope="session")
def tiny_corpus():
    """Graphs with n <= 12 for the quadruple-loop reference."""
    return corpus(77, 20, 6, 12, degrees=(4, 5))
