"""Weighted undirected graphs, degree statistics and structural checks.

Nodes are the integers ``0 .. n-1``. A graph is immutable once built; the
adjacency is stored in CSR form (``indptr``, ``indices``, ``weights``) with
each neighbour list sorted by node id.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
import scipy.sparse as sp

from .errors import DomainError, EdgeListError


class WeightedGraph:
    """Undirected simple graph with strictly positive edge weights."""

    def __init__(self, n: int, edges: Iterable[tuple]):
        n = int(n)
        if n < 2:
            raise DomainError(f"graph needs at least 2 nodes, got {n}")
        canon: dict[tuple[int, int], float] = {}
        for e in edges:
            if len(e) == 2:
                i, j, w = e[0], e[1], 1.0
            else:
                i, j, w = e
            i, j, w = int(i), int(j), float(w)
            if not (0 <= i < n and 0 <= j < n):
                raise DomainError(f"edge ({i}, {j}) out of range for n={n}")
            if i == j:
                raise DomainError(f"self-loop at node {i}")
            if not (w > 0 and math.isfinite(w)):
                raise DomainError(f"edge ({i}, {j}) has non-positive weight {w}")
            key = (i, j) if i < j else (j, i)
            if key in canon:
                raise DomainError(f"duplicate edge {key}")
            canon[key] = w

        self._n = n
        self._edges = tuple((i, j, canon[(i, j)]) for i, j in sorted(canon))
        m = len(self._edges)
        rows = np.empty(2 * m, dtype=np.int64)
        cols = np.empty(2 * m, dtype=np.int64)
        vals = np.empty(2 * m, dtype=np.float64)
        for k, (i, j, w) in enumerate(self._edges):
            rows[2 * k], cols[2 * k], vals[2 * k] = i, j, w
            rows[2 * k + 1], cols[2 * k + 1], vals[2 * k + 1] = j, i, w
        order = np.lexsort((cols, rows))
        rows, cols, vals = rows[order], cols[order], vals[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, rows + 1, 1)
        self._indptr = np.cumsum(indptr)
        self._indices = cols
        self._weights = vals
        self._degrees = np.bincount(rows, weights=vals, minlength=n).astype(np.float64)
        for arr in (self._indptr, self._indices, self._weights, self._degrees):
            arr.setflags(write=False)

    @property
    def n(self) -> int:
        return self._n

    @property
    def edges(self) -> tuple:
        """Canonical edge tuple ``(i, j, w)`` with ``i < j``, sorted."""
        return self._edges

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    @property
    def indptr(self) -> np.ndarray:
        return self._indptr

    @property
    def indices(self) -> np.ndarray:
        return self._indices

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    @property
    def degrees(self) -> np.ndarray:
        """Weighted degree of every node."""
        return self._degrees

    @property
    def is_unweighted(self) -> bool:
        return bool(np.all(self._weights == 1.0))

    def neighbors(self, i: int) -> list[tuple[int, float]]:
        self._check_node(i)
        lo, hi = self._indptr[i], self._indptr[i + 1]
        return [(int(j), float(w)) for j, w in zip(self._indices[lo:hi], self._weights[lo:hi])]

    def weight(self, i: int, j: int) -> float:
        """Weight of edge (i, j), or 0.0 if the nodes are not adjacent."""
        self._check_node(i)
        self._check_node(j)
        lo, hi = self._indptr[i], self._indptr[i + 1]
        k = lo + np.searchsorted(self._indices[lo:hi], j)
        if k < hi and self._indices[k] == j:
            return float(self._weights[k])
        return 0.0

    def adjacency(self, dense: bool = False):
        a = sp.csr_array((self._weights, self._indices, self._indptr), shape=(self._n, self._n))
        return a.toarray() if dense else a

    def relabel(self, perm) -> "WeightedGraph":
        """Graph with node ``i`` renamed to ``perm[i]``."""
        perm = [int(p) for p in perm]
        if sorted(perm) != list(range(self._n)):
            raise DomainError("relabeling must be a permutation of the node ids")
        return WeightedGraph(self._n, [(perm[i], perm[j], w) for i, j, w in self._edges])

    def _check_node(self, i):
        if not (0 <= int(i) < self._n):
            raise DomainError(f"node {i} out of range 0..{self._n - 1}")

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __hash__(self):
        return hash((self._n, self._edges))

    def __repr__(self):
        return f"WeightedGraph(n={self._n}, edges={len(self._edges)})"


def weighted_degree(g: WeightedGraph, i: int) -> float:
    g._check_node(i)
    return float(g.degrees[i])


def transition_probability(g: WeightedGraph, i: int, j: int) -> float:
    """Probability that a walker at ``i`` steps to ``j``."""
    w = g.weight(i, j)
    if w == 0.0:
        raise DomainError(f"nodes {i} and {j} are not adjacent")
    return w / float(g.degrees[i])


@dataclass(frozen=True)
class GraphStats:
    n: int
    s1: float
    s2: float
    d_avg: float
    d_std: float
    d_min: float
    w_max: float

    CSV_HEADER = ("n", "s1", "s2", "d_avg", "d_std", "d_min", "w_max")

    @property
    def heterogeneity(self) -> float:
        """Coefficient of variation ``d_std / d_avg`` of the weighted degrees."""
        return self.d_std / self.d_avg

    def csv_row(self) -> tuple:
        return (self.n, self.s1, self.s2, self.d_avg, self.d_std, self.d_min, self.w_max)


def compute_stats(g: WeightedGraph) -> GraphStats:
    d = g.degrees
    n = g.n
    s1 = math.fsum(d)
    s2 = math.fsum(d * d)
    d_avg = s1 / n
    # population variance, so that s2 == n * (d_avg**2 + d_std**2)
    d_std = math.sqrt(max(s2 / n - d_avg * d_avg, 0.0))
    w_max = float(g.weights.max()) if g.edge_count else 0.0
    return GraphStats(n=n, s1=s1, s2=s2, d_avg=d_avg, d_std=d_std, d_min=float(d.min()), w_max=w_max)


@dataclass(frozen=True)
class AssumptionReport:
    connected: bool
    bipartite: bool
    # side (0/1) of each node when bipartite, else None
    coloring: tuple | None = field(default=None, repr=False)

    @property
    def ok(self) -> bool:
        """True when the walk is irreducible and aperiodic."""
        return self.connected and not self.bipartite


def check_assumptions(g: WeightedGraph) -> AssumptionReport:
    """Connectivity and bipartiteness by BFS 2-coloring."""
    color = [-1] * g.n
    indptr, indices = g.indptr, g.indices
    bipartite = True
    components = 0
    for root in range(g.n):
        if color[root] != -1:
            continue
        components += 1
        color[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in indices[indptr[u]:indptr[u + 1]]:
                v = int(v)
                if color[v] == -1:
                    color[v] = 1 - color[u]
                    queue.append(v)
                elif color[v] == color[u]:
                    bipartite = False
    return AssumptionReport(
        connected=components == 1,
        bipartite=bipartite,
        coloring=tuple(color) if bipartite else None,
    )


def load_edge_list(text: str, n: int | None = None) -> WeightedGraph:
    """Parse ``i j [w]`` lines. ``#`` starts a comment.

    The node count is ``max id + 1`` unless ``n`` is given, or the text
    carries a ``# nodes: N`` header (as written by :func:`save_edge_list`).
    """
    edges = []
    seen: dict[tuple[int, int], int] = {}
    declared = None
    max_id = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line, _, comment = raw.partition("#")
        comment = comment.strip()
        if comment.lower().startswith("nodes:"):
            try:
                declared = int(comment.split(":", 1)[1])
            except ValueError:
                raise EdgeListError(lineno, f"bad node-count header {comment!r}") from None
        fields = line.split()
        if not fields:
            continue
        if len(fields) not in (2, 3):
            raise EdgeListError(lineno, f"expected 'i j [w]', got {line.strip()!r}")
        try:
            i, j = int(fields[0]), int(fields[1])
            w = float(fields[2]) if len(fields) == 3 else 1.0
        except ValueError:
            raise EdgeListError(lineno, f"non-numeric field in {line.strip()!r}") from None
        if i < 0 or j < 0:
            raise EdgeListError(lineno, "negative node id")
        if i == j:
            raise EdgeListError(lineno, f"self-loop at node {i}")
        if not (w > 0 and math.isfinite(w)):
            raise EdgeListError(lineno, f"non-positive weight {fields[2]}")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise EdgeListError(lineno, f"duplicate edge {key} (first on line {seen[key]})")
        seen[key] = lineno
        edges.append((i, j, w))
        max_id = max(max_id, i, j)
    count = n if n is not None else declared if declared is not None else max_id + 1
    if count <= max_id:
        raise EdgeListError(0, f"node id {max_id} exceeds declared node count {count}")
    return WeightedGraph(count, edges)


def save_edge_list(g: WeightedGraph) -> str:
    lines = [f"# nodes: {g.n}"]
    for i, j, w in g.edges:
        lines.append(f"{i} {j} {w!r}")
    return "\n".join(lines) + "\n"
