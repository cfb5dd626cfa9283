"""Exact expectations on small graphs by absorbing Markov chain solves.

Used as ground truth for the spectral formulas and the simulator. Both
walkers move simultaneously, so two walkers form a chain on ordered pairs
``(u, v)``; the diagonal pairs are absorbing. A value of ``math.inf`` means
absorption is not certain from the start state.
"""

from __future__ import annotations

import math
from collections import deque

import numpy as np

from .errors import DomainError
from .graph import WeightedGraph

SINGLE_MAX_NODES = 200
PAIR_MAX_NODES = 60


def transition_matrix(g: WeightedGraph) -> np.ndarray:
    """Row-stochastic ``P[u, v] = w_uv / d_u``."""
    return g.adjacency(dense=True) / g.degrees[:, None]


def _reach(adj_lists, sources):
    seen = set(sources)
    queue = deque(sources)
    while queue:
        u = queue.popleft()
        for v in adj_lists[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def exact_hitting_time(g: WeightedGraph, a: int, i: int, max_nodes: int = SINGLE_MAX_NODES) -> float:
    """Expected steps from ``a`` to first reach ``i``; ``inf`` if ``i`` is unreachable."""
    n = g.n
    if n > max_nodes:
        raise DomainError(f"n={n} exceeds the oracle cap {max_nodes}")
    for v in (a, i):
        if not 0 <= v < n:
            raise DomainError(f"node {v} out of range")
    if a == i:
        return 0.0
    nbrs = [[j for j, _ in g.neighbors(u)] for u in range(n)]
    if i not in _reach(nbrs, [a]):
        return math.inf
    keep = [u for u in range(n) if u != i]
    p = transition_matrix(g)[np.ix_(keep, keep)]
    tau = np.linalg.solve(np.eye(n - 1) - p, np.ones(n - 1))
    return float(tau[keep.index(a)])


class ProductChain:
    """Two independent walkers moving in lockstep, stopped on co-location."""

    def __init__(self, g: WeightedGraph, max_nodes: int = PAIR_MAX_NODES):
        if g.n > max_nodes:
            raise DomainError(f"n={g.n} exceeds the product-chain cap {max_nodes}")
        self.g = g
        self.n = n = g.n
        self.p = transition_matrix(g)
        self.transient = [(u, v) for u in range(n) for v in range(n) if u != v]
        self.index = {s: k for k, s in enumerate(self.transient)}
        # full pair kernel: row (u,v) -> column (u',v') at u'*n + v'
        kron = np.kron(self.p, self.p)
        rows = [u * n + v for u, v in self.transient]
        cols_t = rows
        cols_abs = [c * n + c for c in range(n)]
        self.q = kron[np.ix_(rows, cols_t)]
        self.r = kron[np.ix_(rows, cols_abs)]

    def _successors(self, state):
        u, v = state
        nu = [j for j, _ in self.g.neighbors(u)]
        nv = [j for j, _ in self.g.neighbors(v)]
        return [(x, y) for x in nu for y in nv]

    def _restricted(self, a, b):
        """Transient states reachable from (a, b), or None if meeting is not certain."""
        seen = {(a, b)}
        order = [(a, b)]
        queue = deque(order)
        absorbs = False
        while queue:
            s = queue.popleft()
            for t in self._successors(s):
                if t[0] == t[1]:
                    absorbs = True
                elif t not in seen:
                    seen.add(t)
                    order.append(t)
                    queue.append(t)
        if not absorbs:
            return None
        # every reachable state must itself be able to reach the diagonal
        can_absorb = {s for s in order if any(t[0] == t[1] for t in self._successors(s))}
        frontier = deque(can_absorb)
        preds = {s: [] for s in order}
        for s in order:
            for t in self._successors(s):
                if t in preds:
                    preds[t].append(s)
        while frontier:
            s = frontier.popleft()
            for p in preds[s]:
                if p not in can_absorb:
                    can_absorb.add(p)
                    frontier.append(p)
        if len(can_absorb) != len(order):
            return None
        return [self.index[s] for s in order]

    def _check(self, a, b):
        for v in (a, b):
            if not 0 <= v < self.n:
                raise DomainError(f"node {v} out of range")
        if a == b:
            raise DomainError("start nodes must differ")

    def meeting_time(self, a: int, b: int) -> float:
        self._check(a, b)
        idx = self._restricted(a, b)
        if idx is None:
            return math.inf
        q = self.q[np.ix_(idx, idx)]
        tau = np.linalg.solve(np.eye(len(idx)) - q, np.ones(len(idx)))
        return float(tau[0])

    def meeting_node_distribution(self, a: int, b: int) -> np.ndarray:
        """Probability that the first meeting happens at each node."""
        self._check(a, b)
        idx = self._restricted(a, b)
        if idx is None:
            raise DomainError(f"walkers from {a} and {b} are not certain to meet")
        q = self.q[np.ix_(idx, idx)]
        e0 = np.zeros(len(idx))
        e0[0] = 1.0
        # row vector of expected visits from (a, b)
        visits = np.linalg.solve((np.eye(len(idx)) - q).T, e0)
        return visits @ self.r[idx]


def exact_first_meeting_time(g: WeightedGraph, a: int, b: int, max_nodes: int = PAIR_MAX_NODES) -> float:
    return ProductChain(g, max_nodes).meeting_time(a, b)


def exact_meeting_node_distribution(g: WeightedGraph, a: int, b: int,
                                    max_nodes: int = PAIR_MAX_NODES) -> np.ndarray:
    return ProductChain(g, max_nodes).meeting_node_distribution(a, b)
