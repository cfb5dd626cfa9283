"""Barabási–Albert and Erdős–Rényi graph generators.

Both families are coupled to a common target average degree: BA uses
``m = floor(d_avg / 2)`` links per new node and ER uses edge probability
``p = d_avg / (n - 1)``. All generated graphs are unweighted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from ._rng import derive_seed
from .errors import DomainError, GenerationError
from .graph import WeightedGraph, check_assumptions

DEFAULT_MAX_RETRIES = 1000


@dataclass(frozen=True)
class GeneratorParams:
    model: str  # "BA" or "ER"
    n: int
    m: int | None = None
    p: float | None = None
    seed: int = 0
    max_retries: int = DEFAULT_MAX_RETRIES
    seed_size: int | None = None  # BA seed clique; None means m

    def __post_init__(self):
        if self.model not in ("BA", "ER"):
            raise DomainError(f"unknown model {self.model!r}")
        if self.model == "BA" and not (self.m is not None and 1 <= self.m < self.n):
            raise DomainError(f"BA needs 1 <= m < n, got m={self.m}, n={self.n}")
        if self.model == "ER" and not (self.p is not None and 0 < self.p <= 1):
            raise DomainError(f"ER needs 0 < p <= 1, got p={self.p}")

    def generate(self) -> WeightedGraph:
        if self.model == "BA":
            return generate_ba(self.n, self.m, self.seed, seed_size=self.seed_size)
        return generate_er(self.n, self.p, self.seed, self.max_retries)


def params_for_target_degree(model: str, n: int, d_avg_target: float, seed: int = 0,
                             max_retries: int = DEFAULT_MAX_RETRIES) -> GeneratorParams:
    """Generator parameters whose expected average degree is ``d_avg_target``.

    For BA with ``m = 1`` the seed clique is a triangle rather than a single
    node, so the graph is not a tree and stays non-bipartite.
    """
    model = model.upper()
    if model == "BA":
        m = math.floor(d_avg_target / 2)
        if m < 1:
            raise DomainError(f"BA needs a target degree >= 2, got {d_avg_target}")
        return GeneratorParams("BA", n, m=m, seed=seed, max_retries=max_retries,
                               seed_size=3 if m == 1 and n >= 3 else None)
    if model == "ER":
        if n < 2 or not (0 < d_avg_target <= n - 1):
            raise DomainError(f"ER target degree must lie in (0, n-1], got {d_avg_target}")
        return GeneratorParams("ER", n, p=d_avg_target / (n - 1), seed=seed, max_retries=max_retries)
    raise DomainError(f"unknown model {model!r}")


def ba_average_degree(n: int, m: int) -> float:
    """Exact average degree of a BA graph grown from an m-clique."""
    return (m * (m - 1) + 2 * m * (n - m)) / n


def generate_ba(n: int, m: int, seed: int, update_within_step: bool = True,
                seed_size: int | None = None) -> WeightedGraph:
    """Preferential-attachment graph grown from a complete graph on ``seed_size`` nodes.

    ``seed_size`` defaults to ``m``.
    Each new node links to ``m`` distinct existing nodes, each chosen with
    probability proportional to its current degree; a repeated pick is
    redrawn. With ``update_within_step`` the degrees seen by later picks
    include links made earlier in the same insertion, otherwise they are
    frozen at the start of the insertion.

    With ``m = 1`` and the default seed, the single seed node has degree 0,
    so the second node attaches to it unconditionally and the result is a
    tree (bipartite). A seed of 3 nodes avoids that.
    """
    if not (1 <= m < n):
        raise DomainError(f"BA needs 1 <= m < n, got m={m}, n={n}")
    n0 = m if seed_size is None else seed_size
    if not (m <= n0 <= n):
        raise DomainError(f"seed clique size must lie in [m, n], got {n0}")
    rng = np.random.default_rng(seed)
    edges = [(i, j) for i in range(n0) for j in range(i + 1, n0)]
    # each node appears once per incident edge: uniform picks are degree-proportional
    stubs = [v for e in edges for v in e]
    for t in range(n0, n):
        if not stubs:
            targets = list(range(t))
            stubs.extend(targets)
            stubs.extend([t] * len(targets))
            edges.extend((j, t) for j in targets)
            continue
        chosen: list[int] = []
        pool_size = len(stubs)
        while len(chosen) < m:
            j = stubs[int(rng.integers(pool_size))]
            if j in chosen:
                continue
            chosen.append(j)
            if update_within_step:
                stubs.append(j)
                pool_size += 1
        if not update_within_step:
            stubs.extend(chosen)
        stubs.extend([t] * m)
        edges.extend((j, t) for j in chosen)
    g = WeightedGraph(n, edges)
    report = check_assumptions(g)
    assert report.connected
    assert (m < 2 and n0 < 3) or not report.bipartite
    return g


def er_attempt_seed(seed: int, attempt: int) -> int:
    return derive_seed(seed, attempt)


def _er_once(n: int, p: float, seed: int):
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    return iu[keep], ju[keep]


def generate_er(n: int, p: float, seed: int, max_retries: int = DEFAULT_MAX_RETRIES) -> WeightedGraph:
    """G(n, p) conditioned on connectivity by regeneration.

    Attempt ``k`` draws from ``derive_seed(seed, k)``; a :class:`GenerationError`
    is raised once ``max_retries`` attempts all came out disconnected.
    """
    if not (0 < p <= 1):
        raise DomainError(f"ER needs 0 < p <= 1, got p={p}")
    if n < 2:
        raise DomainError("ER needs n >= 2")
    for attempt in range(max_retries):
        i, j = _er_once(n, p, er_attempt_seed(seed, attempt))
        adj = sp.coo_array((np.ones(i.size), (i, j)), shape=(n, n))
        ncomp, _ = connected_components(adj, directed=False)
        if ncomp == 1:
            return WeightedGraph(n, zip(i.tolist(), j.tolist()))
    raise GenerationError(f"no connected ER graph with n={n}, p={p:.6g}", attempts=max_retries)
