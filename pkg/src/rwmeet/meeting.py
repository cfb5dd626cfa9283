"""Expected first meeting time of two independent synchronous walkers.

The spectral expression assumes that, once the walkers have met, the node
of the meeting is distributed in proportion to ``d_c**2``. Under that
assumption the expected time from distinct start nodes ``a, b`` is::

    mu(a, b) = s1**2 * sum_{(k,l) != (1,1)} M[k,l] * (M[k,l] - u_k(a) u_l(b)) / (1 - lam_k lam_l)

with ``u_k(i) = q_k(i) / sqrt(d_i)`` and ``M[k,l] = sum_c (d_c**2 / s2) u_k(c) u_l(c)``.
``MeetingModel`` caches the pair-independent parts so each extra pair costs
O(n^2). ``first_meeting_decomposed`` recomputes the same value node by node
from single-walker hitting times; ``first_meeting_time_naive`` is a direct
quadruple sum for small graphs.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericWarning
from .graph import GraphStats
from .spectral import SPECTRAL_GAP_EPS, SpectralDecomposition, hitting_time_matrix, occupancy_vector

NAIVE_MAX_NODES = 12
EXPLICIT_DECOMPOSITION_MAX_NODES = 60


def principal_component(stats: GraphStats) -> float:
    """``s1**2 / s2``, equivalently ``n / (1 + (d_std / d_avg)**2)``."""
    if stats.n < 2:
        raise DomainError("need n >= 2")
    return stats.s1 ** 2 / stats.s2


def meeting_error_bound(stats: GraphStats, lambda2: float) -> float:
    """Upper bound on ``|mu(a, b) / s1**2 - 1 / s2|``."""
    if lambda2 >= 1.0 - SPECTRAL_GAP_EPS:
        warnings.warn(f"lambda2={lambda2!r} is within {SPECTRAL_GAP_EPS} of 1",
                      NumericWarning, stacklevel=2)
    if lambda2 >= 1.0:
        return math.inf
    return 2.0 * stats.w_max ** 2 / stats.d_min ** 4 * (1.0 / (1.0 - lambda2) + 1.0)


def _resolvent(lam: np.ndarray, z: float = 1.0) -> np.ndarray:
    """``1 / (1 - lam_k lam_l z)`` with the (1, 1) entry zeroed when z == 1."""
    gap = 1.0 - np.outer(lam, lam) * z
    if z == 1.0:
        gap[0, 0] = 1.0
        tiny = gap < SPECTRAL_GAP_EPS
        tiny[0, 0] = False
        if tiny.any():
            warnings.warn(f"{int(tiny.sum())} eigenpair products have 1 - lam_k lam_l < "
                          f"{SPECTRAL_GAP_EPS}", NumericWarning, stacklevel=3)
    res = 1.0 / gap
    if z == 1.0:
        res[0, 0] = 0.0
    return res


def _require_meetable(dec: SpectralDecomposition):
    if dec.bipartite:
        raise DomainError("meeting time formulas need a non-bipartite graph")


def _require_pair(dec, a, b):
    for v in (a, b):
        if not 0 <= v < dec.n:
            raise DomainError(f"node {v} out of range 0..{dec.n - 1}")
    if a == b:
        raise DomainError("start nodes must differ (re-encountering time is not supported)")


class MeetingModel:
    """Pair-independent aggregates of the meeting-time formula for one graph."""

    def __init__(self, dec: SpectralDecomposition, stats: GraphStats):
        _require_meetable(dec)
        self.dec = dec
        self.stats = stats
        self._u = dec.scaled
        w = dec.degrees ** 2 / stats.s2
        m = self._u.T @ (w[:, None] * self._u)
        self._ml = m * _resolvent(dec.eigenvalues)
        self._const = float(np.sum(self._ml * m))

    def meeting_time(self, a: int, b: int) -> float:
        _require_pair(self.dec, a, b)
        if a > b:
            a, b = b, a
        cross = float(self._u[a] @ self._ml @ self._u[b])
        return self.stats.s1 ** 2 * (self._const - cross)

    def meeting_time_matrix(self) -> np.ndarray:
        """All-pairs meeting times (diagonal set to NaN)."""
        cross = self._u @ self._ml @ self._u.T
        out = self.stats.s1 ** 2 * (self._const - 0.5 * (cross + cross.T))
        np.fill_diagonal(out, np.nan)
        return out


def first_meeting_time_spectral(dec: SpectralDecomposition, stats: GraphStats, a: int, b: int) -> float:
    """Expected first meeting time of walkers started at distinct nodes ``a`` and ``b``."""
    _require_pair(dec, a, b)
    return MeetingModel(dec, stats).meeting_time(a, b)


def first_meeting_time_naive(dec: SpectralDecomposition, stats: GraphStats, a: int, b: int) -> float:
    """Reference evaluation by explicit loops over nodes and eigenpairs (n <= 12)."""
    _require_meetable(dec)
    _require_pair(dec, a, b)
    n = dec.n
    if n > NAIVE_MAX_NODES:
        raise DomainError(f"naive evaluator is limited to n <= {NAIVE_MAX_NODES}")
    lam = [float(x) for x in dec.eigenvalues]
    q = dec.eigenvectors.tolist()
    d = [float(x) for x in dec.degrees]
    s1, s2 = stats.s1, stats.s2
    pairs = [(k, l, 1.0 / (1.0 - lam[k] * lam[l]))
             for k in range(n) for l in range(n) if (k, l) != (0, 0)]
    stay = 0.0
    for c in range(n):
        for cp in range(n):
            acc = 0.0
            for k, l, r in pairs:
                acc += q[c][k] * q[cp][k] * q[c][l] * q[cp][l] * r
            stay += d[c] * d[cp] * acc
    start = 0.0
    for c in range(n):
        acc = 0.0
        for k, l, r in pairs:
            acc += q[a][k] * q[c][k] * q[b][l] * q[c][l] * r
        start += d[c] / math.sqrt(d[a] * d[b]) * acc
    return s1 ** 2 / s2 ** 2 * (stay - s2 * start)


class _NodeWise:
    """Per-node pieces: hitting times and the two-walker correction term."""

    def __init__(self, dec: SpectralDecomposition):
        _require_meetable(dec)
        self.dec = dec
        self.hit = hitting_time_matrix(dec)
        self.v = dec.scaled[:, 1:]
        self.res = _resolvent(dec.eigenvalues)[1:, 1:]
        v2 = self.v * self.v
        self.diag_term = np.sum((v2 @ self.res) * v2, axis=1)

    def at_nodes(self, a: int, b: int) -> np.ndarray:
        """Expected meeting time at each node c, for start nodes a and b (a == b allowed)."""
        va, vb = self.v * self.v[a], self.v * self.v[b]
        cross = np.sum((va @ self.res) * vb, axis=1)
        s1 = self.dec.s1
        return self.hit[a] + self.hit[b] + s1 ** 2 * (self.diag_term - cross)


def first_meeting_time_at_node(dec: SpectralDecomposition, a: int, b: int, c: int) -> float:
    """Expected time for walkers from ``a`` and ``b`` to first meet, given they meet at ``c``.

    Equals ``hitting_time(a, c) + hitting_time(b, c)`` plus a correction built
    from the non-principal eigenpairs.
    """
    _require_pair(dec, a, b)
    if not 0 <= c < dec.n:
        raise DomainError(f"node {c} out of range")
    return float(_NodeWise(dec).at_nodes(a, b)[c])


def first_meeting_decomposed(dec: SpectralDecomposition, stats: GraphStats, a: int, b: int,
                             explicit: bool | None = None) -> float:
    """Meeting time as a ``d_c**2``-weighted average of per-node meeting times.

    The restart term averages the same-start meeting times ``mu(c', c'; c)``
    over ``c'`` and ``c``. With ``explicit`` (default for n <= 60) every
    ``mu(c', c'; c)`` is formed; otherwise the double average is aggregated
    over eigenpairs first.
    """
    _require_pair(dec, a, b)
    return _decomposed(_NodeWise(dec), stats, a, b, explicit)


def _decomposed(nw: _NodeWise, stats: GraphStats, a: int, b: int, explicit: bool | None) -> float:
    dec = nw.dec
    w = dec.degrees ** 2 / stats.s2
    first = float(w @ nw.at_nodes(a, b))
    if explicit is None:
        explicit = dec.n <= EXPLICIT_DECOMPOSITION_MAX_NODES
    if explicit:
        restart = 0.0
        for cp in range(dec.n):
            restart += w[cp] * float(w @ nw.at_nodes(cp, cp))
    else:
        v = nw.v
        m2 = v.T @ (w[:, None] * v)
        s1 = dec.s1
        mean_hit = float(w @ nw.hit @ w)
        restart = 2.0 * mean_hit + s1 ** 2 * (float(w @ nw.diag_term) - float(np.sum(m2 * nw.res * m2)))
    return first - restart


def joint_meeting_probability(dec: SpectralDecomposition, a: int, b: int, t: int) -> float:
    """Probability that walkers from ``a`` and ``b`` share a node at step ``t``."""
    return float(np.dot(occupancy_vector(dec, a, t), occupancy_vector(dec, b, t)))


def joint_gf(dec: SpectralDecomposition, a: int, b: int, z: float) -> float:
    """Generating function ``sum_t P(same node at t) z**t`` in closed form."""
    if z >= 1.0:
        raise DomainError("generating function is evaluated only for z < 1")
    if dec.bipartite and z <= -1.0:
        raise DomainError("z <= -1 diverges on a bipartite graph")
    for v in (a, b):
        if not 0 <= v < dec.n:
            raise DomainError(f"node {v} out of range")
    q, d = dec.eigenvectors, dec.degrees
    overlap = q.T @ (d[:, None] * q)
    lam = dec.eigenvalues
    res = 1.0 / (1.0 - np.outer(lam, lam) * z)
    return float(q[a] @ (overlap * res) @ q[b]) / math.sqrt(d[a] * d[b])


@dataclass(frozen=True)
class MeetingAnalysis:
    a: int
    b: int
    mu_ab: float
    mu_ab_decomposed: float
    principal: float
    error_bound_rhs: float
    lambda2: float

    CSV_HEADER = ("a", "b", "mu_spectral", "mu_decomposed", "principal", "error_bound", "lambda2")

    def csv_row(self, offset: int = 0) -> tuple:
        return (self.a + offset, self.b + offset, self.mu_ab, self.mu_ab_decomposed,
                self.principal, self.error_bound_rhs, self.lambda2)

    def bound_gap(self, stats: GraphStats) -> float:
        """``|mu / s1**2 - 1 / s2|``, to compare against ``error_bound_rhs``."""
        return abs(self.mu_ab / stats.s1 ** 2 - 1.0 / stats.s2)


def analyze_pairs(dec: SpectralDecomposition, stats: GraphStats, pairs) -> list[MeetingAnalysis]:
    model = MeetingModel(dec, stats)
    principal = principal_component(stats)
    bound = meeting_error_bound(stats, dec.lambda2)
    nw = _NodeWise(dec)
    out = []
    for a, b in pairs:
        _require_pair(dec, a, b)
        out.append(MeetingAnalysis(
            a=a, b=b,
            mu_ab=model.meeting_time(a, b),
            mu_ab_decomposed=_decomposed(nw, stats, a, b, None),
            principal=principal,
            error_bound_rhs=bound,
            lambda2=dec.lambda2,
        ))
    return out
