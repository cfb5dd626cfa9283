"""Spectral analysis of a single random walk.

Everything here works with the symmetric operator ``W = D^-1/2 A D^-1/2``
whose eigenpairs ``(lambda_k, q_k)`` are sorted so that ``lambda_1 = 1`` comes
first. The walk's transition matrix ``A D^-1`` is similar to ``W``, so the
occupancy probabilities and expected hitting times have closed forms in
these eigenpairs.
"""

from __future__ import annotations

import io
import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DomainError, NumericWarning
from .graph import GraphStats, WeightedGraph, check_assumptions

DEFAULT_MAX_NODES = 5000
SPECTRAL_GAP_EPS = 1e-12


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    eigenvalues: np.ndarray  # descending
    eigenvectors: np.ndarray  # column k pairs with eigenvalues[k]
    degrees: np.ndarray
    s1: float
    bipartite: bool = False

    @property
    def n(self) -> int:
        return self.degrees.size

    @property
    def lambda2(self) -> float:
        return float(self.eigenvalues[1])

    @property
    def scaled(self) -> np.ndarray:
        """``q_k(i) / sqrt(d_i)``, the form most formulas consume."""
        return self.eigenvectors / np.sqrt(self.degrees)[:, None]

    def with_signs(self, signs) -> "SpectralDecomposition":
        """Copy with eigenvector columns multiplied by ``signs`` (each +-1)."""
        signs = np.asarray(signs, dtype=float)
        return SpectralDecomposition(self.eigenvalues, self.eigenvectors * signs[None, :],
                                     self.degrees, self.s1, self.bipartite)


def normalized_adjacency(g: WeightedGraph) -> np.ndarray:
    a = g.adjacency(dense=True)
    r = 1.0 / np.sqrt(g.degrees)
    return a * r[:, None] * r[None, :]


def decompose(g: WeightedGraph, max_nodes: int = DEFAULT_MAX_NODES) -> SpectralDecomposition:
    """Full eigendecomposition of ``W``.

    Eigenvector signs are fixed so the largest-magnitude entry of each column
    is positive; that makes ``q_1`` entrywise non-negative.
    """
    if g.n > max_nodes:
        raise DomainError(f"n={g.n} exceeds the dense eigensolver cap {max_nodes}")
    report = check_assumptions(g)
    if not report.connected:
        raise DomainError("graph is not connected")
    w = normalized_adjacency(g)
    try:
        lam, q = scipy.linalg.eigh(w)
    except np.linalg.LinAlgError as exc:
        raise ArithmeticError(f"eigensolver failed: {exc}") from exc

    idx = np.argmax(np.abs(q), axis=0)
    q = q * np.sign(q[idx, np.arange(q.shape[1])])[None, :]
    # primary key: eigenvalue descending; ties by eigenvector entries
    keys = tuple(q[::-1]) + (-lam,)
    order = np.lexsort(keys)
    lam, q = lam[order], np.ascontiguousarray(q[:, order])
    for arr in (lam, q):
        arr.setflags(write=False)
    d = g.degrees
    return SpectralDecomposition(lam, q, d, math.fsum(d), report.bipartite)


def occupancy_vector(dec: SpectralDecomposition, a: int, t: int) -> np.ndarray:
    """Distribution of a walker started at ``a`` after ``t`` steps."""
    if t < 0:
        raise DomainError("t must be non-negative")
    _check(dec, a)
    q = dec.eigenvectors
    x = q @ (q[a] * dec.eigenvalues ** t)
    return x * np.sqrt(dec.degrees) / math.sqrt(dec.degrees[a])


def occupancy_probability(dec: SpectralDecomposition, a: int, i: int, t: int) -> float:
    _check(dec, i)
    return float(occupancy_vector(dec, a, t)[i])


def occupancy_evolution(g: WeightedGraph, a: int, t: int) -> np.ndarray:
    """Same distribution as :func:`occupancy_vector`, by iterating ``x <- A D^-1 x``."""
    if t < 0:
        raise DomainError("t must be non-negative")
    if not 0 <= a < g.n:
        raise DomainError(f"node {a} out of range")
    adj = g.adjacency()
    inv_d = 1.0 / g.degrees
    x = np.zeros(g.n)
    x[a] = 1.0
    for _ in range(t):
        x = adj @ (x * inv_d)
    return x


def stationary_distribution(g: WeightedGraph) -> np.ndarray:
    d = g.degrees
    return d / math.fsum(d)


def hitting_time(dec: SpectralDecomposition, a: int, i: int) -> float:
    """Expected number of steps for a walker from ``a`` to first reach ``i``."""
    _check(dec, a)
    _check(dec, i)
    if a == i:
        return 0.0
    u = dec.scaled
    inv_gap = 1.0 / (1.0 - dec.eigenvalues[1:])
    return float(dec.s1 * np.dot(inv_gap, u[i, 1:] * (u[i, 1:] - u[a, 1:])))


def hitting_time_matrix(dec: SpectralDecomposition) -> np.ndarray:
    """All-pairs hitting times; entry ``[a, i]`` is the time from a to i."""
    u = dec.scaled[:, 1:]
    g = (u / (1.0 - dec.eigenvalues[1:])) @ u.T
    out = dec.s1 * (np.diag(g)[None, :] - g)
    np.fill_diagonal(out, 0.0)
    return out


def hitting_time_approx(dec: SpectralDecomposition, i: int) -> float:
    _check(dec, i)
    return dec.s1 / float(dec.degrees[i])


def hitting_time_bound(stats: GraphStats, lambda2: float) -> float:
    """Upper bound on ``|hitting_time / s1 - 1 / d_i|``."""
    _warn_gap(lambda2)
    if lambda2 >= 1.0:
        return math.inf
    return 2.0 * stats.w_max / stats.d_min ** 2 * (1.0 / (1.0 - lambda2) + 1.0)


def spectrum_csv(dec: SpectralDecomposition) -> str:
    """``k,lambda,q_k(0),...,q_k(n-1)`` rows, for debugging."""
    buf = io.StringIO()
    buf.write("k,lambda," + ",".join(f"q{i}" for i in range(dec.n)) + "\n")
    for k in range(dec.n):
        vals = [repr(float(dec.eigenvalues[k]))] + [repr(float(v)) for v in dec.eigenvectors[:, k]]
        buf.write(f"{k + 1}," + ",".join(vals) + "\n")
    return buf.getvalue()


def _warn_gap(lambda2):
    if lambda2 >= 1.0 - SPECTRAL_GAP_EPS:
        warnings.warn(f"lambda2={lambda2!r} is within {SPECTRAL_GAP_EPS} of 1; "
                      "graph is nearly disconnected", NumericWarning, stacklevel=3)


def _check(dec, i):
    if not 0 <= i < dec.n:
        raise DomainError(f"node {i} out of range 0..{dec.n - 1}")
