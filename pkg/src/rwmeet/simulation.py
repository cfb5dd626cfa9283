"""Monte Carlo simulation of two synchronous random walkers.

Both walkers move at every step; they meet when they occupy the same node
after a move. Crossing each other along an edge is not a meeting, and the
start position never counts.

Run ``r`` draws all of its randomness from its own counter-based stream
(see :mod:`rwmeet._rng`), so a report depends only on the inputs and the
master seed. Runs are advanced together as numpy arrays.
"""

from __future__ import annotations

import io
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sps

from ._rng import GOLDEN, RNG_FAMILY, mix64_array, uniforms
from .errors import DomainError, FitError, ParityWarning
from .graph import GraphStats, WeightedGraph, check_assumptions
from .meeting import principal_component

DEFAULT_T_MAX = 10_000_000


def run_keys(master_seed: int, runs) -> np.ndarray:
    """Stream key of each run index in ``runs``."""
    idx = np.asarray(runs, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64_array(np.uint64(master_seed & ((1 << 64) - 1)) ^ mix64_array(idx + np.uint64(GOLDEN)))


class _Stepper:
    def __init__(self, g: WeightedGraph):
        self.indptr = g.indptr
        self.indices = g.indices
        self.deg = g.degrees
        self.cum = np.cumsum(g.weights)
        self.row_base = np.concatenate(([0.0], self.cum))[g.indptr[:-1]]
        self.row_last = g.indptr[1:] - 1

    def step(self, pos: np.ndarray, keys: np.ndarray, counter: int) -> np.ndarray:
        target = self.row_base[pos] + uniforms(keys, counter) * self.deg[pos]
        e = np.searchsorted(self.cum, target, side="right")
        return self.indices[np.minimum(e, self.row_last[pos])]


@dataclass(frozen=True)
class FirstMeetingSample:
    time: int
    node: int | None
    truncated: bool = False


@dataclass(frozen=True)
class SimulationReport:
    a: int
    b: int
    runs: int
    mean_time: float
    std_dev: float
    std_error: float
    node_frequency: dict
    seed: int
    truncated_runs: int
    t_max: int
    times: np.ndarray = field(repr=False, compare=False)

    @property
    def mean_defined(self) -> bool:
        return self.runs > self.truncated_runs

    @property
    def meetings(self) -> int:
        return self.runs - self.truncated_runs

    CSV_HEADER = ("a", "b", "runs", "mean", "std_err", "truncated", "seed")

    def csv_row(self, offset: int = 0) -> tuple:
        return (self.a + offset, self.b + offset, self.runs, self.mean_time, self.std_error,
                self.truncated_runs, self.seed)

    def frequency_rows(self, offset: int = 0):
        return [(c + offset, k) for c, k in sorted(self.node_frequency.items())]


def _check_pair(g, a, b, t_max):
    for v in (a, b):
        if not 0 <= v < g.n:
            raise DomainError(f"node {v} out of range 0..{g.n - 1}")
    if a == b:
        raise DomainError("start nodes must differ")
    if t_max < 1:
        raise DomainError("t_max must be at least 1")


def _parity_blocked(g: WeightedGraph, a: int, b: int) -> bool:
    report = check_assumptions(g)
    return report.bipartite and report.connected and report.coloring[a] != report.coloring[b]


def _run_batch(g, a, b, keys, t_max):
    """Advance all runs together; ``a`` and ``b`` may be per-run arrays."""
    stepper = _Stepper(g)
    runs = keys.size
    times = np.zeros(runs, dtype=np.int64)
    nodes = np.full(runs, -1, dtype=np.int64)
    active = np.arange(runs)
    pa = np.array(np.broadcast_to(a, runs), dtype=np.int64)
    pb = np.array(np.broadcast_to(b, runs), dtype=np.int64)
    t = 0
    while active.size and t < t_max:
        t += 1
        k = keys[active]
        pa = stepper.step(pa, k, 2 * t)
        pb = stepper.step(pb, k, 2 * t + 1)
        met = pa == pb
        if met.any():
            times[active[met]] = t
            nodes[active[met]] = pa[met]
            keep = ~met
            active, pa, pb = active[keep], pa[keep], pb[keep]
    return times, nodes


def simulate_first_meeting(g: WeightedGraph, a: int, b: int, seed: int, run: int = 0,
                           t_max: int = DEFAULT_T_MAX) -> FirstMeetingSample:
    """One run: walkers from ``a`` and ``b`` until they share a node or ``t_max`` steps pass.

    Uses the stream of run index ``run`` under ``seed``, so the outcome equals
    the corresponding run inside :func:`monte_carlo_meeting`.
    """
    _check_pair(g, a, b, t_max)
    times, nodes = _run_batch(g, a, b, run_keys(seed, [run]), t_max)
    if nodes[0] < 0:
        return FirstMeetingSample(time=t_max, node=None, truncated=True)
    return FirstMeetingSample(time=int(times[0]), node=int(nodes[0]))


def monte_carlo_meeting(g: WeightedGraph, a: int, b: int, runs: int, master_seed: int,
                        t_max: int = DEFAULT_T_MAX) -> SimulationReport:
    """Repeat :func:`simulate_first_meeting` for run indices ``0 .. runs-1``.

    Truncated runs are excluded from the mean. If the graph is bipartite and
    ``a``, ``b`` lie on opposite sides, every run is reported as truncated
    without stepping, since the walkers' sides flip together each step.
    """
    _check_pair(g, a, b, t_max)
    if runs < 1:
        raise DomainError("runs must be at least 1")
    if _parity_blocked(g, a, b):
        warnings.warn(f"nodes {a} and {b} are on opposite sides of a bipartite graph; "
                      "the walkers can never meet", ParityWarning, stacklevel=2)
        times = np.zeros(0, dtype=np.int64)
        return SimulationReport(a, b, runs, math.nan, math.nan, math.nan, {}, master_seed,
                                runs, t_max, times)

    times, nodes = _run_batch(g, a, b, run_keys(master_seed, np.arange(runs)), t_max)
    done = nodes >= 0
    met_times = times[done]
    k = met_times.size
    if k:
        mean = float(met_times.sum()) / k
        std = float(np.std(met_times, ddof=1)) if k > 1 else 0.0
    else:
        mean = std = math.nan
    counts = np.bincount(nodes[done], minlength=g.n)
    freq = {int(c): int(counts[c]) for c in np.flatnonzero(counts)}
    return SimulationReport(a, b, runs, mean, std, std / math.sqrt(runs), freq, master_seed,
                            runs - k, t_max, met_times)


def simulate_positions(g: WeightedGraph, a: int, t: int, runs: int, seed: int) -> np.ndarray:
    """Positions after ``t`` steps of ``runs`` independent single walkers from ``a``."""
    stepper = _Stepper(g)
    keys = run_keys(seed, np.arange(runs))
    pos = np.full(runs, a, dtype=np.int64)
    for s in range(1, t + 1):
        pos = stepper.step(pos, keys, 2 * s)
    return pos


def relative_error(mu_analytic: float, report: SimulationReport) -> float:
    if not report.mean_defined:
        raise DomainError("simulation mean is undefined (all runs truncated)")
    return abs(mu_analytic - report.mean_time) / report.mean_time


def relative_error_principal(stats: GraphStats, report: SimulationReport) -> float:
    return relative_error(principal_component(stats), report)


@dataclass(frozen=True)
class FrequencyFit:
    exponent: float
    intercept: float
    correlation: float
    nodes_used: int


def meeting_frequency_fit(report: SimulationReport, g: WeightedGraph,
                          min_meetings: int = 1000) -> FrequencyFit:
    """Least-squares fit of ``log(meetings at c)`` against ``log(d_c)``.

    Only nodes with at least one meeting enter the fit. The weighting
    assumption behind the spectral formula predicts an exponent of 2.
    """
    if report.meetings < min_meetings:
        raise DomainError(f"need at least {min_meetings} meetings, have {report.meetings}")
    nodes = np.array(sorted(report.node_frequency), dtype=np.int64)
    counts = np.array([report.node_frequency[c] for c in nodes], dtype=float)
    deg = g.degrees[nodes]
    if np.unique(deg).size < 3:
        raise FitError("fewer than 3 distinct degrees among meeting nodes")
    fit = sps.linregress(np.log(deg), np.log(counts))
    return FrequencyFit(float(fit.slope), float(fit.intercept), float(fit.rvalue), int(nodes.size))


def report_csv(report: SimulationReport, offset: int = 0) -> str:
    buf = io.StringIO()
    buf.write(",".join(SimulationReport.CSV_HEADER) + "\n")
    buf.write(",".join(str(v) for v in report.csv_row(offset)) + "\n")
    return buf.getvalue()


__all__ = [
    "RNG_FAMILY", "DEFAULT_T_MAX", "FirstMeetingSample", "SimulationReport", "FrequencyFit",
    "simulate_first_meeting", "monte_carlo_meeting", "simulate_positions", "relative_error",
    "relative_error_principal", "meeting_frequency_fit", "run_keys",
]
