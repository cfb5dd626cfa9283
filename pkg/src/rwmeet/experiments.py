"""Experiment drivers shared by the CLI and the acceptance suite.

A sweep cell generates one graph, evaluates the spectral meeting time for a
fixed start node ``a`` against several partners ``b``, and simulates each
pair. Seeds for the graph, the partner choice and each pair's simulation are
derived from the master seed and the cell's identity, never from its
position in the sweep, so cells can be computed in any order.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass, field

import numpy as np

from ._rng import derive_seed
from .errors import DomainError, GenerationError
from .generators import params_for_target_degree
from .graph import GraphStats, WeightedGraph, check_assumptions, compute_stats
from .meeting import MeetingModel, principal_component
from .simulation import DEFAULT_T_MAX, _run_batch, monte_carlo_meeting, relative_error, run_keys
from .spectral import decompose

DEFAULT_RUNS = 10_000


@dataclass(frozen=True)
class ExperimentConfig:
    """Base experiment configuration: n=1000, unit weights, d_avg=6, start node 0."""
    model: str = "BA"
    n: int = 1000
    d_avg_target: float = 6.0
    start_a: int = 0
    start_b: tuple | str = "sweep"
    runs: int = DEFAULT_RUNS
    master_seed: int = 1
    t_max: int = DEFAULT_T_MAX
    output: str | None = None


def cell_seed(master_seed: int, model: str, n: int, d_avg: float) -> int:
    tag = f"{model.upper()}:{n}:{d_avg!r}".encode()
    return derive_seed(master_seed, zlib.crc32(tag))


def build_graph(model: str, n: int, d_avg: float, seed: int) -> WeightedGraph:
    return params_for_target_degree(model, n, d_avg, seed).generate()


def pick_partners(n: int, a: int, count: int, seed: int) -> list[int]:
    """``count`` distinct nodes other than ``a``, in a seed-determined order."""
    rng = np.random.default_rng(derive_seed(seed, 0xB))
    others = np.array([v for v in range(n) if v != a])
    return [int(v) for v in rng.permutation(others)[:count]]


@dataclass(frozen=True)
class PairResult:
    a: int
    b: int
    mu_spectral: float
    mu_sim: float
    std_error: float
    truncated: int
    eps: float
    eps_prime: float


@dataclass
class CellResult:
    model: str
    n: int
    d_avg_target: float
    seed: int
    stats: GraphStats | None = None
    principal: float = math.nan
    pairs: list = field(default_factory=list)
    error: str = ""

    @property
    def ok(self) -> bool:
        return not self.error

    def _col(self, name):
        return np.array([getattr(p, name) for p in self.pairs], dtype=float)

    @property
    def eps_avg(self) -> float:
        return float(np.mean(self._col("eps"))) if self.pairs else math.nan

    @property
    def eps_max(self) -> float:
        return float(np.max(self._col("eps"))) if self.pairs else math.nan

    @property
    def eps_prime_avg(self) -> float:
        return float(np.mean(self._col("eps_prime"))) if self.pairs else math.nan

    @property
    def mu_sim(self) -> float:
        return float(np.mean(self._col("mu_sim"))) if self.pairs else math.nan

    @property
    def mu_spectral(self) -> float:
        return float(np.mean(self._col("mu_spectral"))) if self.pairs else math.nan

    CSV_HEADER = ("n", "d_avg", "model", "eps_avg", "eps_max", "eps_prime_avg", "principal",
                  "mu_sim", "mu_spectral", "d_avg_actual", "seed", "error")

    def csv_row(self) -> tuple:
        d_act = self.stats.d_avg if self.stats else math.nan
        return (self.n, self.d_avg_target, self.model, self.eps_avg, self.eps_max,
                self.eps_prime_avg, self.principal, self.mu_sim, self.mu_spectral, d_act,
                self.seed, self.error)


def run_cell(model: str, n: int, d_avg: float, master_seed: int, pairs: int = 10,
             runs: int = DEFAULT_RUNS, a: int = 0, t_max: int = DEFAULT_T_MAX) -> CellResult:
    """Generate, analyse and simulate one (model, n, d_avg) cell.

    Failures (no connected graph, bipartite graph) are recorded in
    ``CellResult.error`` instead of raised.
    """
    seed = cell_seed(master_seed, model, n, d_avg)
    cell = CellResult(model.upper(), n, d_avg, seed)
    try:
        g = build_graph(model, n, d_avg, seed)
    except (GenerationError, DomainError) as exc:
        cell.error = str(exc)
        return cell
    cell.stats = stats = compute_stats(g)
    cell.principal = principal_component(stats)
    report = check_assumptions(g)
    if report.bipartite:
        cell.error = "graph is bipartite; meeting formula undefined"
        return cell
    model_ = MeetingModel(decompose(g), stats)
    for k, b in enumerate(pick_partners(n, a, pairs, seed)):
        sim = monte_carlo_meeting(g, a, b, runs, derive_seed(seed, 1000 + k), t_max)
        mu = model_.meeting_time(a, b)
        cell.pairs.append(PairResult(
            a=a, b=b, mu_spectral=mu, mu_sim=sim.mean_time, std_error=sim.std_error,
            truncated=sim.truncated_runs, eps=relative_error(mu, sim),
            eps_prime=relative_error(cell.principal, sim),
        ))
    return cell


def random_pair_meeting(g: WeightedGraph, runs: int, seed: int, t_max: int = DEFAULT_T_MAX):
    """Mean first meeting time with fresh uniformly random distinct starts per run.

    Returns ``(mean, std_error, truncated)``. Start pairs come from ``seed``;
    run ``r`` walks with the stream of run index ``r``.
    """
    rng = np.random.default_rng(derive_seed(seed, 0xA))
    a = rng.integers(g.n, size=runs)
    b = (a + 1 + rng.integers(g.n - 1, size=runs)) % g.n
    times, nodes = _run_batch(g, a, b, run_keys(seed, np.arange(runs)), t_max)
    met = times[nodes >= 0]
    if met.size == 0:
        return math.nan, math.nan, runs
    std = float(np.std(met, ddof=1)) if met.size > 1 else 0.0
    return float(met.mean()), std / math.sqrt(runs), int(runs - met.size)
